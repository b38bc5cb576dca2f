#include "cjssrr/report.hpp"

#include <cmath>

namespace cjssrr {

using json = nlohmann::ordered_json;

namespace {

json optional_size(const std::optional<std::size_t>& v) { return v ? json(*v) : json("auto"); }

// JSON has no infinity; unbounded values become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void setup_to_json(const SolveSetup& s, const RunConfig& cfg, json& root) {
  root["spectral_range"] = {{"lambda_min", s.transform.lambda_min_est},
                            {"lambda_max", s.transform.lambda_max_est},
                            {"source", s.bounds_supplied ? "supplied" : "lanczos"},
                            {"breakdown", s.transform.breakdown},
                            {"lanczos_steps", s.transform.lanczos_steps},
                            {"mv", s.lanczos_mv}};
  root["interval"] = {{"a", s.interval.a},
                      {"b", s.interval.b},
                      {"a_mapped", s.interval.a_t},
                      {"b_mapped", s.interval.b_t},
                      {"alpha", s.interval.alpha},
                      {"beta", s.interval.beta}};
  if (s.count) root["count_estimate"] = count_to_json(*s.count);
  root["degree"] = s.degree;
  root["degree_rule"] = cfg.degree ? "fixed" : to_string(cfg.degree_rule);
  root["M"] = cfg.M;
  root["ell"] = s.ell;
}

void report_body(const SolveReport& rep, json& root) {
  root["restarts"] = rep.restarts;
  json ritz = json::array();
  for (std::size_t k = 0; k < rep.ritz.size(); ++k)
    ritz.push_back({{"value", rep.ritz.values[k]}, {"residual", rep.ritz.residual_norms[k]}});
  root["ritz"] = ritz;
  root["n_found"] = rep.ritz.size();
  root["max_residual"] = rep.max_residual;
  root["mv_exact"] = rep.mv_exact;
  root["mv_equivalent"] = rep.mv_equivalent;
  json hist = json::array();
  for (const auto& h : rep.history)
    hist.push_back({{"iteration", h.iteration},
                    {"mv_block", h.mv_block},
                    {"mv_rr", h.mv_rr},
                    {"basis_rank", h.basis_rank},
                    {"count_in", h.count_in},
                    {"count_converged", h.count_converged},
                    {"max_residual_in", h.max_residual_in}});
  root["history"] = hist;
  root["warnings"] = rep.warnings;
  root["converged"] = rep.converged;
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  json c;
  c["matrix_path"] = cfg.matrix_path;
  c["a"] = cfg.a;
  c["b"] = cfg.b;
  c["M"] = cfg.M;
  c["ell"] = optional_size(cfg.ell);
  c["degree"] = optional_size(cfg.degree);
  c["degree_rule"] = to_string(cfg.degree_rule);
  c["D"] = cfg.D;
  c["K"] = cfg.K;
  c["tol"] = cfg.tol;
  c["max_restarts"] = cfg.max_restarts;
  c["n_ev_target"] = cfg.n_ev_target;
  c["lanczos_steps"] = cfg.lanczos_steps;
  c["seed"] = cfg.seed;
  c["basis"] = to_string(cfg.basis);
  c["quad_nodes"] = cfg.quad_nodes;
  c["krylov_tol"] = cfg.krylov_tol;
  c["krylov_maxit"] = cfg.krylov_maxit;
  c["spectral_bounds"] =
      cfg.spectral_bounds ? json::array({cfg.spectral_bounds->first, cfg.spectral_bounds->second}) : json("auto");
  c["count_samples"] = cfg.count_samples;
  c["count_degree"] = optional_size(cfg.count_degree);
  return c;
}

json count_to_json(const CountEstimate& est) {
  return {{"n_ev_tilde", est.n_ev_tilde}, {"samples", est.samples},   {"seed", est.seed},
          {"degree", est.degree},         {"mv_count", est.mv_count}, {"per_sample", est.per_sample}};
}

json solve_to_json(const SolveOutcome& out, const RunConfig& cfg) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["method"] = "cj-ssrr";
  root["config_echo"] = config_to_json(cfg);
  setup_to_json(out.setup, cfg, root);
  report_body(out.report, root);
  root["wall_time_s"] = out.wall_time_s;
  return root;
}

json baseline_to_json(const BaselineOutcome& out, const RunConfig& cfg) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["method"] = "contour-ssrr";
  root["config_echo"] = config_to_json(cfg);
  setup_to_json(out.setup, cfg, root);
  root.erase("degree_rule");
  report_body(out.result.report, root);
  json shifts = json::array();
  for (const auto& st : out.result.shift_stats)
    shifts.push_back({{"shift_re", st.shift.real()},
                      {"shift_im", st.shift.imag()},
                      {"mv_count", st.mv_count},
                      {"iterations", st.iterations},
                      {"final_relres", finite_or_null(st.final_relres)},
                      {"converged", st.converged}});
  root["shift_stats"] = shifts;
  root["wall_time_s"] = out.wall_time_s;
  return root;
}

json bench_to_json(const BenchOutcome& out, const RunConfig& cfg) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["cj"] = solve_to_json(out.cj, cfg);
  root["baseline"] = baseline_to_json(out.baseline, cfg);
  root["speedup_mv"] = out.speedup_mv;
  const double eq = out.cj.report.mv_equivalent;
  root["speedup_equivalent"] = eq > 0.0 ? static_cast<double>(out.baseline.result.report.mv_exact) / eq : 0.0;
  return root;
}

}  // namespace cjssrr
