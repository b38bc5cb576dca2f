#include "cjssrr/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cjssrr/error.hpp"
#include "cjssrr/parallel.hpp"

namespace cjssrr {

SparseSymmetric SparseSymmetric::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw Error(ErrorKind::MalformedFile, "triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymmetric a;
  a.n_ = n;
  a.row_ptr_.assign(n + 1, 0);
  a.col_idx_.reserve(entries.size());
  a.values_.reserve(entries.size());
  std::size_t last_row = n, last_col = n;
  for (const auto& t : entries) {
    if (t.row == last_row && t.col == last_col) {
      a.values_.back() += t.value;
      continue;
    }
    a.col_idx_.push_back(t.col);
    a.values_.push_back(t.value);
    ++a.row_ptr_[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (std::size_t i = 0; i < n; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];

  auto lookup = [&](std::size_t i, std::size_t j) -> double {
    auto first = a.col_idx_.begin() + static_cast<std::ptrdiff_t>(a.row_ptr_[i]);
    auto last = a.col_idx_.begin() + static_cast<std::ptrdiff_t>(a.row_ptr_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? a.values_[static_cast<std::size_t>(it - a.col_idx_.begin())] : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = a.row_ptr_[i]; p < a.row_ptr_[i + 1]; ++p) {
      const std::size_t j = a.col_idx_[p];
      if (j <= i) continue;
      const double v = a.values_[p];
      if (std::abs(v - lookup(j, i)) > 1e-12 * std::max(1.0, std::abs(v))) {
        std::ostringstream msg;
        msg << "matrix is not symmetric at (" << i + 1 << "," << j + 1 << ")";
        throw Error(ErrorKind::NotSymmetric, msg.str());
      }
    }
  }
  return a;
}

SparseSymmetric SparseSymmetric::diagonal(std::span<const double> diag) {
  std::vector<Triplet> t;
  t.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
  return from_triplets(diag.size(), std::move(t));
}

SparseSymmetric SparseSymmetric::from_dense(const DenseBlock& dense, double drop_tol) {
  if (dense.rows() != dense.cols()) throw Error(ErrorKind::DimensionMismatch, "from_dense: matrix not square");
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < dense.cols(); ++j)
    for (std::size_t i = 0; i < dense.rows(); ++i)
      if (std::abs(dense(i, j)) > drop_tol) t.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), std::move(t));
}

SparseSymmetric SparseSymmetric::laplacian_1d(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -1.0});
      t.push_back({i + 1, i, -1.0});
    }
  }
  return from_triplets(n, std::move(t));
}

DenseBlock SparseSymmetric::to_dense() const {
  DenseBlock d(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  return d;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

SparseSymmetric parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FileError(ErrorKind::MalformedFile, 0, "empty input");
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, storage;
  header >> banner >> object >> format >> field >> storage;
  if (banner != "%%MatrixMarket") throw FileError(ErrorKind::MalformedFile, lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  storage = lower(storage);
  if (object != "matrix") throw FileError(ErrorKind::UnsupportedFormat, lineno, "unsupported object '" + object + "'");
  if (format != "coordinate") throw FileError(ErrorKind::UnsupportedFormat, lineno, "unsupported format '" + format + "'");
  if (field != "real" && field != "double")
    throw FileError(ErrorKind::UnsupportedFormat, lineno, "unsupported field '" + field + "'");
  const bool symmetric = storage == "symmetric";
  if (!symmetric && storage != "general")
    throw FileError(ErrorKind::UnsupportedFormat, lineno, "unsupported storage '" + storage + "'");

  std::size_t rows = 0, cols = 0, declared = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> declared)) throw FileError(ErrorKind::MalformedFile, lineno, "bad size line");
    have_size = true;
    break;
  }
  if (!have_size) throw FileError(ErrorKind::MalformedFile, lineno, "missing size line");
  if (rows != cols) throw FileError(ErrorKind::MalformedFile, lineno, "matrix is not square");

  std::vector<Triplet> entries;
  entries.reserve(symmetric ? 2 * declared : declared);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) throw FileError(ErrorKind::MalformedFile, lineno, "bad entry line");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols)
      throw FileError(ErrorKind::MalformedFile, lineno, "index out of range");
    if (!std::isfinite(v)) throw FileError(ErrorKind::MalformedFile, lineno, "non-finite value");
    if (++seen > declared) throw FileError(ErrorKind::MalformedFile, lineno, "more entries than declared");
    const auto r = static_cast<std::size_t>(i - 1), c = static_cast<std::size_t>(j - 1);
    entries.push_back({r, c, v});
    if (symmetric && r != c) entries.push_back({c, r, v});
  }
  if (seen != declared)
    throw FileError(ErrorKind::MalformedFile, lineno,
                    "expected " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  return SparseSymmetric::from_triplets(rows, std::move(entries));
}

SparseSymmetric read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseSymmetric& a) {
  std::size_t lower_count = 0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      if (a.col_idx()[p] <= i) ++lower_count;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.n() << ' ' << a.n() << ' ' << lower_count << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      if (a.col_idx()[p] <= i) out << i + 1 << ' ' << a.col_idx()[p] + 1 << ' ' << a.values()[p] << '\n';
}

void matvec(const SparseSymmetric& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n() || y.size() != a.n()) throw Error(ErrorKind::DimensionMismatch, "matvec: vector length differs from n");
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& va = a.values();
  for (std::size_t i = 0; i < a.n(); ++i) {
    double s = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * x[ci[p]];
    y[i] = s;
  }
}

std::vector<double> matvec(const SparseSymmetric& a, std::span<const double> x, MvCounter* counter) {
  std::vector<double> y(a.n());
  matvec(a, x, y);
  if (counter) counter->add(1);
  return y;
}

DenseBlock matvec(const SparseSymmetric& a, const DenseBlock& x, MvCounter* counter) {
  if (x.rows() != a.n()) throw Error(ErrorKind::DimensionMismatch, "matvec: block rows differ from n");
  DenseBlock y(a.n(), x.cols());
  parallel_for(x.cols(), [&](std::size_t j) { matvec(a, x.col(j), y.col(j)); });
  if (counter) counter->add(x.cols());
  return y;
}

}  // namespace cjssrr
