#include "cjssrr/error.hpp"

namespace cjssrr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedFormat: return "unsupported-format";
    case ErrorKind::NotSymmetric: return "not-symmetric";
    case ErrorKind::MalformedFile: return "malformed-file";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::BoundUndefined: return "bound-undefined";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace cjssrr
