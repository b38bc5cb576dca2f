#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cjssrr {

enum class ErrorKind {
  UnsupportedFormat,
  NotSymmetric,
  MalformedFile,
  DimensionMismatch,
  InvalidArgument,
  RankDeficient,
  Divergence,
  QuadratureFailure,
  BoundUndefined,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base error for the library. Every failure carries a kind so front ends can
/// map it to a stable exit code or Python exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a Matrix Market file cannot be read. `line()` is 1-based, 0 if
/// the problem is not tied to a line.
class FileError : public Error {
 public:
  FileError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(std::size_t rank, std::size_t cols)
      : Error(ErrorKind::RankDeficient,
              "rank-deficient block: numerical rank " + std::to_string(rank) +
                  " of " + std::to_string(cols) + " columns"),
        rank_(rank) {}

  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step)
      : Error(ErrorKind::Divergence,
              "non-finite value in Chebyshev recurrence at step " + std::to_string(step)),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace cjssrr
