#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace whitham {

/// Broad failure class; the CLI maps each kind onto an exit status.
enum class ErrorKind { Validation, Numerical, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag, e.g. "input-shape" or "corrector-failure".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

struct InputShapeError : Error {
  explicit InputShapeError(const std::string& what)
      : Error(ErrorKind::Validation, "input-shape", what) {}
};

struct SingularInputError : Error {
  explicit SingularInputError(const std::string& what)
      : Error(ErrorKind::Numerical, "singular-input", what) {}
};

struct SeedDegenerateError : Error {
  explicit SeedDegenerateError(const std::string& what)
      : Error(ErrorKind::Numerical, "seed-degenerate", what) {}
};

struct RootFindError : Error {
  explicit RootFindError(const std::string& what)
      : Error(ErrorKind::Numerical, "root-find", what) {}
};

struct SeedError : Error {
  explicit SeedError(const std::string& what)
      : Error(ErrorKind::Numerical, "seed", what) {}
};

/// Newton corrector gave up. Carries the last iterate and the max-norm
/// residual after every iteration.
struct CorrectorFailure : Error {
  CorrectorFailure(const std::string& what, std::vector<double> last_iterate,
                   std::vector<double> residual_history)
      : Error(ErrorKind::Numerical, "corrector-failure", what),
        last_iterate(std::move(last_iterate)),
        residual_history(std::move(residual_history)) {}

  std::vector<double> last_iterate;
  std::vector<double> residual_history;
};

struct TangentFailure : Error {
  explicit TangentFailure(const std::string& what)
      : Error(ErrorKind::Numerical, "tangent-failure", what) {}
};

struct ResolutionError : Error {
  explicit ResolutionError(const std::string& what)
      : Error(ErrorKind::Validation, "resolution", what) {}
};

struct EigenError : Error {
  EigenError(const std::string& what, double mu)
      : Error(ErrorKind::Numerical, "eigen", what), mu(mu) {}
  double mu;
};

struct BlowUpError : Error {
  BlowUpError(const std::string& what, double t)
      : Error(ErrorKind::Numerical, "blow-up", what), t(t) {}
  double t;
};

struct RangeError : Error {
  RangeError(const std::string& what, double lo, double hi)
      : Error(ErrorKind::Validation, "range", what), lo(lo), hi(hi) {}
  double lo;
  double hi;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::Validation, "config", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what)
      : Error(ErrorKind::Io, "io", what) {}
};

}  // namespace whitham
