#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Bad caller input: empty samples, non-positive lengths, out-of-range indices.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a usable answer (e.g. Cholesky
// failed on every rung of the jitter ladder).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Self-convergence check of a quadrature rule did not meet its tolerance.
class QuadratureFailure : public NumericalFailure {
 public:
  QuadratureFailure(const std::string& what, double coarse, double fine)
      : NumericalFailure(what), coarse_(coarse), fine_(fine) {}
  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

// The variance estimate of the test statistic is not positive, so the test
// cannot be decided. Carries the unclamped estimate.
class DegenerateVariance : public NumericalFailure {
 public:
  DegenerateVariance(const std::string& what, double unclamped)
      : NumericalFailure(what), unclamped_(unclamped) {}
  double unclamped() const noexcept { return unclamped_; }

 private:
  double unclamped_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aniso
