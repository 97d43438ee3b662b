#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hbts {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module. All are overridable per call.
struct Tolerances {
  double iso = 1e-10;    // isometry / top-tensor normalization
  double herm = 1e-10;   // Hermiticity, max-norm
  double psd = 1e-10;    // smallest admissible eigenvalue is -psd
  double trace = 1e-10;  // |Tr - 1|
  double rank = 1e-10;   // relative to the largest eigenvalue
  double fix = 1e-10;    // fixed-point and self-consistency residuals
  double spec = 1e-8;    // distance from the unit circle for peripheral eigenvalues
  double gs = 1e-10;     // absolute ground-energy window
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t required) : Error(what), required_(required) {}
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

class UnsupportedRangeError : public Error {
 public:
  using Error::Error;
};

class DegenerateFixedPointError : public Error {
 public:
  DegenerateFixedPointError(const std::string& what, int multiplicity)
      : Error(what), multiplicity_(multiplicity) {}
  int multiplicity() const noexcept { return multiplicity_; }

 private:
  int multiplicity_;
};

/// Raised when no parent interaction exists up to the largest supported range,
/// which the rank bounds rule out; it indicates a tolerance problem.
class ImpossibleByTheoryError : public Error {
 public:
  using Error::Error;
};

/// Integer power with overflow check.
std::uint64_t ipow(std::uint64_t base, unsigned exponent);

inline Eigen::Index dim_of(int d, int sites) {
  return static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(d), static_cast<unsigned>(sites)));
}

/// Largest absolute entry.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace hbts
