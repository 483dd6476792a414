#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>

namespace chj {

/// Largest spatial dimension supported by grids and Hamiltonians.
inline constexpr int kMaxDim = 2;

/// Sentinel for "unreachable" values in point-source data. Anything at or
/// above kBig / 2 is treated as infinite and never reported as finite.
inline constexpr double kBig = 1e12;

inline bool is_sentinel(double v) { return v >= kBig / 2; }

/// Fixed-capacity coordinate vector; the active length lives with the caller.
using Coord = std::array<double, kMaxDim>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic produced a non-finite value or an iteration failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace chj
