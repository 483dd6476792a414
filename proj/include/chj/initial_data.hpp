#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chj/grid.hpp"

namespace chj {

/// Sum of terms c, c*abs(x), c*cos(k*x), c*sin(k*x), c*x^2, c*x. On 2-D grids
/// every non-constant term is applied to each coordinate and summed.
class InitialExpression {
 public:
  enum class Kind { kConst, kAbs, kCos, kSin, kSquare, kLinear };
  struct Term {
    double coef = 1.0;
    Kind kind = Kind::kConst;
    double k = 1.0;
  };

  static InitialExpression parse(const std::string& text);
  double operator()(std::span<const double> x) const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

GridFunction sample(const GridSpec& g, const InitialExpression& e);

/// `spec` is a CSV path when such a file exists, otherwise an expression.
GridFunction load_initial_data(const std::string& spec, const GridSpec& g);

/// Piecewise-linear data through `pieces + 1` evenly spaced knots on [-L, L]
/// with knot values drawn uniformly from [lo, hi].
GridFunction random_piecewise_linear(const GridSpec& g, std::uint64_t seed, int pieces = 8,
                                     double lo = -1.0, double hi = 1.0);

}  // namespace chj
