#pragma once

#include <span>
#include <vector>

#include "chj/grid.hpp"
#include "chj/initial_data.hpp"

namespace testing {

inline std::span<const double> one(const double& v) { return std::span<const double>(&v, 1); }

inline chj::GridSpec grid1(int n = 201, double L = 4.0,
                           chj::Boundary b = chj::Boundary::kClamped) {
  chj::GridSpec g;
  g.n = n;
  g.half_width = L;
  g.boundary = b;
  return g;
}

inline chj::GridFunction expr(const chj::GridSpec& g, const char* text) {
  return chj::sample(g, chj::InitialExpression::parse(text));
}

inline double sup_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testing
