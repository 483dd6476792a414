#pragma once

#include <functional>
#include <span>
#include <vector>

#include "chj/common.hpp"
#include "chj/hamiltonian.hpp"

namespace chj {

/// Symmetric tensor grid [-v_max, v_max]^d with m (odd) points per axis.
/// Node k on an axis sits at (k - (m-1)/2) * spacing, so 0 is exact.
struct VelocityGrid {
  double v_max = 4.0;
  int m = 401;
  int dim = 1;

  void validate() const;
  double spacing() const { return 2.0 * v_max / (m - 1); }
  int size() const { return dim == 1 ? m : m * m; }
  double axis_node(int k) const { return (k - (m - 1) / 2) * spacing(); }
  /// Coordinates of flat index j (axis 0 slowest).
  Coord node(int j) const;
  /// True when any coordinate of flat index j sits at an end of its axis.
  bool on_boundary(int j) const;
};

struct ConjugateValue {
  double value = 0.0;
  Coord argmax{};
  int argmax_index = -1;
  bool interior = true;  // false: the sup sits on the grid edge, v_max too small
};

/// H*(x,p,u) = max over the grid of v.p - H(x,v,u). Ties go to the lowest
/// flat index. Requires superlinear_in_p.
ConjugateValue legendre_transform(const HamiltonianSpec& spec, std::span<const double> x,
                                  double u, std::span<const double> p, const VelocityGrid& vg);

/// Conjugate of a function tabulated on the nodes of `vg`:
/// max_j v_j.p - samples[j].
ConjugateValue legendre_transform(std::span<const double> samples, std::span<const double> p,
                                  const VelocityGrid& vg);

struct BiconjugateRow {
  Coord p{};
  double h = 0.0;
  double h_star2 = 0.0;
  double abs_err = 0.0;
};

struct BiconjugateReport {
  double max_deviation = 0.0;
  std::vector<BiconjugateRow> rows;
  int interior_warnings = 0;
};

/// max over the momentum grid `pg` of |(H*)* - H|, both conjugations taken
/// over `vg`. Requires convex_in_p (and superlinear_in_p).
BiconjugateReport biconjugate_check(const HamiltonianSpec& spec, std::span<const double> x,
                                    double u, const VelocityGrid& vg, const VelocityGrid& pg);

}  // namespace chj
