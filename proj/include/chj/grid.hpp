#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "chj/common.hpp"

namespace chj {

enum class Boundary { kPeriodic, kClamped };

Boundary parse_boundary(const std::string& s);
const char* to_string(Boundary b);

/// Truncation of R^d to [-L, L]^d with n nodes per axis.
///
/// Periodic grids have spacing 2L/n (the node at +L is identified with -L);
/// clamped grids have spacing 2L/(n-1) and hold the edge value outside.
/// Flat node index is i0 * n + i1 (axis 0 slowest).
struct GridSpec {
  int dim = 1;
  double half_width = 4.0;
  int n = 201;
  Boundary boundary = Boundary::kClamped;

  void validate() const;
  double spacing() const;
  int num_nodes() const { return dim == 1 ? n : n * n; }
  double axis_coord(int i) const { return -half_width + i * spacing(); }
  Coord node(int flat) const;
  std::array<int, kMaxDim> axis_index(int flat) const;
  int flat(std::array<int, kMaxDim> idx) const { return dim == 1 ? idx[0] : idx[0] * n + idx[1]; }
  /// Node index of a point that lies on the lattice (within 1e-9 of a node);
  /// -1 otherwise.
  int find_node(std::span<const double> x) const;

  bool operator==(const GridSpec&) const = default;
};

/// Linear (1-D) or bilinear (2-D) interpolation weights.
struct Stencil {
  std::array<int, 4> idx{};
  std::array<double, 4> w{};
  int count = 0;
};

/// Stencil at node `node` displaced by `-shift[a]` cells along each axis.
/// A zero shift returns the node itself with weight 1.
Stencil locate(const GridSpec& g, int node, std::span<const double> shift);

/// Weighted sum. Returns kBig if any node carrying positive weight is a
/// sentinel.
double interpolate(std::span<const double> values, const Stencil& s);

/// Weighted sum over the finite nodes only, weights renormalised. Returns
/// kBig when every node is a sentinel.
double interpolate_finite(std::span<const double> values, const Stencil& s);

/// Max |difference| / spacing over lattice-adjacent finite pairs.
double lipschitz_estimate(const GridSpec& g, std::span<const double> values);

struct GridFunction {
  GridSpec grid;
  std::vector<double> values;
  double lip_estimate = 0.0;

  GridFunction() = default;
  GridFunction(GridSpec g, std::vector<double> v);

  void refresh_lip() { lip_estimate = lipschitz_estimate(grid, values); }
  double operator[](int i) const { return values[i]; }
};

/// max |a - b| over the nodes flagged in `mask` (all nodes when empty).
double sup_distance(const GridFunction& a, const GridFunction& b,
                    const std::vector<char>& mask = {});

/// Nodes whose every coordinate satisfies |x_a| <= radius.
std::vector<char> core_mask(const GridSpec& g, double radius);

}  // namespace chj
