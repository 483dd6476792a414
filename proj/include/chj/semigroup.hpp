#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chj/grid.hpp"
#include "chj/hamiltonian.hpp"
#include "chj/lagrangian.hpp"
#include "chj/transform.hpp"

namespace chj {

struct SemigroupConfig {
  double dt = 1e-3;
  VelocityGrid vg;                  // candidate velocities of a step
  std::optional<VelocityGrid> pg;   // momenta inside H*; default_momentum_grid(vg) when empty
  double picard_tol = 1e-10;
  int picard_max_iter = 200;
  /// Caps |q|*dt at this many cells. Must be >= ceil(v_max*dt/h)+1 when set.
  std::optional<int> search_radius;
  /// Parabolic correction of the minimum value through the best velocity and
  /// its neighbours. Off by default: it breaks the monotonicity of a step.
  bool refine = false;
  /// Longest node-to-node segment (in steps) tried by fixed_point_A; 0 means
  /// no limit.
  int max_segment_steps = 0;

  void validate(const GridSpec& g) const;
  VelocityGrid momenta() const { return pg ? *pg : default_momentum_grid(vg); }
};

/// Config whose velocity box covers |D_pH| + 2 over the momenta |p| <= lip(u0)
/// and the value range of u0, for every spec in `specs`.
SemigroupConfig default_semigroup_config(const std::vector<const HamiltonianSpec*>& specs,
                                         const GridFunction& u0, double dt = 1e-3,
                                         int vpoints = 0);

struct StepStats {
  long long truncation_hits = 0;  // node-steps whose argmin sat on the velocity edge
  int steps = 0;
};

/// One explicit inf-convolution step
///   u+(x) = min_q I[u](x - q dt) + dt * H*(x, q, I[u](x - q dt))
/// with I the (bi)linear interpolant and q running over cfg.vg. Built once per
/// (spec, grid, cfg); apply() parallelises over nodes and is deterministic.
class LaxOleinikStepper {
 public:
  LaxOleinikStepper(const HamiltonianSpec& spec, const GridSpec& grid, const SemigroupConfig& cfg);

  /// `ignore_u` drops the value argument of H* (classical Hopf-Lax step).
  std::vector<double> apply(const std::vector<double>& u, StepStats* stats = nullptr,
                            bool ignore_u = false) const;

  const GridSpec& grid() const { return grid_; }
  const LagrangianTable& lagrangian() const { return table_; }

 private:
  const HamiltonianSpec* spec_;
  GridSpec grid_;
  SemigroupConfig cfg_;
  LagrangianTable table_;
  std::vector<int> active_;      // velocity indices within the search radius
  std::vector<char> edge_;       // per velocity index: argmin here counts as truncation
  std::vector<Coord> shift_;     // per velocity index: q*dt/h in cells
  std::vector<std::array<int, 2 * kMaxDim>> neighbour_;  // axis neighbours, -1 if absent
};

GridFunction lax_oleinik_step(const HamiltonianSpec& spec, const GridFunction& u, double dt,
                              const SemigroupConfig& cfg, StepStats* stats = nullptr);

/// The same kernel with the value argument of H* held at 0.
GridFunction hopf_lax_step(const HamiltonianSpec& spec, const GridFunction& u, double dt,
                           const SemigroupConfig& cfg);

/// Number of steps t/dt; throws PreconditionError("t/dt not integral") unless
/// it is within 1e-9 of an integer.
int step_count(double t, double dt);

GridFunction evolve(const HamiltonianSpec& spec, const GridFunction& u0, double t,
                    const SemigroupConfig& cfg, StepStats* stats = nullptr);

namespace reference {

/// Serial step that runs a full discrete Legendre transform for every
/// candidate. Slow; kept to cross-check the tabulated kernel.
GridFunction lax_oleinik_step(const HamiltonianSpec& spec, const GridFunction& u,
                              const SemigroupConfig& cfg);

}  // namespace reference

struct Barriers {
  GridFunction lower, upper;
  double c1 = 0.0;
  double width = 0.0;
};

/// u0 -/+ C1 (e^{Lt} - 1)/L with L = spec.u_lipschitz (C1 t when L = 0) and
/// C1 = max_nodes |H(x, Du0, u0)|, Du0 by central differences (one-sided at
/// clamped edges).
Barriers barrier_bounds(const HamiltonianSpec& spec, const GridFunction& u0, double t);

/// Values on grid x {0, dt, ..., K dt}; slice(k) is the spatial function at t_k.
struct SpaceTimeTable {
  GridSpec grid;
  double dt = 0.0;
  int steps = 0;
  std::vector<double> values;  // (steps + 1) * num_nodes, time slowest

  double& at(int k, int node) { return values[static_cast<std::size_t>(k) * grid.num_nodes() + node]; }
  double at(int k, int node) const {
    return values[static_cast<std::size_t>(k) * grid.num_nodes() + node];
  }
  GridFunction slice(int k) const;
};

struct FixedPointResult {
  SpaceTimeTable table;
  int sweeps = 0;
  std::vector<double> residuals;  // sup-norm change per sweep
  /// Backpointers: start (time index, node) of the optimal segment into each
  /// entry; (-1, -1) at t = 0 and for unreachable entries.
  std::vector<std::pair<int, int>> parent;
};

/// Picard iteration of w -> A[w] on the space-time lattice. A[w] is a dynamic
/// programme over node-to-node straight segments (y, t_j) -> (x, t_k) whose
/// running cost dt * H*(gamma(t_i), velocity, w(gamma(t_i), t_i)) is summed at
/// the right end of every sub-step. Throws ConvergenceError after
/// picard_max_iter sweeps.
FixedPointResult fixed_point_A(const HamiltonianSpec& spec, const GridFunction& u0, double T,
                               const SemigroupConfig& cfg);

/// h_{x0,u0}(x, t): fixed_point_A started from u0_val at x0 and kBig elsewhere.
FixedPointResult implicit_action(const HamiltonianSpec& spec, std::span<const double> x0,
                                 double u0_val, double T, const GridSpec& grid,
                                 const SemigroupConfig& cfg);

/// Space-time lattice point (time index, node).
using CurvePoint = std::pair<int, int>;

/// Follows backpointers from (k, node) down to t = 0; returned in time order.
std::vector<CurvePoint> optimal_curve(const FixedPointResult& fp, int k, int node);

/// max over pairs a < b of curve points of
///   u(b) - u(a) - sum of dt * H*(gamma, gamma', u(gamma, t))
/// with the same quadrature as fixed_point_A. The curve is piecewise linear
/// between consecutive points, which must have strictly increasing time index.
double check_variational_inequality(const HamiltonianSpec& spec, const SpaceTimeTable& sol,
                                    const std::vector<CurvePoint>& curve,
                                    const SemigroupConfig& cfg);

}  // namespace chj
