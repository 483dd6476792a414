#pragma once

#include <vector>

#include "chj/bracket.hpp"
#include "chj/semigroup.hpp"

namespace chj {

struct CommutationReport {
  double sup_abs_defect = 0.0;
  double max_signed = 0.0;
  double min_signed = 0.0;
  double lambda = 0.0, mu = 0.0, dt = 0.0;
  GridSpec grid;
  double core_radius = 0.0;  // +inf when every node is compared
  double tolerance = 0.0;
  Verdict verdict = Verdict::kCommuting;
  std::vector<double> defect;  // D(x) on every node (zero outside the core)
};

/// 20 dt (1 + L s) e^{L s} with s = lambda + mu and L = lip.
double consistency_tolerance(double dt, double lip, double lambda, double mu);

/// D = S_H(lambda) S_F(mu) u0 - S_F(mu) S_H(lambda) u0 with identical cfg on
/// both sides. Statistics over nodes with |x_a| <= L - v_max (lambda + mu) on
/// clamped grids, all nodes on periodic ones.
CommutationReport commutation_defect(const HamiltonianSpec& H, const HamiltonianSpec& F,
                                     const GridFunction& u0, double lambda, double mu,
                                     const SemigroupConfig& cfg);

/// ||S_H(t) u0 - S_{tH}(1) u0|| over the core |x| <= L - v_max t (clamped).
/// The scaled run uses dt/t and a velocity box stretched by t, so both sides
/// take the same number of steps over the same momenta.
double reparam_check(const HamiltonianSpec& H, const GridFunction& u0, double t,
                     const SemigroupConfig& cfg);

/// evolve_G(u0, 1) for G = sum t_i H_i; u0 itself when every t_i is 0.
GridFunction multitime_solve(const std::vector<HamiltonianSpec>& hs, const std::vector<double>& ts,
                             const GridFunction& u0, const SemigroupConfig& cfg);

/// ||v(t, lambda, mu) - v(t/k, k lambda, k mu)|| with v(t, l, m) the solution
/// for m H + l F at time t. Core |x| <= L - v_max t on clamped grids.
double scaling_check(const HamiltonianSpec& H, const HamiltonianSpec& F, const GridFunction& u0,
                     double t, double lambda, double mu, double k, const SemigroupConfig& cfg);

/// Defect between S_H and S_{H^2} for H = |p|^2/2 + u on coarse settings.
/// Measured and reported only.
CommutationReport composition_defect_measurement();

}  // namespace chj
