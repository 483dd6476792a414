#pragma once

#include <vector>

#include "chj/grid.hpp"
#include "chj/hamiltonian.hpp"

namespace chj {

struct OracleConfig {
  int K = 4;
  std::vector<double> velocities{-2.0, -1.0, 0.0, 1.0, 2.0};
  int picard_rounds = 5;

  void validate() const;
};

struct OracleResult {
  double value = 0.0;
  double last_change = 0.0;  // |value(last round) - value(previous round)|
  bool converged = true;     // last_change <= 1e-6
  long long curves = 0;
};

/// Minimum over every piecewise-constant velocity path with K equal sub-steps
/// ending at x at time t of
///   u0(gamma(0)) + sum_i (t/K) H*(gamma(s_i), v_i, w(gamma(s_i), s_i)),
/// s_i the left end of sub-step i. w starts as u0 and is replaced by the
/// oracle's own value function for picard_rounds - 1 rounds. 1-D only.
/// H* comes from a golden-section search over p, independent of the
/// transform module.
OracleResult brute_force_value(const HamiltonianSpec& spec, const GridFunction& u0, double x,
                               double t, const OracleConfig& ocfg);

/// sup_p q p - H(x, p, u) by golden section on an expanding bracket.
double oracle_conjugate(const HamiltonianSpec& spec, double x, double q, double u);

}  // namespace chj
