#include "chj/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace chj {

void SemigroupConfig::validate(const GridSpec& g) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be positive");
  vg.validate();
  if (pg) pg->validate();
  if (vg.dim != g.dim) throw PreconditionError("velocity grid and spatial grid disagree on dimension");
  if (!(picard_tol > 0.0)) throw PreconditionError("picard_tol must be positive");
  if (picard_max_iter < 1) throw PreconditionError("picard_max_iter must be at least 1");
  if (max_segment_steps < 0) throw PreconditionError("max_segment_steps must be non-negative");
  if (search_radius) {
    const int need = static_cast<int>(std::ceil(vg.v_max * dt / g.spacing() - 1e-12)) + 1;
    if (*search_radius < need)
      throw PreconditionError("search_radius must be at least " + std::to_string(need));
  }
}

SemigroupConfig default_semigroup_config(const std::vector<const HamiltonianSpec*>& specs,
                                         const GridFunction& u0, double dt, int vpoints) {
  const GridSpec& g = u0.grid;
  const int d = g.dim;
  double lo = kBig, hi = -kBig;
  for (double v : u0.values) {
    if (is_sentinel(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) lo = hi = 0.0;
  const double box = u0.lip_estimate;

  constexpr int kSamples = 11;
  const int pcount = d == 1 ? kSamples : kSamples * kSamples;
  double dmax = 0.0;
  for (const HamiltonianSpec* s : specs) {
    for (int node = 0; node < g.num_nodes(); ++node) {
      const Coord x = g.node(node);
      for (int k = 0; k < pcount; ++k) {
        Coord p{};
        const int ia[2] = {d == 1 ? k : k / kSamples, k % kSamples};
        for (int a = 0; a < d; ++a) p[a] = box * (2.0 * ia[a] / (kSamples - 1) - 1.0);
        for (double u : {lo, hi}) {
          const Gradients gr = eval_gradients(*s, std::span<const double>(x.data(), d),
                                              std::span<const double>(p.data(), d), u);
          for (int a = 0; a < d; ++a) dmax = std::max(dmax, std::abs(gr.dp[a]));
        }
      }
    }
  }

  SemigroupConfig cfg;
  cfg.dt = dt;
  cfg.vg.dim = d;
  cfg.vg.v_max = dmax + 2.0;
  cfg.vg.m = vpoints > 0 ? vpoints : (d == 1 ? 401 : 41);
  return cfg;
}

int step_count(double t, double dt) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("t must be non-negative");
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  const double r = t / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9) throw PreconditionError("t/dt not integral");
  return static_cast<int>(n);
}

namespace {

void require_admissible(const HamiltonianSpec& spec) {
  if (!spec.flags.superlinear_in_p)
    throw PreconditionError(spec.name + " is not superlinear in p; semigroup unavailable");
  if (!spec.flags.convex_in_p)
    throw PreconditionError(spec.name + " is not convex in p; semigroup unavailable");
}

}  // namespace

GridFunction lax_oleinik_step(const HamiltonianSpec& spec, const GridFunction& u, double dt,
                              const SemigroupConfig& cfg, StepStats* stats) {
  require_admissible(spec);
  SemigroupConfig c = cfg;
  c.dt = dt;
  LaxOleinikStepper st(spec, u.grid, c);
  return GridFunction(u.grid, st.apply(u.values, stats));
}

GridFunction hopf_lax_step(const HamiltonianSpec& spec, const GridFunction& u, double dt,
                           const SemigroupConfig& cfg) {
  require_admissible(spec);
  SemigroupConfig c = cfg;
  c.dt = dt;
  LaxOleinikStepper st(spec, u.grid, c);
  return GridFunction(u.grid, st.apply(u.values, nullptr, true));
}

GridFunction evolve(const HamiltonianSpec& spec, const GridFunction& u0, double t,
                    const SemigroupConfig& cfg, StepStats* stats) {
  cfg.validate(u0.grid);
  const int n = step_count(t, cfg.dt);
  if (n == 0) return u0;
  require_admissible(spec);
  LaxOleinikStepper st(spec, u0.grid, cfg);
  std::vector<double> u = u0.values;
  for (int k = 0; k < n; ++k) u = st.apply(u, stats);
  return GridFunction(u0.grid, std::move(u));
}

Barriers barrier_bounds(const HamiltonianSpec& spec, const GridFunction& u0, double t) {
  if (!(t >= 0.0)) throw PreconditionError("t must be non-negative");
  if (!std::isfinite(u0.lip_estimate)) throw PreconditionError("u0 needs a finite Lipschitz estimate");
  const GridSpec& g = u0.grid;
  const int d = g.dim;
  const double h = g.spacing();
  const bool periodic = g.boundary == Boundary::kPeriodic;

  double c1 = 0.0;
  for (int node = 0; node < g.num_nodes(); ++node) {
    const auto idx = g.axis_index(node);
    Coord p{};
    for (int a = 0; a < d; ++a) {
      auto lo = idx, hi = idx;
      double span = 2.0 * h;
      if (idx[a] == 0) {
        lo[a] = periodic ? g.n - 1 : 0;
        if (!periodic) span = h;
      } else {
        lo[a] = idx[a] - 1;
      }
      if (idx[a] == g.n - 1) {
        hi[a] = periodic ? 0 : g.n - 1;
        if (!periodic) span = h;
      } else {
        hi[a] = idx[a] + 1;
      }
      p[a] = (u0.values[g.flat(hi)] - u0.values[g.flat(lo)]) / span;
    }
    const Coord x = g.node(node);
    c1 = std::max(c1, std::abs(eval_hamiltonian(spec, std::span<const double>(x.data(), d),
                                                 std::span<const double>(p.data(), d),
                                                 u0.values[node])));
  }

  const double lam = spec.u_lipschitz;
  Barriers b;
  b.c1 = c1;
  b.width = lam > 0.0 ? c1 * std::expm1(lam * t) / lam : c1 * t;
  std::vector<double> lo(u0.values), hi(u0.values);
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= b.width;
    hi[i] += b.width;
  }
  b.lower = GridFunction(g, std::move(lo));
  b.upper = GridFunction(g, std::move(hi));
  return b;
}

GridFunction SpaceTimeTable::slice(int k) const {
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(k) * grid.num_nodes();
  return GridFunction(grid, std::vector<double>(first, first + grid.num_nodes()));
}

}  // namespace chj
