#include "chj/harness.hpp"

#include <cmath>
#include <limits>

namespace chj {

double consistency_tolerance(double dt, double lip, double lambda, double mu) {
  const double s = lip * (lambda + mu);
  return 20.0 * dt * (1.0 + s) * std::exp(s);
}

namespace {

double core_radius(const GridSpec& g, double v_max, double t) {
  if (g.boundary == Boundary::kPeriodic) return std::numeric_limits<double>::infinity();
  const double r = g.half_width - v_max * t;
  if (r < -1e-12) throw PreconditionError("comparison core is empty; enlarge L or shorten t");
  return r;
}

std::vector<char> mask_for(const GridSpec& g, double radius) {
  if (std::isinf(radius)) return {};
  return core_mask(g, radius);
}

bool all_zero(const std::vector<double>& c) {
  for (double v : c)
    if (v != 0.0) return false;
  return true;
}

GridFunction evolve_combination(const std::vector<std::pair<double, HamiltonianSpec>>& terms,
                                const GridFunction& u0, double t, const SemigroupConfig& cfg) {
  std::vector<double> coeffs;
  for (const auto& term : terms) coeffs.push_back(term.first);
  if (all_zero(coeffs) || t == 0.0) return u0;
  const HamiltonianSpec g = linear_combination(terms);
  if (!g.admissible())
    throw PreconditionError("combination " + g.name + " is not convex and superlinear in p");
  return evolve(g, u0, t, cfg);
}

SemigroupConfig stretched(const SemigroupConfig& cfg, double factor) {
  SemigroupConfig c = cfg;
  c.pg = cfg.momenta();
  c.dt = cfg.dt / factor;
  c.vg.v_max = cfg.vg.v_max * factor;
  return c;
}

}  // namespace

CommutationReport commutation_defect(const HamiltonianSpec& H, const HamiltonianSpec& F,
                                     const GridFunction& u0, double lambda, double mu,
                                     const SemigroupConfig& cfg) {
  if (!(lambda >= 0.0) || !(mu >= 0.0)) throw PreconditionError("lambda and mu must be >= 0");
  CommutationReport rep;
  rep.lambda = lambda;
  rep.mu = mu;
  rep.dt = cfg.dt;
  rep.grid = u0.grid;
  rep.core_radius = core_radius(u0.grid, cfg.vg.v_max, lambda + mu);
  rep.tolerance =
      consistency_tolerance(cfg.dt, std::max(H.u_lipschitz, F.u_lipschitz), lambda, mu);

  const GridFunction hf = evolve(H, evolve(F, u0, mu, cfg), lambda, cfg);
  const GridFunction fh = evolve(F, evolve(H, u0, lambda, cfg), mu, cfg);
  const auto mask = mask_for(u0.grid, rep.core_radius);

  rep.defect.assign(u0.values.size(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < hf.values.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const double d = hf.values[i] - fh.values[i];
    rep.defect[i] = d;
    if (!any) {
      rep.max_signed = rep.min_signed = d;
      any = true;
    } else {
      rep.max_signed = std::max(rep.max_signed, d);
      rep.min_signed = std::min(rep.min_signed, d);
    }
  }
  rep.sup_abs_defect = std::max(std::abs(rep.max_signed), std::abs(rep.min_signed));

  const double tol = rep.tolerance;
  if (rep.sup_abs_defect <= tol) {
    rep.verdict = Verdict::kCommuting;
  } else if (rep.max_signed <= tol) {
    rep.verdict = Verdict::kOneSidedLe;
  } else if (rep.min_signed >= -tol) {
    rep.verdict = Verdict::kOneSidedGe;
  } else {
    rep.verdict = Verdict::kNone;
  }
  return rep;
}

double reparam_check(const HamiltonianSpec& H, const GridFunction& u0, double t,
                     const SemigroupConfig& cfg) {
  if (!(t >= 0.0)) throw PreconditionError("t must be non-negative");
  if (t == 0.0) return 0.0;
  const GridFunction lhs = evolve(H, u0, t, cfg);
  const GridFunction rhs = t == 1.0 ? lhs : evolve(scale(H, t), u0, 1.0, stretched(cfg, t));
  return sup_distance(lhs, rhs, mask_for(u0.grid, core_radius(u0.grid, cfg.vg.v_max, t)));
}

GridFunction multitime_solve(const std::vector<HamiltonianSpec>& hs, const std::vector<double>& ts,
                             const GridFunction& u0, const SemigroupConfig& cfg) {
  if (hs.size() != ts.size() || hs.empty())
    throw PreconditionError("need one time per hamiltonian");
  std::vector<std::pair<double, HamiltonianSpec>> terms;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(ts[i] >= 0.0)) throw PreconditionError("multi-time components must be >= 0");
    terms.emplace_back(ts[i], hs[i]);
  }
  return evolve_combination(terms, u0, 1.0, cfg);
}

double scaling_check(const HamiltonianSpec& H, const HamiltonianSpec& F, const GridFunction& u0,
                     double t, double lambda, double mu, double k, const SemigroupConfig& cfg) {
  if (!(k > 0.0)) throw PreconditionError("k must be positive");
  const GridFunction lhs = evolve_combination({{mu, H}, {lambda, F}}, u0, t, cfg);
  const GridFunction rhs =
      k == 1.0 ? lhs
               : evolve_combination({{k * mu, H}, {k * lambda, F}}, u0, t / k, stretched(cfg, k));
  return sup_distance(lhs, rhs, mask_for(u0.grid, core_radius(u0.grid, cfg.vg.v_max, t)));
}

CommutationReport composition_defect_measurement() {
  const HamiltonianSpec h = make_discount(1.0);
  ComposeOptions opt;
  opt.increasing_convex = true;  // H > 0 on the data used below
  opt.u_lipschitz = 4.0;
  opt.label = "sq";
  const HamiltonianSpec f = compose_scalar(
      h, [](double s) { return s * s; }, [](double s) { return 2.0 * s; }, opt);

  GridSpec g;
  g.n = 41;
  g.half_width = M_PI;
  g.boundary = Boundary::kPeriodic;
  std::vector<double> v(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) v[i] = 1.0 + 0.5 * std::cos(g.node(i)[0]);
  const GridFunction u0(g, std::move(v));

  SemigroupConfig cfg;
  cfg.dt = 0.01;
  cfg.vg.v_max = 6.0;
  cfg.vg.m = 61;
  return commutation_defect(h, f, u0, 0.1, 0.1, cfg);
}

}  // namespace chj
