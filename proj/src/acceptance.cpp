#include "chj/acceptance.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include "chj/bracket.hpp"
#include "chj/csv.hpp"
#include "chj/harness.hpp"
#include "chj/initial_data.hpp"
#include "chj/oracle.hpp"
#include "chj/semigroup.hpp"

namespace chj {

namespace {

constexpr double kDt = 1e-3;

GridSpec desk_grid(Boundary b = Boundary::kClamped) {
  GridSpec g;
  g.dim = 1;
  g.half_width = 4.0;
  g.n = 201;
  g.boundary = b;
  return g;
}

GridFunction expr(const GridSpec& g, const std::string& text) {
  return sample(g, InitialExpression::parse(text));
}

std::string fmt(double v) { return format_number(v); }

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome legendre_self_duality() {
  const VelocityGrid vg{8.0, 801, 1};
  const VelocityGrid pg{2.0, 81, 1};
  const double x = 0.0;
  const auto rep =
      biconjugate_check(make_quadratic(), std::span<const double>(&x, 1), 0.0, vg, pg);
  return {rep.max_deviation <= 1e-3 && rep.interior_warnings == 0,
          "max_deviation=" + fmt(rep.max_deviation) + " (<= 1e-3), edge maxima=" +
              std::to_string(rep.interior_warnings)};
}

GridFunction hopf_lax_run() {
  const HamiltonianSpec h = make_quadratic();
  const GridFunction u0 = expr(desk_grid(), "abs(x)");
  return evolve(h, u0, 1.0, default_semigroup_config({&h}, u0, kDt));
}

Outcome hopf_lax_regression() {
  const GridFunction u = hopf_lax_run();
  const GridSpec& g = u.grid;
  double err = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double x = g.node(i)[0];
    if (std::abs(x) > 2.0 + 1e-12) continue;
    const double exact = std::abs(x) >= 1.0 ? std::abs(x) - 0.5 : 0.5 * x * x;
    err = std::max(err, std::abs(u[i] - exact));
  }
  const double tol = 5.0 * g.spacing();
  return {err <= tol, "max_error=" + fmt(err) + " (<= " + fmt(tol) + ")"};
}

Outcome contact_decay() {
  const HamiltonianSpec h = make_discount(1.0);
  const GridFunction u0 = expr(desk_grid(), "1");
  const GridFunction u = evolve(h, u0, 1.0, default_semigroup_config({&h}, u0, kDt));
  double err = 0.0;
  for (double v : u.values) err = std::max(err, std::abs(v - std::exp(-1.0)));
  return {err <= 2e-3, "sup|u - e^-1|=" + fmt(err) + " (<= 2e-3)"};
}

std::vector<HamiltonianSpec> admissible_catalog() {
  std::vector<HamiltonianSpec> out;
  for (auto& h : builtin_catalog())
    if (h.admissible()) out.push_back(std::move(h));
  return out;
}

Outcome barrier_containment() {
  const double t = 0.25;
  const GridSpec g = desk_grid();
  int runs = 0, bad = 0;
  double worst = -kBig;
  std::string first;
  for (const HamiltonianSpec& h : admissible_catalog()) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const GridFunction u0 = random_piecewise_linear(g, seed);
      const SemigroupConfig cfg = default_semigroup_config({&h}, u0, kDt, 121);
      const GridFunction u = evolve(h, u0, t, cfg);
      const Barriers b = barrier_bounds(h, u0, t);
      double excess = -kBig;
      int at = 0;
      for (int i = 0; i < g.num_nodes(); ++i) {
        const double e = std::max(b.lower[i] - u[i], u[i] - b.upper[i]);
        if (e > excess) {
          excess = e;
          at = i;
        }
      }
      worst = std::max(worst, excess);
      if (excess > 0.0 && bad++ == 0)
        first = ", first: " + h.name + " seed " + std::to_string(seed) + " x=" +
                fmt(g.node(at)[0]) + (u[at] > b.upper[at] ? " above" : " below");
      ++runs;
    }
  }
  return {bad == 0, std::to_string(runs) + " runs, violations=" + std::to_string(bad) +
                        ", max excess over barrier=" + fmt(worst) + first};
}

Outcome monotone_comparison() {
  const double t = 0.25;
  const GridSpec g = desk_grid();
  int pairs = 0, bad = 0;
  for (const HamiltonianSpec& h : {make_discount(1.0), make_quadratic()}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const GridFunction u0 = random_piecewise_linear(g, seed);
      const GridFunction gap = random_piecewise_linear(g, 1000 + seed, 8, 0.0, 1.0);
      std::vector<double> v(u0.values);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += gap.values[i];
      const GridFunction v0(g, std::move(v));
      const SemigroupConfig cfg = default_semigroup_config({&h}, v0, kDt, 121);
      const GridFunction a = evolve(h, u0, t, cfg);
      const GridFunction b = evolve(h, v0, t, cfg);
      for (int i = 0; i < g.num_nodes(); ++i)
        if (a[i] > b[i]) {
          ++bad;
          break;
        }
      ++pairs;
    }
  }
  return {bad == 0, std::to_string(pairs) + " ordered pairs, order broken in " + std::to_string(bad)};
}

Outcome bracket_exact_values() {
  std::ostringstream why;
  bool ok = true;
  const HamiltonianSpec p1 = make_momentum_coordinate(), x1 = make_position_coordinate(),
                        uu = make_value_coordinate(), h = make_contact(1.0), h2 = scale(h, 2.0);
  double worst_px = 0.0, worst_up = 0.0, worst_anti = 0.0;
  for (double x : {-2.0, 0.0, 1.5})
    for (double p : {-1.0, 0.5, 3.0})
      for (double u : {-1.0, 0.0, 2.0}) {
        const std::span<const double> xs(&x, 1), ps(&p, 1);
        worst_px = std::max(worst_px, std::abs(jacobi_bracket(p1, x1, xs, ps, u) + 1.0));
        worst_up = std::max(worst_up, std::abs(jacobi_bracket(uu, p1, xs, ps, u)));
      }
  PhaseBox box;
  ScanOptions opt;
  opt.keep_rows = true;
  const BracketReport rep = bracket_scan(h, h2, box, opt);
  const auto catalog = builtin_catalog();
  for (const auto& s : rep.rows)
    for (std::size_t a = 0; a < catalog.size(); ++a)
      for (std::size_t b = a + 1; b < catalog.size(); ++b) {
        const std::span<const double> xs(s.x.data(), 1), ps(s.p.data(), 1);
        const double ab = jacobi_bracket(catalog[a], catalog[b], xs, ps, s.u);
        const double ba = jacobi_bracket(catalog[b], catalog[a], xs, ps, s.u);
        worst_anti = std::max(worst_anti, std::abs(ab + ba));
      }
  ok = worst_px <= 1e-9 && rep.max_abs <= 1e-9 && worst_up <= 1e-9 && worst_anti == 0.0;
  why << "|{p1,x1}+1|=" << fmt(worst_px) << ", max|{H,2H}|=" << fmt(rep.max_abs)
      << ", |{u,p1}|=" << fmt(worst_up) << ", antisymmetry gap=" << fmt(worst_anti);
  return {ok, why.str()};
}

CommutationReport commute_cell(double dt) {
  const HamiltonianSpec h = make_contact(1.0);
  const HamiltonianSpec f = scale(h, 2.0);
  const GridFunction u0 = expr(desk_grid(), "cos(x)");
  return commutation_defect(h, f, u0, 0.25, 0.25, default_semigroup_config({&h, &f}, u0, dt));
}

Outcome commutation_scalar_multiple() {
  // 0.25/4e-3 is not a whole number of steps, so the halving sequence starts
  // at 5e-3 instead
  const double dts[] = {5e-3, 2.5e-3, 1.25e-3};
  std::vector<CommutationReport> r;
  for (double dt : dts) r.push_back(commute_cell(dt));
  const double lam = 2.0;  // u-Lipschitz constant of the pair (2H has 2)
  bool ok = true;
  std::string why = "sup_abs";
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double tol = 20.0 * dts[i] * std::exp(lam * 0.5) * (1.0 + 0.5 * lam);
    ok = ok && r[i].sup_abs_defect <= tol;
    why += " " + fmt(r[i].sup_abs_defect) + "<=" + fmt(tol);
  }
  const double r1 = r[0].sup_abs_defect / r[1].sup_abs_defect;
  const double r2 = r[1].sup_abs_defect / r[2].sup_abs_defect;
  ok = ok && r1 >= 1.5 && r2 >= 1.5;
  return {ok, why + ", halving ratios " + fmt(r1) + ", " + fmt(r2) + " (>= 1.5)"};
}

Outcome one_sided_commutation() {
  const HamiltonianSpec h = make_discount(1.0);
  const HamiltonianSpec f = shift(h, 1.0);
  const GridFunction u0 = expr(desk_grid(), "cos(x)");
  const double lam = 0.25, mu = 0.25;
  const CommutationReport r =
      commutation_defect(h, f, u0, lam, mu, default_semigroup_config({&h, &f}, u0, kDt));
  const double tol = 20.0 * kDt * std::exp(0.5) * 1.5;
  const double need = -0.05 * lam * mu;
  const bool ok = r.max_signed <= tol && r.min_signed <= need;
  return {ok, "max_signed=" + fmt(r.max_signed) + " (<= " + fmt(tol) + "), min_signed=" +
                  fmt(r.min_signed) + " (<= " + fmt(need) + ")"};
}

Outcome reparametrization() {
  const HamiltonianSpec h = make_discount(1.0);
  const GridFunction u0 = expr(desk_grid(), "1");
  const double d = reparam_check(h, u0, 2.0, default_semigroup_config({&h}, u0, kDt));
  return {d <= 5e-3, "defect=" + fmt(d) + " (<= 5e-3)"};
}

Outcome scaling_identity() {
  const HamiltonianSpec h = make_quadratic();
  const HamiltonianSpec f = scale(h, 2.0);
  const GridFunction u0 = expr(desk_grid(), "abs(x)");
  const HamiltonianSpec g = linear_combination({{1.0, h}, {1.0, f}});
  const double d =
      scaling_check(h, f, u0, 0.5, 1.0, 1.0, 2.0, default_semigroup_config({&g}, u0, kDt));
  return {d <= 10.0 * kDt, "defect=" + fmt(d) + " (<= " + fmt(10.0 * kDt) + ")"};
}

Outcome multi_time() {
  const HamiltonianSpec h1 = make_quadratic();
  const HamiltonianSpec h2 = scale(h1, 2.0);
  const GridFunction u0 = expr(desk_grid(), "abs(x)");
  const std::vector<double> ts{0.2, 0.4};
  const HamiltonianSpec g = linear_combination({{ts[0], h1}, {ts[1], h2}});
  const SemigroupConfig cfg = default_semigroup_config({&g}, u0, kDt);
  const GridFunction a = multitime_solve({h1, h2}, ts, u0, cfg);
  const GridFunction b = evolve(h1, u0, 1.0, cfg);
  const double radius = u0.grid.half_width - cfg.vg.v_max * 1.0;
  const double d = sup_distance(a, b, core_mask(u0.grid, radius));
  return {d <= 20.0 * kDt, "defect=" + fmt(d) + " (<= " + fmt(20.0 * kDt) + ") on |x| <= " +
                               fmt(radius)};
}

Outcome oracle_equivalence() {
  GridSpec g = desk_grid();
  g.n = 41;
  const HamiltonianSpec h = make_discount(1.0);
  const GridFunction u0 = expr(g, "1+0.5*cos(x)");
  const SemigroupConfig cfg = default_semigroup_config({&h}, u0, kDt);
  OracleConfig oc;
  oc.K = 8;
  oc.velocities = {-2.0, -1.0, 0.0, 1.0, 2.0};
  oc.picard_rounds = 5;
  const std::pair<double, double> points[] = {
      {0.0, 0.5}, {-0.8, 0.25}, {1.2, 0.75}, {2.0, 1.0}, {-1.6, 0.4}};
  bool ok = true;
  std::ostringstream why;
  for (const auto& [x, t] : points) {
    const GridFunction u = evolve(h, u0, t, cfg);
    const int node = g.find_node(std::span<const double>(&x, 1));
    const double o = brute_force_value(h, u0, x, t, oc).value;
    const double diff = std::abs(o - u[node]);
    const double tol = 0.05 + 5.0 * t / oc.K;
    ok = ok && diff <= tol;
    why << "(" << fmt(x) << "," << fmt(t) << "): " << fmt(diff) << "<=" << fmt(tol) << " ";
  }
  return {ok, why.str()};
}

Outcome determinism() {
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = acceptance_artifacts();
  omp_set_num_threads(8);
  const auto b = acceptance_artifacts();
  omp_set_num_threads(before);
  int differing = 0;
  for (const auto& [name, text] : a)
    if (b.at(name) != text) ++differing;
  return {differing == 0, std::to_string(a.size()) + " artifacts, " + std::to_string(differing) +
                              " differ between 1 and 8 threads"};
}

const std::map<int, std::function<Outcome()>>& table() {
  static const std::map<int, std::function<Outcome()>> t = {
      {1, legendre_self_duality},   {2, hopf_lax_regression},  {3, contact_decay},
      {4, barrier_containment},     {5, monotone_comparison},  {6, bracket_exact_values},
      {7, commutation_scalar_multiple}, {8, one_sided_commutation}, {9, reparametrization},
      {10, scaling_identity},       {11, multi_time},          {12, oracle_equivalence},
      {13, determinism},
  };
  return t;
}

}  // namespace

const std::vector<std::pair<int, std::string>>& acceptance_criteria() {
  static const std::vector<std::pair<int, std::string>> c = {
      {1, "legendre self-duality of |p|^2/2"},
      {2, "hopf-lax regression for |x|"},
      {3, "contact decay to e^-1"},
      {4, "barrier containment"},
      {5, "monotone comparison"},
      {6, "bracket exact values"},
      {7, "commutation of H and 2H"},
      {8, "one-sided commutation of H and H+1"},
      {9, "reparametrization S_H(2) = S_2H(1)"},
      {10, "scaling identity, k = 2"},
      {11, "multi-time solution"},
      {12, "oracle equivalence"},
      {13, "determinism across thread counts"},
  };
  return c;
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  for (const auto& [cid, title] : acceptance_criteria())
    if (cid == id) r.title = title;
  const auto it = table().find(id);
  if (it == table().end()) {
    r.detail = "unknown criterion";
    return r;
  }
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = it->second();
    r.pass = o.pass;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream& out) {
  std::vector<int> todo = ids;
  if (todo.empty())
    for (const auto& c : acceptance_criteria()) todo.push_back(c.first);
  std::vector<CriterionResult> results;
  for (int id : todo) {
    CriterionResult r = run_criterion(id);
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d  %-40s", r.pass ? "PASS" : "FAIL", r.id,
                  r.title.c_str());
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
    out << head << " " << r.detail << "  [" << secs << "]\n" << std::flush;
    results.push_back(std::move(r));
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  out << passed << "/" << results.size() << " criteria passed\n";
  return results;
}

std::map<std::string, std::string> acceptance_artifacts() {
  std::map<std::string, std::string> a;
  a["evolve_hopf_lax.csv"] = grid_function_csv(hopf_lax_run());

  ScanOptions opt;
  opt.samples_per_axis = 5;
  opt.keep_rows = true;
  const BracketReport br = bracket_scan(make_contact(1.0), shift(make_discount(1.0), 1.0),
                                        PhaseBox{}, opt);
  std::vector<std::vector<double>> rows;
  for (const auto& s : br.rows) rows.push_back({s.x[0], s.p[0], s.u, s.value});
  a["bracket.csv"] = csv_text({"x", "p", "u", "bracket"}, rows);

  const CommutationReport cr = commute_cell(5e-3);
  a["commute.csv"] = csv_text({"lambda", "mu", "dt", "sup_abs", "max_signed", "min_signed"},
                              {{cr.lambda, cr.mu, cr.dt, cr.sup_abs_defect, cr.max_signed,
                                cr.min_signed}});

  GridSpec g = desk_grid(Boundary::kPeriodic);
  g.n = 41;
  const HamiltonianSpec h = make_discount(1.0);
  const GridFunction u0 = expr(g, "1+0.5*cos(x)");
  SemigroupConfig cfg = default_semigroup_config({&h}, u0, 0.02, 41);
  const FixedPointResult fp = fixed_point_A(h, u0, 0.2, cfg);
  a["fixed_point.csv"] = grid_function_csv(fp.table.slice(fp.table.steps));
  return a;
}

void write_acceptance_artifacts(const std::string& dir) {
  for (const auto& [name, text] : acceptance_artifacts())
    write_text((std::filesystem::path(dir) / name).string(), text);
}

}  // namespace chj
