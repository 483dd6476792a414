#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chj/semigroup.hpp"
#include "helpers.hpp"

using namespace chj;
using testing::expr;
using testing::grid1;

namespace {

SemigroupConfig config(double dt, double vmax, int m) {
  SemigroupConfig c;
  c.dt = dt;
  c.vg.v_max = vmax;
  c.vg.m = m;
  return c;
}

}  // namespace

TEST_SUITE("fixed_point") {
  TEST_CASE("u-independent hamiltonians settle after one correction sweep") {
    const GridSpec g = grid1(41, 2.0);
    const FixedPointResult r =
        fixed_point_A(make_quadratic(), expr(g, "cos(x)"), 0.2, config(0.02, 3.0, 61));
    CHECK(r.sweeps == 2);
    CHECK(r.residuals.back() == 0.0);
    CHECK(r.table.slice(0).values == expr(g, "cos(x)").values);
  }

  TEST_CASE("picard residuals shrink geometrically") {
    const GridSpec g = grid1(41, 2.0);
    const double T = 0.2;
    const FixedPointResult r =
        fixed_point_A(make_discount(1.0), expr(g, "cos(x)"), T, config(0.02, 3.0, 61));
    REQUIRE(r.residuals.size() >= 3);
    // A[w] is Lipschitz in w with constant T * u_lipschitz
    for (std::size_t i = 1; i + 1 < r.residuals.size(); ++i)
      CHECK(r.residuals[i + 1] <= T * r.residuals[i] + 1e-14);
    CHECK(r.residuals.back() < 1e-10);
  }

  TEST_CASE("agrees with the stepping semigroup") {
    const GridSpec g = grid1(41, M_PI, Boundary::kPeriodic);
    const GridFunction u = expr(g, "1 + 0.5*cos(x)");
    const SemigroupConfig c = config(0.02, 2.0, 41);
    const double T = 0.2;
    const FixedPointResult r = fixed_point_A(make_discount(1.0), u, T, c);
    const GridFunction s = evolve(make_discount(1.0), u, T, c);
    const double h = g.spacing();
    CHECK(sup_distance(r.table.slice(r.table.steps), s) <= 5.0 * (c.dt + h * h));
  }

  TEST_CASE("implicit action of the quadratic hamiltonian") {
    const GridSpec g = grid1(41, 2.0);
    const SemigroupConfig c = config(0.05, 4.0, 401);
    const double x0 = 0.0;
    const FixedPointResult r = implicit_action(make_quadratic(), testing::one(x0), 0.3, 0.5, g, c);
    const double pg_step = c.momenta().spacing();
    for (int k = 1; k <= r.table.steps; ++k) {
      const double t = k * c.dt;
      for (int node = 0; node < g.num_nodes(); ++node) {
        const double x = g.node(node)[0];
        if (std::abs(x) > c.vg.v_max * t + 1e-9) {
          CHECK(is_sentinel(r.table.at(k, node)));
          continue;
        }
        const double want = 0.3 + x * x / (2.0 * t);
        // H* on the momentum grid undershoots by at most spacing^2/8 per unit time
        CHECK(std::abs(r.table.at(k, node) - want) <= pg_step * pg_step / 8.0 * t + 1e-12);
      }
    }
    CHECK_THROWS_AS(implicit_action(make_quadratic(), testing::one(0.05), 0.0, 0.5, g, c),
                    PreconditionError);
  }

  TEST_CASE("implicit action is monotone in the source value") {
    const GridSpec g = grid1(41, 2.0);
    const SemigroupConfig c = config(0.05, 2.0, 41);
    const double x0 = 0.5;
    const auto lo = implicit_action(make_discount(1.0), testing::one(x0), -0.5, 0.5, g, c);
    const auto hi = implicit_action(make_discount(1.0), testing::one(x0), 0.5, 0.5, g, c);
    for (std::size_t i = 0; i < lo.table.values.size(); ++i) {
      CHECK(is_sentinel(lo.table.values[i]) == is_sentinel(hi.table.values[i]));
      if (!is_sentinel(lo.table.values[i])) CHECK(lo.table.values[i] <= hi.table.values[i]);
    }
  }

  TEST_CASE("solution is the infimum of implicit actions") {
    const GridSpec g = grid1(41, 2.0);
    const GridFunction u = expr(g, "cos(x)");
    const SemigroupConfig c = config(0.02, 2.0, 41);
    const double T = 0.2;
    const HamiltonianSpec h = make_discount(1.0);
    const FixedPointResult direct = fixed_point_A(h, u, T, c);
    std::vector<double> best(g.num_nodes(), kBig);
    for (int y = 0; y < g.num_nodes(); ++y) {
      const Coord xy = g.node(y);
      const auto r = implicit_action(h, std::span<const double>(xy.data(), 1), u[y], T, g, c);
      for (int x = 0; x < g.num_nodes(); ++x)
        best[x] = std::min(best[x], r.table.at(r.table.steps, x));
    }
    const GridFunction want = direct.table.slice(direct.table.steps);
    CHECK(testing::sup_abs(best, want.values) <= 5.0 * (c.dt + g.spacing()));
  }

  TEST_CASE("variational inequality along optimal and random curves") {
    const GridSpec g = grid1(41, 2.0);
    const SemigroupConfig c = config(0.05, 2.0, 41);
    const HamiltonianSpec h = make_discount(1.0);
    const FixedPointResult r = fixed_point_A(h, expr(g, "cos(x)"), 0.5, c);
    const int K = r.table.steps;

    for (int node : {5, 20, 33}) {
      const auto curve = optimal_curve(r, K, node);
      CHECK(curve.front().first == 0);
      CHECK(curve.back() == CurvePoint{K, node});
      CHECK(std::abs(check_variational_inequality(h, r.table, curve, c)) <= 1e-8);
    }

    std::mt19937_64 rng(9);
    const double h_x = g.spacing();
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<CurvePoint> curve{{0, static_cast<int>(rng() % g.num_nodes())}};
      while (true) {
        const int k = curve.back().first + 1 + static_cast<int>(rng() % 3);
        if (k > K) break;
        const int s = k - curve.back().first;
        const int reach = static_cast<int>(std::floor(c.vg.v_max * s * c.dt / h_x + 1e-9));
        const int step = static_cast<int>(rng() % (2 * reach + 1)) - reach;
        const int node = std::clamp(curve.back().second + step, 0, g.n - 1);
        curve.push_back({k, node});
      }
      if (curve.size() < 2) continue;
      CHECK(check_variational_inequality(h, r.table, curve, c) <= 1e-8);
    }

    CHECK_THROWS_WITH_AS(check_variational_inequality(h, r.table, {{2, 3}, {1, 3}}, c),
                         doctest::Contains("increase"), PreconditionError);
    CHECK_THROWS_WITH_AS(check_variational_inequality(h, r.table, {{0, 3}, {1, 99}}, c),
                         doctest::Contains("leaves the grid"), PreconditionError);
  }

  TEST_CASE("preconditions") {
    const GridSpec g = grid1(21, 2.0);
    CHECK_THROWS_AS(fixed_point_A(make_discount(30.0), expr(g, "x"), 0.1, config(0.05, 2, 21)),
                    PreconditionError);
    CHECK_THROWS_AS(fixed_point_A(make_eikonal_sine(1, 0), expr(g, "x"), 0.1, config(0.05, 2, 21)),
                    PreconditionError);
    SemigroupConfig c = config(0.02, 2.0, 21);
    c.picard_max_iter = 1;
    CHECK_THROWS_AS(fixed_point_A(make_discount(1.0), expr(g, "cos(x)"), 0.2, c), ConvergenceError);
  }
}
