#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "chj/initial_data.hpp"
#include "chj/semigroup.hpp"
#include "helpers.hpp"

using namespace chj;
using testing::expr;
using testing::grid1;
using testing::sup_abs;

namespace {

SemigroupConfig config(double dt, double vmax = 4.0, int m = 401) {
  SemigroupConfig c;
  c.dt = dt;
  c.vg.v_max = vmax;
  c.vg.m = m;
  return c;
}

}  // namespace

TEST_SUITE("semigroup") {
  TEST_CASE("constant data under a u-independent hamiltonian") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction u(g, std::vector<double>(g.num_nodes(), 0.75));
    const GridFunction v = lax_oleinik_step(make_quadratic(), u, 1e-3, config(1e-3));
    CHECK(v.values == u.values);
  }

  TEST_CASE("discount of constant data") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction u(g, std::vector<double>(g.num_nodes(), 1.0));
    const GridFunction v = lax_oleinik_step(make_discount(1.0), u, 1e-3, config(1e-3));
    for (double x : v.values) CHECK(std::abs(x - 0.999) <= 1e-14);
  }

  TEST_CASE("one step from |x|") {
    const GridSpec g = grid1(201, 4.0);
    const GridFunction u = expr(g, "abs(x)");
    const GridFunction v = lax_oleinik_step(make_quadratic(), u, 0.1, config(0.1));
    CHECK(std::abs(v[100]) <= 1e-12);
    CHECK(std::abs(v[150] - 1.95) <= 1e-12);  // x = 2
  }

  TEST_CASE("tabulated kernel matches the serial reference") {
    const GridSpec g = grid1(41, 2.0);
    const SemigroupConfig c = config(0.01, 3.0, 61);
    for (const HamiltonianSpec& h : {make_contact(1.0), make_discount(0.5), make_quadratic()}) {
      const GridFunction u = expr(g, "cos(x) + 0.3*x");
      const GridFunction a = lax_oleinik_step(h, u, c.dt, c);
      const GridFunction b = reference::lax_oleinik_step(h, u, c);
      CHECK_MESSAGE(sup_abs(a.values, b.values) <= 1e-12, h.name);
    }
    SemigroupConfig r = c;
    r.refine = true;
    CHECK_THROWS_AS(reference::lax_oleinik_step(make_quadratic(), expr(g, "x"), r),
                    PreconditionError);
  }

  TEST_CASE("hopf-lax step is the same kernel when H ignores u") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction u = expr(g, "sin(2*x)");
    const SemigroupConfig c = config(0.01);
    CHECK(hopf_lax_step(make_quadratic_potential(), u, 0.01, c).values ==
          lax_oleinik_step(make_quadratic_potential(), u, 0.01, c).values);
    CHECK(hopf_lax_step(make_discount(1.0), u, 0.01, c).values ==
          lax_oleinik_step(make_quadratic(), u, 0.01, c).values);
  }

  TEST_CASE("results do not depend on the thread count") {
    GridSpec g = grid1(31, 2.0);
    g.dim = 2;
    SemigroupConfig c = config(0.01, 2.0, 21);
    c.vg.dim = 2;
    const GridFunction u = expr(g, "cos(x)");
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const GridFunction a = evolve(make_contact(1.0), u, 0.05, c);
    omp_set_num_threads(8);
    const GridFunction b = evolve(make_contact(1.0), u, 0.05, c);
    omp_set_num_threads(saved);
    CHECK(a.values == b.values);
  }

  TEST_CASE("semigroup law on the step lattice") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction u = expr(g, "cos(x)");
    const SemigroupConfig c = config(1e-3, 3.0, 201);
    const GridFunction whole = evolve(make_contact(1.0), u, 0.02, c);
    const GridFunction split = evolve(make_contact(1.0), evolve(make_contact(1.0), u, 0.01, c), 0.01, c);
    CHECK(whole.values == split.values);
    CHECK(evolve(make_contact(1.0), u, 0.0, c).values == u.values);
  }

  TEST_CASE("order preservation and contraction on random data") {
    const GridSpec g = grid1(81, 2.0);
    const SemigroupConfig c = config(2e-3, 4.0, 201);
    const double t = 0.05;
    for (const HamiltonianSpec& h : {make_discount(1.0), make_contact(0.5), make_quadratic()}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GridFunction u = random_piecewise_linear(g, seed);
        const GridFunction gap = random_piecewise_linear(g, seed + 100, 8, 0.0, 1.0);
        std::vector<double> w(u.values);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += gap.values[i];
        const GridFunction v(g, w);
        const GridFunction su = evolve(h, u, t, c), sv = evolve(h, v, t, c);
        for (int i = 0; i < g.num_nodes(); ++i) CHECK_MESSAGE(su[i] <= sv[i], h.name);
        const double before = sup_abs(u.values, v.values);
        const double after = sup_abs(su.values, sv.values);
        CHECK_MESSAGE(after <= std::exp(h.u_lipschitz * t) * before + 1e-12, h.name);
      }
    }
  }

  TEST_CASE("truncation is counted and search radius is validated") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction steep = expr(g, "5*abs(x)");
    StepStats stats;
    evolve(make_quadratic(), steep, 0.01, config(1e-3, 1.0, 41), &stats);
    CHECK(stats.truncation_hits > 0);

    StepStats calm;
    evolve(make_quadratic(), expr(g, "0.5*cos(x)"), 0.01, config(1e-3, 4.0, 201), &calm);
    CHECK(calm.truncation_hits == 0);

    SemigroupConfig c = config(0.1, 4.0, 201);
    c.search_radius = 3;
    CHECK_THROWS_WITH_AS(c.validate(g), doctest::Contains("search_radius"), PreconditionError);
    c.search_radius = 11;
    CHECK_NOTHROW(c.validate(g));
  }

  TEST_CASE("precondition errors") {
    const GridSpec g = grid1(21, 2.0);
    const GridFunction u = expr(g, "x");
    CHECK_THROWS_WITH_AS(evolve(make_quadratic(), u, 0.0105, config(1e-3)),
                         doctest::Contains("t/dt not integral"), PreconditionError);
    CHECK_THROWS_WITH_AS(evolve(make_quadratic(), u, 1.0, config(0.0)),
                         doctest::Contains("dt must be positive"), PreconditionError);
    CHECK_THROWS_AS(evolve(make_eikonal_sine(1, 0), u, 0.01, config(1e-3)), PreconditionError);
    CHECK(step_count(1.0, 1e-3) == 1000);
  }

  TEST_CASE("default config covers the momenta of the data") {
    const GridSpec g = grid1(101, 2.0);
    const GridFunction u = expr(g, "2*x");
    const HamiltonianSpec h = make_quadratic();
    const SemigroupConfig c = default_semigroup_config({&h}, u, 1e-3);
    CHECK(c.vg.v_max == doctest::Approx(4.0));
    CHECK(c.vg.m == 401);
    CHECK(c.momenta().v_max == doctest::Approx(8.0));
  }

  TEST_CASE("barriers enclose the solution") {
    const GridSpec g = grid1(101, 2.0);
    for (const char* e : {"cos(x)", "0.5*abs(x) - 0.2", "x^2"}) {
      const GridFunction u = expr(g, e);
      const HamiltonianSpec h = make_contact(1.0);
      const SemigroupConfig c = default_semigroup_config({&h}, u, 1e-3, 201);
      const Barriers b = barrier_bounds(h, u, 0.1);
      const GridFunction v = evolve(h, u, 0.1, c);
      for (int i = 0; i < g.num_nodes(); ++i) {
        CHECK_MESSAGE(v[i] >= b.lower[i] - 1e-12, e);
        CHECK_MESSAGE(v[i] <= b.upper[i] + 1e-12, e);
      }
    }
    // a peak touches the lower barrier: for |p|^2 and 1 - |x|, u(0,t) = 1 - t
    // exactly, and the discrete conjugate must not pull the scheme under it
    const HamiltonianSpec twice = scale(make_quadratic(), 2.0);
    const GridFunction peak = expr(g, "1 - abs(x)");
    const GridFunction v = evolve(twice, peak, 0.1, default_semigroup_config({&twice}, peak, 1e-3, 121));
    const Barriers pb = barrier_bounds(twice, peak, 0.1);
    CHECK(pb.c1 == doctest::Approx(1.0));
    CHECK(v[50] >= pb.lower[50] - 1e-12);
    CHECK(std::abs(v[50] - 0.9) <= 1e-9);

    const GridFunction flat(g, std::vector<double>(g.num_nodes(), 0.0));
    const Barriers q = barrier_bounds(make_quadratic(), flat, 1.0);
    CHECK(q.c1 == 0.0);
    CHECK(q.width == 0.0);
  }
}
