#include <doctest.h>

#include <cmath>
#include <random>

#include "chj/lagrangian.hpp"
#include "chj/transform.hpp"
#include "helpers.hpp"

using namespace chj;
using testing::one;

namespace {

VelocityGrid vgrid(double vmax, int m, int dim = 1) {
  VelocityGrid vg;
  vg.v_max = vmax;
  vg.m = m;
  vg.dim = dim;
  return vg;
}

// (1 + x^2/4) |p|^2 / 2 + u: u-additive but not x-additive
HamiltonianSpec weighted_quadratic() {
  HamiltonianSpec h;
  h.name = "weighted";
  h.eval = [](std::span<const double> x, std::span<const double> p, double u) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return (1.0 + 0.25 * x[0] * x[0]) * 0.5 * s + u;
  };
  h.u_lipschitz = 1.0;
  h.flags = {true, true, false, true, false};
  return h;
}

// |p|^2 / 2 * (1 + u^2 / 10): the p-part depends on u
HamiltonianSpec value_weighted() {
  HamiltonianSpec h;
  h.name = "value_weighted";
  h.eval = [](std::span<const double>, std::span<const double> p, double u) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return 0.5 * s * (1.0 + 0.1 * u * u);
  };
  h.u_lipschitz = 1.0;
  h.flags = {true, true, false, false, false};
  return h;
}

}  // namespace

TEST_SUITE("transform") {
  TEST_CASE("velocity grid validation") {
    CHECK_NOTHROW(vgrid(4, 401).validate());
    CHECK_THROWS_AS(vgrid(4, 400).validate(), PreconditionError);
    CHECK_THROWS_AS(vgrid(0, 401).validate(), PreconditionError);
    CHECK_THROWS_AS(vgrid(4, 1).validate(), PreconditionError);
    CHECK_THROWS_AS(vgrid(4, 5, 3).validate(), PreconditionError);
    const VelocityGrid vg = vgrid(2, 5);
    CHECK(vg.axis_node(2) == 0.0);
    CHECK(vg.axis_node(0) == -2.0);
    CHECK(vg.on_boundary(4));
    CHECK_FALSE(vg.on_boundary(1));
  }

  TEST_CASE("conjugate examples") {
    const double x = 0.0, q = 1.0;
    const VelocityGrid vg = vgrid(4, 401);
    const ConjugateValue c = legendre_transform(make_quadratic(), one(x), 0.0, one(q), vg);
    CHECK(c.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.argmax[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.interior);

    const ConjugateValue d = legendre_transform(make_discount(1.0), one(x), 2.0, one(q), vg);
    CHECK(d.value == doctest::Approx(0.5 - 2.0).epsilon(1e-12));

    const double far = 5.0;
    const ConjugateValue e = legendre_transform(make_quadratic(), one(x), 0.0, one(far), vg);
    CHECK_FALSE(e.interior);
    CHECK(e.argmax[0] == 4.0);
  }

  TEST_CASE("inadmissible inputs") {
    const double x = 0.0, q = 1.0;
    CHECK_THROWS_AS(legendre_transform(make_eikonal_sine(1, 0), one(x), 0.0, one(q), vgrid(4, 41)),
                    PreconditionError);
    const Coord q2{1.0, 0.0};
    CHECK_THROWS_AS(legendre_transform(make_quadratic(), one(x), 0.0,
                                       std::span<const double>(q2.data(), 2), vgrid(4, 41)),
                    PreconditionError);
    CHECK_THROWS_AS(biconjugate_check(make_momentum_coordinate(), one(x), 0.0, vgrid(4, 41),
                                      vgrid(2, 21)),
                    PreconditionError);
  }

  TEST_CASE("tabulated and functional conjugates agree") {
    const VelocityGrid vg = vgrid(3, 61);
    std::vector<double> samples(vg.size());
    const double x = 0.5;
    for (int j = 0; j < vg.size(); ++j) {
      const double v = vg.axis_node(j);
      samples[j] = eval_hamiltonian(make_contact(1.0), one(x), one(v), 0.3);
    }
    for (double q = -2.0; q <= 2.0; q += 0.25) {
      const auto a = legendre_transform(make_contact(1.0), one(x), 0.3, one(q), vg);
      const auto b = legendre_transform(samples, one(q), vg);
      CHECK(a.value == b.value);
      CHECK(a.argmax_index == b.argmax_index);
    }
    CHECK_THROWS_AS(legendre_transform(std::vector<double>(3), one(x), vg), PreconditionError);
  }

  TEST_CASE("conjugate lower bound, convexity and nested-grid monotonicity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> R(-2.0, 2.0);
    const VelocityGrid coarse = vgrid(4, 201), fine = vgrid(4, 401);
    for (const HamiltonianSpec& h : builtin_catalog()) {
      if (!h.admissible()) continue;
      for (int k = 0; k < 100; ++k) {
        const double x = R(rng), u = R(rng), q1 = R(rng), q2 = R(rng), z = 0.0;
        const double mid = 0.5 * (q1 + q2);
        const double a = legendre_transform(h, one(x), u, one(q1), fine).value;
        const double b = legendre_transform(h, one(x), u, one(q2), fine).value;
        const double m = legendre_transform(h, one(x), u, one(mid), fine).value;
        CHECK_MESSAGE(a >= -eval_hamiltonian(h, one(x), one(z), u), h.name);
        CHECK_MESSAGE(m <= 0.5 * (a + b) + 1e-12, h.name);
        CHECK_MESSAGE(a >= legendre_transform(h, one(x), u, one(q1), coarse).value, h.name);
      }
    }
  }

  TEST_CASE("biconjugate recovers convex hamiltonians") {
    const double x = 0.4;
    const VelocityGrid vg = vgrid(8, 801), pg = vgrid(2, 81);
    for (const HamiltonianSpec& h : builtin_catalog()) {
      if (!h.admissible()) continue;
      const BiconjugateReport r = biconjugate_check(h, one(x), 0.5, vg, pg);
      CHECK_MESSAGE(r.max_deviation <= 1e-3, h.name);
      CHECK(r.rows.size() == 81u);
      CHECK(r.interior_warnings == 0);
    }
  }

  TEST_CASE("two-dimensional conjugate") {
    const Coord x{0.0, 0.0}, q{1.0, -0.5};
    const auto c = legendre_transform(make_quadratic(), std::span<const double>(x.data(), 2), 0.0,
                                      std::span<const double>(q.data(), 2), vgrid(2, 41, 2));
    CHECK(c.value == doctest::Approx(0.625).epsilon(1e-12));
  }

  TEST_CASE("lagrangian table modes match direct transforms") {
    const GridSpec g = testing::grid1(21, 2.0);
    const VelocityGrid vg = vgrid(2, 21), pg = default_momentum_grid(vg);
    CHECK(pg.v_max == 4.0);
    CHECK(pg.m == 81);

    const HamiltonianSpec contact = make_contact(1.0), weighted = weighted_quadratic(),
                          valued = value_weighted();
    struct Case {
      const HamiltonianSpec* h;
      LagrangianMode mode;
    } cases[] = {{&contact, LagrangianMode::kVelocityOnly},
                 {&weighted, LagrangianMode::kPerNode},
                 {&valued, LagrangianMode::kDirect}};
    for (const Case& c : cases) {
      const LagrangianTable t(*c.h, g, vg, pg);
      CHECK(t.mode() == c.mode);
      for (int node = 0; node < g.num_nodes(); node += 4) {
        const double x = g.node(node)[0];
        for (int j = 0; j < vg.size(); j += 3) {
          const double q = vg.axis_node(j);
          for (double u : {-1.0, 0.0, 0.7}) {
            const double want = legendre_transform(*c.h, one(x), u, one(q), pg).value;
            CHECK_MESSAGE(std::abs(t(node, j, u) - want) <= 1e-12 * (1.0 + std::abs(want)),
                          c.h->name);
            CHECK(std::abs(t.at(one(x), one(q), u).value - want) <= 1e-12 * (1.0 + std::abs(want)));
          }
        }
      }
    }
    CHECK_THROWS_AS(LagrangianTable(make_eikonal_sine(1, 0), g, vg, pg), PreconditionError);
  }
}
