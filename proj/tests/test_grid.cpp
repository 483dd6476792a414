#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "chj/csv.hpp"
#include "chj/grid.hpp"
#include "chj/initial_data.hpp"
#include "helpers.hpp"

using namespace chj;
using testing::grid1;

TEST_SUITE("grid") {
  TEST_CASE("spacing and nodes") {
    const GridSpec c = grid1(201, 4.0);
    CHECK(c.spacing() == doctest::Approx(0.04));
    CHECK(c.node(0)[0] == -4.0);
    CHECK(c.node(200)[0] == doctest::Approx(4.0));
    const GridSpec p = grid1(40, 2.0, Boundary::kPeriodic);
    CHECK(p.spacing() == doctest::Approx(0.1));
    CHECK(p.node(39)[0] == doctest::Approx(1.9));

    GridSpec g2 = grid1(5, 1.0);
    g2.dim = 2;
    CHECK(g2.num_nodes() == 25);
    CHECK(g2.node(7)[0] == doctest::Approx(-0.5));
    CHECK(g2.node(7)[1] == doctest::Approx(0.0));
    const Coord x{-0.5, 0.0};
    CHECK(g2.find_node(std::span<const double>(x.data(), 2)) == 7);
    const Coord off{-0.4, 0.0};
    CHECK(g2.find_node(std::span<const double>(off.data(), 2)) == -1);
  }

  TEST_CASE("validation and boundary parsing") {
    CHECK_THROWS_AS(grid1(2).validate(), PreconditionError);
    CHECK_THROWS_AS(grid1(11, 0.0).validate(), PreconditionError);
    CHECK(parse_boundary("periodic") == Boundary::kPeriodic);
    CHECK_THROWS_WITH_AS(parse_boundary("open"), doctest::Contains("open"), PreconditionError);
    CHECK_THROWS_AS(GridFunction(grid1(5), std::vector<double>(4)), PreconditionError);
    CHECK_THROWS_AS(GridFunction(grid1(5), std::vector<double>{0, 0, NAN, 0, 0}), NumericalError);
  }

  TEST_CASE("interpolation stencils") {
    const GridSpec g = grid1(5, 2.0);  // nodes -2..2
    const std::vector<double> v{0.0, 1.0, 4.0, 9.0, 16.0};
    const double half = 0.5, zero = 0.0, far = 10.0, back = -10.0;
    CHECK(interpolate(v, locate(g, 2, testing::one(zero))) == 4.0);
    CHECK(interpolate(v, locate(g, 2, testing::one(half))) == 2.5);
    CHECK(interpolate(v, locate(g, 2, testing::one(far))) == 0.0);    // clamped low end
    CHECK(interpolate(v, locate(g, 2, testing::one(back))) == 16.0);  // clamped high end

    const GridSpec p = grid1(4, 2.0, Boundary::kPeriodic);  // nodes -2,-1,0,1
    const std::vector<double> w{0.0, 1.0, 2.0, 3.0};
    const double wrap = 1.5;
    CHECK(interpolate(w, locate(p, 0, testing::one(wrap))) == 2.5);  // x = -3.5 wraps to 0.5
  }

  TEST_CASE("sentinels") {
    const GridSpec g = grid1(5, 2.0);
    const std::vector<double> v{0.0, kBig, 4.0, 9.0, 16.0};
    const double half = 0.5;
    const Stencil s = locate(g, 2, testing::one(half));
    CHECK(interpolate(v, s) == kBig);
    CHECK(interpolate_finite(v, s) == 4.0);
    CHECK(lipschitz_estimate(g, v) == 7.0);
  }

  TEST_CASE("linear data is reproduced by interpolation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> S(-3.0, 3.0);
    GridSpec g = grid1(21, 2.0);
    g.dim = 2;
    std::vector<double> v(g.num_nodes());
    for (int k = 0; k < g.num_nodes(); ++k) v[k] = 2.0 * g.node(k)[0] - g.node(k)[1];
    for (int k = 0; k < 200; ++k) {
      const int node = static_cast<int>(rng() % g.num_nodes());
      Coord sh{S(rng), S(rng)};
      const auto idx = g.axis_index(node);
      // keep the foot inside the grid so clamping does not apply
      for (int a = 0; a < 2; ++a) sh[a] = std::clamp(sh[a], idx[a] - 20.0, static_cast<double>(idx[a]));
      const Stencil st = locate(g, node, std::span<const double>(sh.data(), 2));
      const double h = g.spacing();
      const double want = 2.0 * (g.node(node)[0] - sh[0] * h) - (g.node(node)[1] - sh[1] * h);
      CHECK(std::abs(interpolate(v, st) - want) <= 1e-12);
      double wsum = 0.0;
      for (int i = 0; i < st.count; ++i) wsum += st.w[i];
      CHECK(std::abs(wsum - 1.0) <= 1e-15);
    }
  }

  TEST_CASE("sup distance and core mask") {
    const GridSpec g = grid1(5, 2.0);
    const GridFunction a(g, {0, 1, 2, 3, 4}), b(g, {0, 1, 2, 3, 10});
    CHECK(sup_distance(a, b) == 6.0);
    CHECK(sup_distance(a, b, core_mask(g, 1.0)) == 0.0);
    CHECK_THROWS_AS(sup_distance(a, GridFunction(grid1(6, 2.0), std::vector<double>(6))),
                    PreconditionError);
    CHECK(a.lip_estimate == 1.0);
  }

  TEST_CASE("initial data expressions") {
    const GridSpec g = grid1(9, 2.0);
    const GridFunction f = testing::expr(g, "1 + 0.5*cos(x)");
    CHECK(f[4] == 1.5);
    CHECK(testing::expr(g, "abs(x)")[0] == 2.0);
    CHECK(testing::expr(g, "x^2 - x")[0] == 6.0);
    CHECK(testing::expr(g, "-2*sin(3*x)")[4] == 0.0);
    CHECK_THROWS_AS(InitialExpression::parse("exp(x)"), PreconditionError);
    CHECK_THROWS_AS(InitialExpression::parse("1 +"), PreconditionError);

    GridSpec g2 = g;
    g2.dim = 2;
    const GridFunction s = testing::expr(g2, "abs(x)");
    CHECK(s[0] == 4.0);  // |x0| + |x1| at the corner
  }

  TEST_CASE("random piecewise-linear data") {
    const GridSpec g = grid1(201, 4.0);
    const GridFunction a = random_piecewise_linear(g, 3), b = random_piecewise_linear(g, 3);
    CHECK(a.values == b.values);
    CHECK(a.values != random_piecewise_linear(g, 4).values);
    for (double v : a.values) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }

  TEST_CASE("csv formatting and round trip") {
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(csv_text({"a", "b"}, {{1, 2.5}}) == "a,b\n1,2.5\n");

    const auto dir = std::filesystem::temp_directory_path() / "chj_grid_test";
    std::filesystem::create_directories(dir);
    const GridSpec g = grid1(11, 1.0);
    const GridFunction f = testing::expr(g, "cos(x) + 0.25*x");
    const std::string path = (dir / "u.csv").string();
    write_text(path, grid_function_csv(f));
    const GridFunction back = read_grid_function(path, g);
    CHECK(sup_distance(f, back) <= 1e-11);
    CHECK(load_initial_data(path, g).values == back.values);
    CHECK_THROWS_AS(read_grid_function(path, grid1(11, 2.0)), PreconditionError);
    CHECK_THROWS_AS(write_text((dir / "missing" / "u.csv").string(), "x"), PreconditionError);
    std::filesystem::remove_all(dir);
  }
}
