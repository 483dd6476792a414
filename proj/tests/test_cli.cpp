#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chj/cli.hpp"
#include "chj/csv.hpp"

using namespace chj;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  try {
    code = run(parse_config(args), out, err);
  } catch (const ConfigError& e) {
    err << e.what();
    code = 2;
  }
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto d = std::filesystem::temp_directory_path() / "chj_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("parsing examples") {
    const RunConfig c = parse_config({"evolve", "--hamiltonian", "discount(alpha=1)", "--u0", "cos(x)",
                                      "--t", "0.5", "--dt", "0.001", "--n", "101"});
    CHECK(c.command == "evolve");
    CHECK(c.hamiltonian == "discount(alpha=1)");
    CHECK(c.t.front() == 0.5);
    CHECK(c.n == 101);
    CHECK(c.boundary == "clamped");

    const RunConfig m = parse_config({"multitime", "--H", "discount,quadratic", "--t", "0.2,0.4"});
    CHECK(m.t == std::vector<double>{0.2, 0.4});
    const RunConfig k = parse_config({"commute", "--dt", "0.004,0.002,0.001", "--lambda", "0.2", "--mu", "0.2"});
    CHECK(k.dts.size() == 3u);
    CHECK(parse_config({"selftest", "--criteria", "1,3"}).criteria == std::vector<int>{1, 3});
  }

  TEST_CASE("configuration errors") {
    CHECK_THROWS_WITH_AS(parse_config({"evolve", "--t", "0.0105", "--dt", "0.001"}),
                         doctest::Contains("t/dt not integral"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config({"evolve", "--dt", "0"}), doctest::Contains("dt must be positive"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config({"evolve", "--boundary", "open"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"frobnicate"}), ConfigError);
    CHECK_THROWS_AS(parse_config({}), ConfigError);
    CHECK_THROWS_AS(parse_config({"evolve", "--n", "many"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"evolve", "--out", "/nonexistent/dir/u.csv"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"evolve", "--help"}), HelpRequested);
  }

  TEST_CASE("config files merge under the command line") {
    const auto dir = scratch();
    const auto path = (dir / "run.cfg").string();
    {
      std::ofstream f(path);
      f << "# comment\nhamiltonian = discount(alpha=1)\nn = 51\nstrict = true\n";
    }
    const RunConfig c = parse_config({"evolve", "--config", path, "--n", "61"});
    CHECK(c.hamiltonian == "discount(alpha=1)");
    CHECK(c.n == 61);
    CHECK(c.strict);
    {
      std::ofstream f(path);
      f << "n 51\n";
    }
    CHECK_THROWS_AS(parse_config({"evolve", "--config", path}), ConfigError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("exit codes") {
    const Outcome ok = invoke({"evolve", "--u0", "cos(x)", "--t", "0.01", "--dt", "0.001", "--n", "41"});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("x,u\n", 0) == 0);

    const Outcome bad = invoke({"evolve", "--hamiltonian", "nonsense", "--t", "0.01"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("nonsense") != std::string::npos);

    const Outcome inadmissible = invoke({"evolve", "--hamiltonian", "eikonal_sine", "--t", "0.01"});
    CHECK(inadmissible.code == 2);

    const Outcome fp = invoke({"evolve", "--hamiltonian", "discount(alpha=30)", "--u0", "cos(x)", "--t",
                               "0.01", "--dt", "0.01", "--n", "41", "--vmax", "0.5", "--vpoints", "5",
                               "--strict"});
    CHECK(fp.code == 1);
    CHECK(fp.err.find("truncation") != std::string::npos);
  }

  TEST_CASE("subcommand outputs") {
    const Outcome leg = invoke({"legendre", "--hamiltonian", "quadratic", "--ppoints", "5"});
    CHECK(leg.code == 0);
    CHECK(leg.out.rfind("p,H,Hstar2,abs_err\n", 0) == 0);

    const Outcome br = invoke({"bracket", "--H", "p1", "--F", "x1", "--samples", "3"});
    CHECK(br.code == 0);
    CHECK(br.out.find("verdict,none") != std::string::npos);
    CHECK(br.out.find("min_neg,-1") != std::string::npos);

    const Outcome capped = invoke({"bracket", "--H", "x1", "--F", "quadratic", "--samples", "3",
                                   "--dx-cap", "0.5", "--strict"});
    CHECK(capped.code == 1);
    CHECK(capped.err.find("warning") != std::string::npos);

    const Outcome cm = invoke({"commute", "--H", "quadratic", "--F", "2*quadratic", "--u0", "cos(x)",
                               "--n", "41", "--L", "4", "--lambda", "0.05", "--mu", "0.05", "--dt",
                               "0.01,0.005", "--vpoints", "41"});
    CHECK(cm.code == 0);
    CHECK(cm.out.find("verdict,0.01,commuting") != std::string::npos);

    const Outcome orc = invoke({"oracle", "--hamiltonian", "quadratic", "--u0", "0.5", "--t", "0.5",
                                "--n", "41", "--L", "2"});
    CHECK(orc.code == 0);
    CHECK(orc.out.find("0,0.5,0.5,") != std::string::npos);
  }

  TEST_CASE("csv output is deterministic and lands in --out") {
    const auto dir = scratch();
    const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    const std::vector<std::string> base{"evolve", "--hamiltonian", "contact", "--u0", "cos(x)",
                                        "--t", "0.02", "--dt", "0.001", "--n", "81"};
    auto with_out = [&](const std::string& p, const std::string& w) {
      auto v = base;
      v.insert(v.end(), {"--out", p, "--workers", w});
      return v;
    };
    CHECK(invoke(with_out(a, "1")).code == 0);
    CHECK(invoke(with_out(b, "4")).code == 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(!sa.str().empty());
    CHECK(sa.str() == sb.str());

    // the output can be read back as initial data
    const Outcome again = invoke({"evolve", "--hamiltonian", "contact", "--u0", a, "--t", "0", "--dt",
                                  "0.001", "--n", "81"});
    CHECK(again.code == 0);
    CHECK(again.out == sa.str());
    std::filesystem::remove_all(dir);
  }
}
