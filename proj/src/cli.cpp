#include "chj/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chj/acceptance.hpp"
#include "chj/bracket.hpp"
#include "chj/csv.hpp"
#include "chj/harness.hpp"
#include "chj/initial_data.hpp"
#include "chj/oracle.hpp"
#include "chj/semigroup.hpp"

namespace chj {

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"evolve", "evolve initial data by the semigroup"},
    {"legendre", "biconjugate check of a hamiltonian"},
    {"bracket", "scan the bracket of two hamiltonians over a box"},
    {"commute", "commutation defect of two semigroups"},
    {"reparam", "compare S_H(t) with S_tH(1)"},
    {"multitime", "multi-time solution through sum t_i H_i"},
    {"scale", "scaling identity defect"},
    {"oracle", "brute-force value at one point"},
    {"selftest", "run the acceptance suite"},
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v))
      throw ConfigError(key + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

/// Splits on commas that are not inside parentheses.
std::vector<std::string> split_selectors(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    if (key == "strict" || key == "refine" || key == "artifacts-only") {
      if (value == "true" || value == "1") out.push_back("--" + key);
      else if (value != "false" && value != "0") throw ConfigError(key + " must be true or false");
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

bool is_integral(double t, double dt) {
  const double r = t / dt;
  return std::abs(r - std::round(r)) <= 1e-9;
}

void validate(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw ConfigError("dim must be 1 or 2");
  if (!(c.L > 0.0)) throw ConfigError("L must be positive");
  if (c.n < 3) throw ConfigError("n must be at least 3");
  if (c.boundary != "periodic" && c.boundary != "clamped")
    throw ConfigError("boundary must be periodic or clamped");
  for (double dt : c.dts)
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (c.dts.size() > 1 && c.command != "commute")
    throw ConfigError("dt: lists are only accepted by commute");
  if (c.vmax && !(*c.vmax > 0.0)) throw ConfigError("vmax must be positive");
  if (c.vpoints && (*c.vpoints < 3 || *c.vpoints % 2 == 0))
    throw ConfigError("vpoints must be odd and at least 3");
  if (c.samples < 2) throw ConfigError("samples must be at least 2");
  if (c.dx_cap && !(*c.dx_cap > 0.0)) throw ConfigError("dx-cap must be positive");
  if (c.ppoints < 3 || c.ppoints % 2 == 0) throw ConfigError("ppoints must be odd and at least 3");
  if (!(c.pmax > 0.0)) throw ConfigError("pmax must be positive");
  if (c.K < 1) throw ConfigError("K must be at least 1");
  if (c.rounds < 1) throw ConfigError("rounds must be at least 1");
  if (c.workers < 0) throw ConfigError("workers must be non-negative");
  if (!(c.lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(c.mu >= 0.0)) throw ConfigError("mu must be non-negative");
  if (!(c.k > 0.0)) throw ConfigError("k must be positive");
  for (double t : c.t)
    if (!(t >= 0.0)) throw ConfigError("t must be non-negative");
  if (c.t.size() > 1 && c.command != "multitime")
    throw ConfigError("t: lists are only accepted by multitime");

  const std::string& cmd = c.command;
  if (cmd == "evolve" || cmd == "reparam" || cmd == "scale") {
    if (!is_integral(c.t.front(), c.dt())) throw ConfigError("t/dt not integral");
  }
  if (cmd == "scale" && !is_integral(c.t.front() / c.k, c.dt() / c.k))
    throw ConfigError("t/k is not a multiple of dt/k");
  if (cmd == "commute") {
    for (double dt : c.dts)
      if (!is_integral(c.lambda, dt) || !is_integral(c.mu, dt))
        throw ConfigError("lambda/dt and mu/dt must be integral");
  }
  if (cmd == "multitime" && !is_integral(1.0, c.dt())) throw ConfigError("1/dt not integral");
  if (cmd == "oracle") {
    if (c.dim != 1) throw ConfigError("oracle is 1-D only");
    if (!(c.t.front() > 0.0)) throw ConfigError("t must be positive for oracle");
    if (std::find(c.vels.begin(), c.vels.end(), 0.0) == c.vels.end())
      throw ConfigError("vels must contain 0");
  }

  if (!c.out.empty()) {
    std::error_code ec;
    const std::filesystem::path p(c.out);
    const auto dir = cmd == "selftest" ? p : p.parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir, ec))
      throw ConfigError("out: directory does not exist: " + dir.string());
  }
}

GridSpec grid_of(const RunConfig& c) {
  GridSpec g;
  g.dim = c.dim;
  g.half_width = c.L;
  g.n = c.n;
  g.boundary = parse_boundary(c.boundary);
  return g;
}

SemigroupConfig semigroup_for(const RunConfig& c, const std::vector<const HamiltonianSpec*>& specs,
                              const GridFunction& u0, double dt) {
  SemigroupConfig s = default_semigroup_config(specs, u0, dt, c.vpoints.value_or(0));
  if (c.vmax) s.vg.v_max = *c.vmax;
  s.refine = c.refine;
  return s;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text(c.out, text);
  }
}

int report_truncation(const RunConfig& c, const StepStats& st, std::ostream& err) {
  if (st.truncation_hits == 0) return 0;
  err << "warning: velocity truncation hit at " << st.truncation_hits
      << " node-steps; raise --vmax\n";
  return c.strict ? 1 : 0;
}

int cmd_evolve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.hamiltonian);
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  const SemigroupConfig s = semigroup_for(c, {&h}, u0, c.dt());
  StepStats st;
  const GridFunction u = evolve(h, u0, c.t.front(), s, &st);
  emit(c, grid_function_csv(u), out);
  return report_truncation(c, st, err);
}

int cmd_legendre(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.hamiltonian);
  VelocityGrid vg{c.vmax.value_or(8.0), c.vpoints.value_or(801), c.dim};
  VelocityGrid pg{c.pmax, c.ppoints, c.dim};
  Coord x{c.x, c.x};
  const auto rep = biconjugate_check(h, std::span<const double>(x.data(), c.dim), c.u, vg, pg);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  if (c.dim == 1) {
    header = {"p", "H", "Hstar2", "abs_err"};
  } else {
    header = {"p0", "p1", "H", "Hstar2", "abs_err"};
  }
  for (const auto& r : rep.rows) {
    if (c.dim == 1) {
      rows.push_back({r.p[0], r.h, r.h_star2, r.abs_err});
    } else {
      rows.push_back({r.p[0], r.p[1], r.h, r.h_star2, r.abs_err});
    }
  }
  emit(c, csv_text(header, rows), out);
  if (!c.out.empty()) out << "max_deviation," << format_number(rep.max_deviation) << "\n";
  if (rep.interior_warnings > 0) {
    err << "warning: " << rep.interior_warnings << " conjugations maximised on the grid edge\n";
    if (c.strict) return 1;
  }
  return 0;
}

int cmd_bracket(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.H);
  const HamiltonianSpec f = hamiltonian_from_selector(c.F);
  ScanOptions opt;
  opt.samples_per_axis = c.samples;
  opt.keep_rows = true;
  opt.seed = c.seed;
  if (c.dx_cap) opt.dx_cap = *c.dx_cap;
  const BracketReport rep = bracket_scan(h, f, parse_box(c.box, c.dim), opt);
  std::vector<std::vector<double>> rows;
  for (const auto& s : rep.rows) {
    if (c.dim == 1) {
      rows.push_back({s.x[0], s.p[0], s.u, s.value});
    } else {
      rows.push_back({s.x[0], s.x[1], s.p[0], s.p[1], s.u, s.value});
    }
  }
  const std::vector<std::string> header =
      c.dim == 1 ? std::vector<std::string>{"x", "p", "u", "bracket"}
                 : std::vector<std::string>{"x0", "x1", "p0", "p1", "u", "bracket"};
  const std::string text = csv_text(header, rows);
  if (!c.out.empty()) write_text(c.out, text);
  out << "verdict," << to_string(rep.verdict) << "\n"
      << "max_abs," << format_number(rep.max_abs) << "\n"
      << "max_pos," << format_number(rep.max_pos) << "\n"
      << "min_neg," << format_number(rep.min_neg) << "\n"
      << "samples," << rep.samples << "\n"
      << "tolerance," << format_number(rep.tolerance) << "\n";
  if (rep.dx_cap_hits > 0) {
    err << "warning: |D_x| above " << format_number(opt.dx_cap) << " at " << rep.dx_cap_hits
        << " samples\n";
    if (c.strict) return 1;
  }
  return 0;
}

int cmd_commute(const RunConfig& c, std::ostream& out, std::ostream&) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.H);
  const HamiltonianSpec f = hamiltonian_from_selector(c.F);
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  std::vector<std::vector<double>> rows;
  std::vector<std::string> verdicts;
  for (double dt : c.dts) {
    const SemigroupConfig s = semigroup_for(c, {&h, &f}, u0, dt);
    const CommutationReport r = commutation_defect(h, f, u0, c.lambda, c.mu, s);
    rows.push_back({r.lambda, r.mu, r.dt, r.sup_abs_defect, r.max_signed, r.min_signed});
    verdicts.push_back(to_string(r.verdict));
  }
  const std::string text =
      csv_text({"lambda", "mu", "dt", "sup_abs", "max_signed", "min_signed"}, rows);
  emit(c, text, out);
  for (std::size_t i = 0; i < verdicts.size(); ++i)
    out << "verdict," << format_number(c.dts[i]) << "," << verdicts[i] << "\n";
  return 0;
}

int cmd_reparam(const RunConfig& c, std::ostream& out, std::ostream&) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.hamiltonian);
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  const SemigroupConfig s = semigroup_for(c, {&h}, u0, c.dt());
  const double d = reparam_check(h, u0, c.t.front(), s);
  emit(c, csv_text({"t", "dt", "defect"}, {{c.t.front(), c.dt(), d}}), out);
  return 0;
}

int cmd_multitime(const RunConfig& c, std::ostream& out, std::ostream&) {
  std::vector<HamiltonianSpec> hs;
  for (const auto& sel : split_selectors(c.H)) hs.push_back(hamiltonian_from_selector(sel));
  if (hs.size() != c.t.size()) throw ConfigError("t: need one time per hamiltonian in H");
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  std::vector<std::pair<double, HamiltonianSpec>> terms;
  for (std::size_t i = 0; i < hs.size(); ++i) terms.emplace_back(c.t[i], hs[i]);
  bool zero = true;
  for (double t : c.t) zero = zero && t == 0.0;
  GridFunction u = u0;
  if (!zero) {
    const HamiltonianSpec g = linear_combination(terms);
    const SemigroupConfig s = semigroup_for(c, {&g}, u0, c.dt());
    u = multitime_solve(hs, c.t, u0, s);
  }
  emit(c, grid_function_csv(u), out);
  return 0;
}

int cmd_scale(const RunConfig& c, std::ostream& out, std::ostream&) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.H);
  const HamiltonianSpec f = hamiltonian_from_selector(c.F);
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  double d = 0.0;
  if (c.lambda != 0.0 || c.mu != 0.0) {
    const HamiltonianSpec g = linear_combination({{c.mu, h}, {c.lambda, f}});
    const SemigroupConfig s = semigroup_for(c, {&g}, u0, c.dt());
    d = scaling_check(h, f, u0, c.t.front(), c.lambda, c.mu, c.k, s);
  }
  emit(c,
       csv_text({"t", "lambda", "mu", "k", "dt", "defect"},
                {{c.t.front(), c.lambda, c.mu, c.k, c.dt(), d}}),
       out);
  return 0;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const HamiltonianSpec h = hamiltonian_from_selector(c.hamiltonian);
  const GridFunction u0 = load_initial_data(c.u0, grid_of(c));
  OracleConfig oc;
  oc.K = c.K;
  oc.velocities = c.vels;
  oc.picard_rounds = c.rounds;
  const OracleResult r = brute_force_value(h, u0, c.x, c.t.front(), oc);
  emit(c,
       csv_text({"x", "t", "value", "last_change", "curves"},
                {{c.x, c.t.front(), r.value, r.last_change, static_cast<double>(r.curves)}}),
       out);
  if (!r.converged) {
    err << "warning: last picard round changed the value by " << format_number(r.last_change)
        << "\n";
    if (c.strict) return 1;
  }
  return 0;
}

int cmd_selftest(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.artifacts_only) {
    if (c.out.empty()) throw ConfigError("out: artifacts-only needs an output directory");
    write_acceptance_artifacts(c.out);
    return 0;
  }
  const auto results = run_acceptance(c.criteria, out);
  if (!c.out.empty()) write_acceptance_artifacts(c.out);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& in_args) {
  std::vector<std::string> args;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < in_args.size(); ++i) {
    const std::string& a = in_args[i];
    if (a == "--config") {
      if (i + 1 >= in_args.size()) throw ConfigError("config: missing file name");
      auto more = config_file_args(in_args[++i]);
      from_file.insert(from_file.end(), more.begin(), more.end());
    } else if (a.rfind("--config=", 0) == 0) {
      auto more = config_file_args(a.substr(9));
      from_file.insert(from_file.end(), more.begin(), more.end());
    } else {
      args.push_back(a);
    }
  }
  // File values go right after the subcommand so the command line wins.
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::any_of(kCommands.begin(), kCommands.end(),
                       [&](const auto& cmd) { return cmd.first == a; });
  });
  const auto pos = sub == args.end() ? args.begin() : sub + 1;
  args.insert(pos, from_file.begin(), from_file.end());

  RunConfig c;
  CLI::App app{"contact Hamilton-Jacobi semigroup toolkit", "chj"};
  app.option_defaults()->take_last();
  app.require_subcommand(1);
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help)->fallthrough();

  std::string dt_text, t_text, vels_text, criteria_text;
  app.add_option("--hamiltonian", c.hamiltonian, "hamiltonian selector");
  app.add_option("--H", c.H, "first hamiltonian (comma list for multitime)");
  app.add_option("--F", c.F, "second hamiltonian");
  app.add_option("--dim", c.dim, "spatial dimension (1 or 2)");
  app.add_option("--L", c.L, "half width of the domain");
  app.add_option("--n", c.n, "nodes per axis");
  app.add_option("--boundary", c.boundary, "periodic or clamped");
  app.add_option("--dt", dt_text, "time step (comma list for commute)");
  app.add_option("--vmax", c.vmax, "velocity box half width");
  app.add_option("--vpoints", c.vpoints, "velocity points per axis (odd)");
  app.add_flag("--refine", c.refine, "parabolic refinement of the step minimum");
  app.add_option("--t", t_text, "time (comma list for multitime)");
  app.add_option("--lambda", c.lambda, "time for H");
  app.add_option("--mu", c.mu, "time for F");
  app.add_option("--k", c.k, "scaling factor");
  app.add_option("--box", c.box, "phase-space box, e.g. x=-3:3,p=-3:3,u=-2:2");
  app.add_option("--samples", c.samples, "lattice samples per axis");
  app.add_option("--dx-cap", c.dx_cap, "bracket: warn where |D_xH| or |D_xF| exceeds this");
  app.add_option("--u0", c.u0, "initial data file or expression");
  app.add_option("--x", c.x, "evaluation point");
  app.add_option("--u", c.u, "value argument for legendre");
  app.add_option("--pmax", c.pmax, "momentum range for legendre");
  app.add_option("--ppoints", c.ppoints, "momentum points for legendre");
  app.add_option("--K", c.K, "oracle sub-steps");
  app.add_option("--vels", vels_text, "oracle velocities");
  app.add_option("--rounds", c.rounds, "oracle picard rounds");
  app.add_option("--out", c.out, "output file (directory for selftest)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_flag("--strict", c.strict, "treat truncation and convergence warnings as failures");
  app.add_option("--workers", c.workers, "OpenMP threads");
  app.add_option("--criteria", criteria_text, "selftest: comma list of criteria to run");
  app.add_flag("--artifacts-only", c.artifacts_only, "selftest: only write the CSV artifacts");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto* s : app.get_subcommands()) c.command = s->get_name();

  if (!dt_text.empty()) c.dts = parse_list(dt_text, "dt");
  if (!t_text.empty()) c.t = parse_list(t_text, "t");
  if (!vels_text.empty()) c.vels = parse_list(vels_text, "vels");
  if (!criteria_text.empty())
    for (double v : parse_list(criteria_text, "criteria")) c.criteria.push_back(static_cast<int>(v));
  validate(c);
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.workers > 0) omp_set_num_threads(c.workers);
    const std::string& cmd = c.command;
    if (cmd == "evolve") return cmd_evolve(c, out, err);
    if (cmd == "legendre") return cmd_legendre(c, out, err);
    if (cmd == "bracket") return cmd_bracket(c, out, err);
    if (cmd == "commute") return cmd_commute(c, out, err);
    if (cmd == "reparam") return cmd_reparam(c, out, err);
    if (cmd == "multitime") return cmd_multitime(c, out, err);
    if (cmd == "scale") return cmd_scale(c, out, err);
    if (cmd == "oracle") return cmd_oracle(c, out, err);
    if (cmd == "selftest") return cmd_selftest(c, out, err);
    throw ConfigError("unknown subcommand '" + cmd + "'");
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig c;
  try {
    c = parse_config(args);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return run(c, std::cout, std::cerr);
}

}  // namespace chj
