#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "chj/hamiltonian.hpp"

namespace chj {

namespace {

using Span = std::span<const double>;
using Out = std::span<double>;

double norm2(Span p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return s;
}

void zero(Out o) {
  for (double& v : o) v = 0.0;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

HamiltonianSpec make_quadratic() {
  HamiltonianSpec h;
  h.name = "quadratic";
  h.eval = [](Span, Span p, double) { return 0.5 * norm2(p); };
  h.grad_x = [](Span, Span, double, Out o) { zero(o); };
  h.grad_p = [](Span, Span p, double, Out o) {
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = p[i];
  };
  h.grad_u = [](Span, Span, double) { return 0.0; };
  h.u_lipschitz = 0.0;
  h.flags = {true, true, true, true, true};
  return h;
}

HamiltonianSpec make_quadratic_potential() {
  HamiltonianSpec h = make_quadratic();
  h.name = "quadratic_potential";
  h.eval = [](Span x, Span p, double) {
    double v = 0.0;
    for (double xi : x) v += 1.0 - std::cos(xi);
    return 0.5 * norm2(p) + v;
  };
  h.grad_x = [](Span x, Span, double, Out o) {
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::sin(x[i]);
  };
  return h;
}

HamiltonianSpec make_discount(double alpha) {
  HamiltonianSpec h = make_quadratic();
  h.name = "discount(alpha=" + num(alpha) + ")";
  h.eval = [alpha](Span, Span p, double u) { return 0.5 * norm2(p) + alpha * u; };
  h.grad_u = [alpha](Span, Span, double) { return alpha; };
  h.u_lipschitz = std::abs(alpha);
  h.flags.u_independent = alpha == 0.0;
  return h;
}

HamiltonianSpec make_contact(double alpha) {
  HamiltonianSpec h = make_quadratic_potential();
  h.name = "contact(alpha=" + num(alpha) + ")";
  h.eval = [alpha](Span x, Span p, double u) {
    double v = 0.0;
    for (double xi : x) v += 1.0 - std::cos(xi);
    return 0.5 * norm2(p) + alpha * u + v;
  };
  h.grad_u = [alpha](Span, Span, double) { return alpha; };
  h.u_lipschitz = std::abs(alpha);
  h.flags.u_independent = alpha == 0.0;
  return h;
}

HamiltonianSpec make_eikonal_sine(double a0, double a1) {
  HamiltonianSpec h;
  h.name = "eikonal_sine";
  if (a0 != 1.0 || a1 != 0.0) h.name += "(a0=" + num(a0) + ",a1=" + num(a1) + ")";
  h.eval = [a0, a1](Span x, Span p, double u) {
    return (a0 + a1 * std::sin(x[0])) * std::sqrt(norm2(p)) + std::sin(u);
  };
  h.grad_x = [a1](Span x, Span p, double, Out o) {
    zero(o);
    o[0] = a1 * std::cos(x[0]) * std::sqrt(norm2(p));
  };
  // |p| is not differentiable at 0; the zero subgradient is used there.
  h.grad_p = [a0, a1](Span x, Span p, double, Out o) {
    const double r = std::sqrt(norm2(p));
    const double a = a0 + a1 * std::sin(x[0]);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = r > 0.0 ? a * p[i] / r : 0.0;
  };
  h.grad_u = [](Span, Span, double u) { return std::cos(u); };
  h.u_lipschitz = 1.0;
  h.flags = {true, false, false, true, a1 == 0.0};
  return h;
}

HamiltonianSpec make_momentum_coordinate() {
  HamiltonianSpec h;
  h.name = "p1";
  h.eval = [](Span, Span p, double) { return p[0]; };
  h.grad_x = [](Span, Span, double, Out o) { zero(o); };
  h.grad_p = [](Span, Span, double, Out o) {
    zero(o);
    o[0] = 1.0;
  };
  h.grad_u = [](Span, Span, double) { return 0.0; };
  h.flags = {true, false, true, true, true};
  return h;
}

HamiltonianSpec make_position_coordinate() {
  HamiltonianSpec h;
  h.name = "x1";
  h.eval = [](Span x, Span, double) { return x[0]; };
  h.grad_x = [](Span, Span, double, Out o) {
    zero(o);
    o[0] = 1.0;
  };
  h.grad_p = [](Span, Span, double, Out o) { zero(o); };
  h.grad_u = [](Span, Span, double) { return 0.0; };
  h.flags = {true, false, true, true, false};
  return h;
}

HamiltonianSpec make_value_coordinate() {
  HamiltonianSpec h;
  h.name = "u";
  h.eval = [](Span, Span, double u) { return u; };
  h.grad_x = [](Span, Span, double, Out o) { zero(o); };
  h.grad_p = [](Span, Span, double, Out o) { zero(o); };
  h.grad_u = [](Span, Span, double) { return 1.0; };
  h.u_lipschitz = 1.0;
  h.flags = {true, false, false, true, true};
  return h;
}

std::vector<HamiltonianSpec> builtin_catalog() {
  return {
      make_quadratic(),
      make_quadratic_potential(),
      make_discount(1.0),
      make_contact(1.0),
      shift(make_discount(1.0), 1.0),
      scale(make_quadratic(), 2.0),
      scale(make_contact(1.0), 2.0),
      make_eikonal_sine(1.0, 0.0),
      make_momentum_coordinate(),
      make_position_coordinate(),
      make_value_coordinate(),
  };
}

namespace {

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* b = s.data();
  const auto* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || !std::isfinite(v))
    throw PreconditionError("bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

HamiltonianSpec hamiltonian_from_selector(std::string_view selector) {
  const std::string full(selector);
  std::string_view s = trim(selector);
  if (s.empty()) throw PreconditionError("empty hamiltonian selector");

  double factor = 1.0;
  bool scaled = false;
  if (auto star = s.find('*'); star != std::string_view::npos) {
    factor = parse_number(trim(s.substr(0, star)), full);
    scaled = true;
    s = trim(s.substr(star + 1));
  }

  double offset = 0.0;
  bool shifted = false;
  {
    // A trailing +c / -c after the name or its closing parenthesis.
    const auto close = s.rfind(')');
    const auto from = close == std::string_view::npos ? 0 : close + 1;
    const auto sign = s.find_first_of("+-", from == 0 ? 1 : from);
    if (sign != std::string_view::npos) {
      offset = parse_number(trim(s.substr(sign)), full);
      shifted = true;
      s = trim(s.substr(0, sign));
    }
  }

  std::string_view name = s;
  std::map<std::string, double, std::less<>> args;
  if (auto open = s.find('('); open != std::string_view::npos) {
    if (s.back() != ')') throw PreconditionError("unbalanced parentheses in " + full);
    name = trim(s.substr(0, open));
    std::string_view body = s.substr(open + 1, s.size() - open - 2);
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      std::string_view kv = trim(body.substr(0, comma));
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos)
        throw PreconditionError("expected key=value in " + full);
      args[std::string(trim(kv.substr(0, eq)))] = parse_number(trim(kv.substr(eq + 1)), full);
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }

  auto take = [&](std::string_view key, double def) {
    auto it = args.find(key);
    if (it == args.end()) return def;
    const double v = it->second;
    args.erase(it);
    return v;
  };

  HamiltonianSpec h;
  if (name == "quadratic") {
    h = make_quadratic();
  } else if (name == "quadratic_potential") {
    h = make_quadratic_potential();
  } else if (name == "discount") {
    h = make_discount(take("alpha", 1.0));
  } else if (name == "contact") {
    h = make_contact(take("alpha", 1.0));
  } else if (name == "eikonal_sine") {
    const double a0 = take("a0", 1.0);
    const double a1 = take("a1", 0.0);
    if (!(a0 - std::abs(a1) > 0.0))
      throw PreconditionError("eikonal_sine needs a0 > |a1| so that a(x) stays positive");
    h = make_eikonal_sine(a0, a1);
  } else if (name == "p1") {
    h = make_momentum_coordinate();
  } else if (name == "x1") {
    h = make_position_coordinate();
  } else if (name == "u") {
    h = make_value_coordinate();
  } else {
    throw PreconditionError("unknown hamiltonian '" + std::string(name) + "'");
  }
  if (!args.empty())
    throw PreconditionError("unknown parameter '" + args.begin()->first + "' for " +
                            std::string(name));
  if (scaled) h = scale(h, factor);
  if (shifted) h = shift(h, offset);
  return h;
}

}  // namespace chj
