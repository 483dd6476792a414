#include "chj/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace chj {

namespace {

std::string describe_point(std::span<const double> x, std::span<const double> p, double u) {
  std::ostringstream os;
  os << "(x=[";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << "], p=[";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << "], u=" << u << ")";
  return os.str();
}

void check_dims(std::span<const double> x, std::span<const double> p) {
  if (x.size() != p.size() || x.empty() || x.size() > static_cast<std::size_t>(kMaxDim))
    throw PreconditionError("hamiltonian arguments must share dimension 1 or 2");
}

}  // namespace

double eval_hamiltonian(const HamiltonianSpec& spec, std::span<const double> x,
                        std::span<const double> p, double u) {
  check_dims(x, p);
  const double h = spec.eval(x, p, u);
  if (!std::isfinite(h))
    throw NumericalError("hamiltonian overflow at " + describe_point(x, p, u) + " for " +
                         spec.name);
  return h;
}

Gradients fd_gradients(const HamiltonianSpec& spec, std::span<const double> x,
                       std::span<const double> p, double u, double fd_step) {
  check_dims(x, p);
  if (!(fd_step > 0.0)) throw PreconditionError("fd_step must be positive");
  const int d = static_cast<int>(x.size());
  Gradients g;
  g.dim = d;
  Coord xs{}, ps{};
  for (int i = 0; i < d; ++i) {
    xs[i] = x[i];
    ps[i] = p[i];
  }
  std::span<const double> xv(xs.data(), d), pv(ps.data(), d);

  auto at = [&](double uu) {
    const double h = spec.eval(xv, pv, uu);
    if (!std::isfinite(h))
      throw NumericalError("gradient stencil failure at " + describe_point(xv, pv, uu));
    return h;
  };
  const double inv = 1.0 / (2.0 * fd_step);
  for (int i = 0; i < d; ++i) {
    xs[i] = x[i] + fd_step;
    const double hp = at(u);
    xs[i] = x[i] - fd_step;
    const double hm = at(u);
    xs[i] = x[i];
    g.dx[i] = (hp - hm) * inv;

    ps[i] = p[i] + fd_step;
    const double qp = at(u);
    ps[i] = p[i] - fd_step;
    const double qm = at(u);
    ps[i] = p[i];
    g.dp[i] = (qp - qm) * inv;
  }
  g.du = (at(u + fd_step) - at(u - fd_step)) * inv;
  return g;
}

Gradients eval_gradients(const HamiltonianSpec& spec, std::span<const double> x,
                         std::span<const double> p, double u, double fd_step) {
  if (!spec.has_analytic_gradients()) return fd_gradients(spec, x, p, u, fd_step);
  check_dims(x, p);
  Gradients g;
  g.dim = static_cast<int>(x.size());
  spec.grad_x(x, p, u, std::span<double>(g.dx.data(), g.dim));
  spec.grad_p(x, p, u, std::span<double>(g.dp.data(), g.dim));
  g.du = spec.grad_u(x, p, u);
  for (int i = 0; i < g.dim; ++i)
    if (!std::isfinite(g.dx[i]) || !std::isfinite(g.dp[i]))
      throw NumericalError("gradient stencil failure at " + describe_point(x, p, u));
  if (!std::isfinite(g.du))
    throw NumericalError("gradient stencil failure at " + describe_point(x, p, u));
  return g;
}

HamiltonianSpec compose_scalar(const HamiltonianSpec& spec, std::function<double(double)> f,
                               std::function<double(double)> f_prime,
                               const ComposeOptions& opts) {
  HamiltonianSpec out;
  out.name = opts.label + "(" + spec.name + ")";
  const ScalarField base = spec.eval;
  out.eval = [base, f](std::span<const double> x, std::span<const double> p, double u) {
    return f(base(x, p, u));
  };
  if (f_prime && spec.has_analytic_gradients()) {
    auto chain = [base, f_prime](const VectorField& g) {
      return [base, f_prime, g](std::span<const double> x, std::span<const double> p, double u,
                                std::span<double> out) {
        g(x, p, u, out);
        const double s = f_prime(base(x, p, u));
        for (double& v : out) v *= s;
      };
    };
    out.grad_x = chain(spec.grad_x);
    out.grad_p = chain(spec.grad_p);
    const ScalarField gu = spec.grad_u;
    out.grad_u = [base, f_prime, gu](std::span<const double> x, std::span<const double> p,
                                     double u) { return f_prime(base(x, p, u)) * gu(x, p, u); };
  }
  out.u_lipschitz = opts.u_lipschitz >= 0.0 ? opts.u_lipschitz : spec.u_lipschitz;
  out.flags.u_independent = spec.flags.u_independent;
  if (opts.increasing_convex) {
    out.flags.convex_in_p = spec.flags.convex_in_p;
    out.flags.superlinear_in_p = spec.flags.superlinear_in_p;
  }
  return out;
}

HamiltonianSpec scale(const HamiltonianSpec& spec, double k) {
  HamiltonianSpec out;
  std::ostringstream nm;
  nm << k << "*" << spec.name;
  out.name = nm.str();
  const ScalarField e = spec.eval;
  out.eval = [e, k](std::span<const double> x, std::span<const double> p, double u) {
    return k * e(x, p, u);
  };
  if (spec.has_analytic_gradients()) {
    auto mul = [k](const VectorField& g) {
      return [k, g](std::span<const double> x, std::span<const double> p, double u,
                    std::span<double> o) {
        g(x, p, u, o);
        for (double& v : o) v *= k;
      };
    };
    out.grad_x = mul(spec.grad_x);
    out.grad_p = mul(spec.grad_p);
    const ScalarField gu = spec.grad_u;
    out.grad_u = [gu, k](std::span<const double> x, std::span<const double> p, double u) {
      return k * gu(x, p, u);
    };
  }
  out.u_lipschitz = std::abs(k) * spec.u_lipschitz;
  out.flags = spec.flags;
  if (k <= 0.0) {
    out.flags.convex_in_p = k == 0.0;
    out.flags.superlinear_in_p = false;
  }
  return out;
}

HamiltonianSpec shift(const HamiltonianSpec& spec, double c) {
  HamiltonianSpec out = spec;
  std::ostringstream nm;
  nm << spec.name << (c < 0 ? "" : "+") << c;
  out.name = nm.str();
  const ScalarField e = spec.eval;
  out.eval = [e, c](std::span<const double> x, std::span<const double> p, double u) {
    return e(x, p, u) + c;
  };
  return out;
}

HamiltonianSpec linear_combination(const std::vector<std::pair<double, HamiltonianSpec>>& terms) {
  HamiltonianSpec out;
  std::vector<std::pair<double, HamiltonianSpec>> live;
  for (const auto& t : terms)
    if (t.first != 0.0) live.push_back(t);

  if (live.empty()) {
    out.name = "zero";
    out.eval = [](std::span<const double>, std::span<const double>, double) { return 0.0; };
    out.grad_x = [](std::span<const double>, std::span<const double>, double,
                    std::span<double> o) {
      for (double& v : o) v = 0.0;
    };
    out.grad_p = out.grad_x;
    out.grad_u = out.eval;
    out.flags = {true, false, true, true, true};
    return out;
  }

  std::ostringstream nm;
  bool analytic = true;
  HamiltonianFlags fl{true, false, true, true, true};
  double lip = 0.0;
  for (std::size_t i = 0; i < live.size(); ++i) {
    const auto& [c, h] = live[i];
    nm << (i ? "+" : "") << c << "*" << h.name;
    analytic = analytic && h.has_analytic_gradients();
    fl.convex_in_p = fl.convex_in_p && h.flags.convex_in_p && c > 0.0;
    fl.superlinear_in_p = fl.superlinear_in_p || (h.flags.superlinear_in_p && c > 0.0);
    fl.u_independent = fl.u_independent && h.flags.u_independent;
    fl.u_additive = fl.u_additive && h.flags.u_additive;
    fl.x_additive = fl.x_additive && h.flags.x_additive;
    lip += std::abs(c) * h.u_lipschitz;
  }
  fl.superlinear_in_p = fl.superlinear_in_p && fl.convex_in_p;
  out.name = nm.str();
  out.flags = fl;
  out.u_lipschitz = lip;
  out.eval = [live](std::span<const double> x, std::span<const double> p, double u) {
    double s = 0.0;
    for (const auto& [c, h] : live) s += c * h.eval(x, p, u);
    return s;
  };
  if (analytic) {
    auto sum_of = [live](VectorField HamiltonianSpec::*member) {
      return [live, member](std::span<const double> x, std::span<const double> p, double u,
                            std::span<double> o) {
        Coord tmp{};
        for (double& v : o) v = 0.0;
        for (const auto& [c, h] : live) {
          (h.*member)(x, p, u, std::span<double>(tmp.data(), o.size()));
          for (std::size_t i = 0; i < o.size(); ++i) o[i] += c * tmp[i];
        }
      };
    };
    out.grad_x = sum_of(&HamiltonianSpec::grad_x);
    out.grad_p = sum_of(&HamiltonianSpec::grad_p);
    out.grad_u = [live](std::span<const double> x, std::span<const double> p, double u) {
      double s = 0.0;
      for (const auto& [c, h] : live) s += c * h.grad_u(x, p, u);
      return s;
    };
  }
  return out;
}

}  // namespace chj
