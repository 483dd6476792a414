#include "chj/transform.hpp"

#include <cmath>
#include <limits>

namespace chj {

void VelocityGrid::validate() const {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("velocity grid dimension must be 1 or 2");
  if (!(v_max > 0.0) || !std::isfinite(v_max))
    throw PreconditionError("vmax must be positive and finite");
  if (m < 3 || m % 2 == 0) throw PreconditionError("vpoints must be odd and at least 3");
}

Coord VelocityGrid::node(int j) const {
  Coord c{};
  if (dim == 1) {
    c[0] = axis_node(j);
  } else {
    c[0] = axis_node(j / m);
    c[1] = axis_node(j % m);
  }
  return c;
}

bool VelocityGrid::on_boundary(int j) const {
  auto edge = [this](int k) { return k == 0 || k == m - 1; };
  return dim == 1 ? edge(j) : (edge(j / m) || edge(j % m));
}

namespace {

template <class ValueAt>
ConjugateValue sup_over_grid(ValueAt&& value_at, std::span<const double> p,
                             const VelocityGrid& vg) {
  const int d = vg.dim;
  ConjugateValue best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < vg.size(); ++j) {
    const Coord v = vg.node(j);
    double dot = 0.0;
    for (int a = 0; a < d; ++a) dot += v[a] * p[a];
    const double cand = dot - value_at(j, std::span<const double>(v.data(), d));
    if (cand > best.value) {
      best.value = cand;
      best.argmax = v;
      best.argmax_index = j;
    }
  }
  if (!std::isfinite(best.value))
    throw NumericalError("non-finite legendre transform value");
  best.interior = !vg.on_boundary(best.argmax_index);
  return best;
}

}  // namespace

ConjugateValue legendre_transform(const HamiltonianSpec& spec, std::span<const double> x,
                                  double u, std::span<const double> p, const VelocityGrid& vg) {
  if (!spec.flags.superlinear_in_p)
    throw PreconditionError("legendre transform of " + spec.name +
                            " requires a hamiltonian superlinear in p");
  if (p.size() != static_cast<std::size_t>(vg.dim) || x.size() != p.size())
    throw PreconditionError("legendre transform dimension mismatch");
  return sup_over_grid(
      [&](int, std::span<const double> v) { return eval_hamiltonian(spec, x, v, u); }, p, vg);
}

ConjugateValue legendre_transform(std::span<const double> samples, std::span<const double> p,
                                  const VelocityGrid& vg) {
  if (samples.size() != static_cast<std::size_t>(vg.size()))
    throw PreconditionError("tabulated function does not match the grid");
  return sup_over_grid([&](int j, std::span<const double>) { return samples[j]; }, p, vg);
}

BiconjugateReport biconjugate_check(const HamiltonianSpec& spec, std::span<const double> x,
                                    double u, const VelocityGrid& vg, const VelocityGrid& pg) {
  if (!spec.flags.convex_in_p)
    throw PreconditionError("biconjugate check of " + spec.name + " requires convexity in p");
  vg.validate();
  pg.validate();
  const int d = vg.dim;

  BiconjugateReport rep;
  std::vector<double> h_star(vg.size());
  for (int j = 0; j < vg.size(); ++j) {
    const Coord q = vg.node(j);
    const auto c = legendre_transform(spec, x, u, std::span<const double>(q.data(), d), vg);
    // the sup sits on the edge at q = +-v_max for any superlinear H; harmless
    // unless the second conjugation picks those velocities
    h_star[j] = c.value;
  }

  rep.rows.reserve(pg.size());
  for (int i = 0; i < pg.size(); ++i) {
    const Coord p = pg.node(i);
    std::span<const double> ps(p.data(), d);
    const auto c = legendre_transform(h_star, ps, vg);
    if (!c.interior) ++rep.interior_warnings;
    BiconjugateRow row;
    row.p = p;
    row.h = eval_hamiltonian(spec, x, ps, u);
    row.h_star2 = c.value;
    row.abs_err = std::abs(row.h_star2 - row.h);
    rep.max_deviation = std::max(rep.max_deviation, row.abs_err);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace chj
