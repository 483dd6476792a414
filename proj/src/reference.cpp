#include <cmath>

#include "chj/semigroup.hpp"

namespace chj::reference {

GridFunction lax_oleinik_step(const HamiltonianSpec& spec, const GridFunction& u,
                              const SemigroupConfig& cfg) {
  const GridSpec& g = u.grid;
  cfg.validate(g);
  if (!spec.admissible())
    throw PreconditionError(spec.name + " must be convex and superlinear in p");
  if (cfg.refine) throw PreconditionError("reference step does not refine");
  const VelocityGrid pg = cfg.momenta();
  const double h = g.spacing();
  const int d = g.dim;

  std::vector<double> out(g.num_nodes(), kBig);
  for (int node = 0; node < g.num_nodes(); ++node) {
    const Coord x = g.node(node);
    double best = kBig;
    for (int j = 0; j < cfg.vg.size(); ++j) {
      const Coord q = cfg.vg.node(j);
      Coord shift{};
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        shift[a] = q[a] * cfg.dt / h;
        if (cfg.search_radius && std::abs(q[a]) * cfg.dt > *cfg.search_radius * h + 1e-12)
          inside = false;
      }
      if (!inside) continue;
      const double w =
          interpolate(u.values, locate(g, node, std::span<const double>(shift.data(), d)));
      if (is_sentinel(w)) continue;
      const double hs = legendre_transform(spec, std::span<const double>(x.data(), d), w,
                                           std::span<const double>(q.data(), d), pg)
                            .value;
      const double c = w + cfg.dt * hs;
      if (c < best) best = c;
    }
    out[node] = best;
  }
  return GridFunction(g, std::move(out));
}

}  // namespace chj::reference
