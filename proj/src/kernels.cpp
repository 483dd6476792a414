#include <cmath>
#include <limits>
#include <string>

#include "chj/semigroup.hpp"

namespace chj {

LaxOleinikStepper::LaxOleinikStepper(const HamiltonianSpec& spec, const GridSpec& grid,
                                     const SemigroupConfig& cfg)
    : spec_(&spec),
      grid_(grid),
      cfg_(cfg),
      table_(spec, grid, cfg.vg, cfg.momenta()) {
  cfg_.validate(grid_);
  const VelocityGrid& vg = cfg_.vg;
  const double h = grid_.spacing();
  const int d = vg.dim;
  const int nv = vg.size();

  std::vector<char> active(nv, 1);
  if (cfg_.search_radius) {
    const double cap = *cfg_.search_radius * h + 1e-12;
    for (int j = 0; j < nv; ++j) {
      const Coord q = vg.node(j);
      for (int a = 0; a < d; ++a)
        if (std::abs(q[a]) * cfg_.dt > cap) active[j] = 0;
    }
  }

  shift_.resize(nv);
  edge_.assign(nv, 0);
  neighbour_.resize(nv);
  for (int j = 0; j < nv; ++j) {
    const Coord q = vg.node(j);
    for (int a = 0; a < d; ++a) shift_[j][a] = q[a] * cfg_.dt / h;
    if (!active[j]) continue;
    active_.push_back(j);
    bool edge = vg.on_boundary(j);
    for (int a = 0; a < d; ++a) {
      const int st = (d == 2 && a == 0) ? vg.m : 1;
      const int k = d == 2 ? (a == 0 ? j / vg.m : j % vg.m) : j;
      const int lo = k > 0 ? j - st : -1;
      const int hi = k < vg.m - 1 ? j + st : -1;
      neighbour_[j][2 * a] = (lo >= 0 && active[lo]) ? lo : -1;
      neighbour_[j][2 * a + 1] = (hi >= 0 && active[hi]) ? hi : -1;
      if (neighbour_[j][2 * a] < 0 || neighbour_[j][2 * a + 1] < 0) edge = true;
    }
    edge_[j] = edge ? 1 : 0;
  }
}

std::vector<double> LaxOleinikStepper::apply(const std::vector<double>& u, StepStats* stats,
                                             bool ignore_u) const {
  const int nn = grid_.num_nodes();
  if (u.size() != static_cast<std::size_t>(nn))
    throw PreconditionError("step input does not match the stepper grid");
  const double dt = cfg_.dt;
  const int d = grid_.dim;
  std::vector<double> out(nn, kBig);
  long long hits = 0;
  int err_node = std::numeric_limits<int>::max();
  std::string err_msg;

  auto candidate = [&](int node, int j, double* base) {
    const Stencil st = locate(grid_, node, std::span<const double>(shift_[j].data(), d));
    const double w = interpolate(u, st);
    if (base) *base = w;
    if (is_sentinel(w)) return kBig;
    return w + dt * table_(node, j, ignore_u ? 0.0 : w);
  };

#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (int node = 0; node < nn; ++node) {
    try {
      double best = kBig;
      int bj = -1;
      for (int j : active_) {
        const double c = candidate(node, j, nullptr);
        if (c < best) {
          best = c;
          bj = j;
        }
      }
      if (bj < 0) continue;
      if (edge_[bj]) ++hits;
      if (cfg_.refine) {
        double corr = 0.0;
        for (int a = 0; a < d; ++a) {
          const int lo = neighbour_[bj][2 * a], hi = neighbour_[bj][2 * a + 1];
          if (lo < 0 || hi < 0) continue;
          const double fm = candidate(node, lo, nullptr);
          const double fp = candidate(node, hi, nullptr);
          if (is_sentinel(fm) || is_sentinel(fp)) continue;
          const double curv = fp - 2.0 * best + fm;
          if (curv <= 0.0) continue;
          corr = std::min(corr, -(fp - fm) * (fp - fm) / (8.0 * curv));
        }
        best += corr;
      }
      out[node] = best;
    } catch (const Error& e) {
#pragma omp critical(chj_step_error)
      if (node < err_node) {
        err_node = node;
        err_msg = e.what();
      }
    }
  }
  if (!err_msg.empty()) throw NumericalError(err_msg);
  if (stats) {
    stats->truncation_hits += hits;
    stats->steps += 1;
  }
  return out;
}

}  // namespace chj
