#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chj/semigroup.hpp"

namespace chj {

namespace {

struct Segment {
  int s = 1;                       // length in steps
  std::array<int, kMaxDim> disp{};  // cells moved per axis over the segment
  Coord q{};                       // velocity
  double base = 0.0;               // velocity-only mode: H*(., q, 0) + H(., 0, 0)
};

struct Context {
  const HamiltonianSpec& spec;
  GridSpec g;
  double dt;
  LagrangianTable table;
  bool velocity_only;

  Context(const HamiltonianSpec& sp, const GridSpec& grid, const SemigroupConfig& cfg)
      : spec(sp),
        g(grid),
        dt(cfg.dt),
        table(sp, grid, cfg.vg, cfg.momenta()),
        velocity_only(table.mode() == LagrangianMode::kVelocityOnly) {}

  Segment make_segment(int s, std::array<int, kMaxDim> disp) const {
    Segment seg;
    seg.s = s;
    seg.disp = disp;
    const double h = g.spacing();
    for (int a = 0; a < g.dim; ++a) seg.q[a] = disp[a] * h / (s * dt);
    if (velocity_only) {
      const Coord x0 = g.node(0);
      seg.base = table.base_at(std::span<const double>(x0.data(), g.dim),
                               std::span<const double>(seg.q.data(), g.dim), nullptr);
    }
    return seg;
  }

  Coord position(int node, const Coord& shift) const {
    const auto idx = g.axis_index(node);
    const double h = g.spacing();
    Coord x{};
    for (int a = 0; a < g.dim; ++a) {
      double c = idx[a] - shift[a];
      if (g.boundary == Boundary::kPeriodic) c -= g.n * std::floor(c / g.n);
      x[a] = -g.half_width + c * h;
    }
    return x;
  }

  /// Sum over i = k-s+1..k of dt * H*(gamma(t_i), q, w(gamma(t_i), t_i)) for
  /// the segment ending at (node, t_k). Where w has no finite neighbour the
  /// value at the segment start stands in.
  double segment_cost(const Segment& seg, int node, int k, const SpaceTimeTable& w,
                      double fallback) const {
    const int d = g.dim;
    const int nn = g.num_nodes();
    double sum = 0.0;
    for (int i = k - seg.s + 1; i <= k; ++i) {
      Coord shift{};
      for (int a = 0; a < d; ++a)
        shift[a] = static_cast<double>((k - i) * seg.disp[a]) / seg.s;
      const Stencil st = locate(g, node, std::span<const double>(shift.data(), d));
      double wi = interpolate_finite(
          std::span<const double>(w.values.data() + static_cast<std::size_t>(i) * nn, nn), st);
      if (is_sentinel(wi)) wi = fallback;
      const Coord x = position(node, shift);
      std::span<const double> xs(x.data(), d);
      const double lag = velocity_only
                             ? seg.base - table.value_shift(xs, wi)
                             : table.at(xs, std::span<const double>(seg.q.data(), d), wi).value;
      sum += dt * lag;
    }
    return sum;
  }

  /// Start node of a segment ending at `node`, or -1 when it falls off a
  /// clamped grid.
  int start_node(int node, const std::array<int, kMaxDim>& disp) const {
    auto idx = g.axis_index(node);
    for (int a = 0; a < g.dim; ++a) {
      int y = idx[a] - disp[a];
      if (g.boundary == Boundary::kPeriodic) {
        y %= g.n;
        if (y < 0) y += g.n;
      } else if (y < 0 || y >= g.n) {
        return -1;
      }
      idx[a] = y;
    }
    return g.flat(idx);
  }
};

/// Segments with gcd(s, |disp|) = 1; longer multiples are chains of these
/// with identical quadrature points, so the DP recovers them anyway.
std::vector<std::vector<Segment>> primitive_segments(const Context& ctx, const SemigroupConfig& cfg,
                                                     int K) {
  const double h = ctx.g.spacing();
  const int smax = cfg.max_segment_steps > 0 ? std::min(K, cfg.max_segment_steps) : K;
  std::vector<std::vector<Segment>> out(smax + 1);
  for (int s = 1; s <= smax; ++s) {
    int r = static_cast<int>(std::floor(cfg.vg.v_max * s * ctx.dt / h + 1e-9));
    if (ctx.g.boundary == Boundary::kPeriodic) r = std::min(r, (ctx.g.n - 1) / 2);
    const int r1 = ctx.g.dim == 2 ? r : 0;
    for (int d0 = -r; d0 <= r; ++d0) {
      for (int d1 = -r1; d1 <= r1; ++d1) {
        if (std::gcd(std::gcd(s, std::abs(d0)), std::abs(d1)) != 1) continue;
        out[s].push_back(ctx.make_segment(s, {d0, d1}));
      }
    }
  }
  return out;
}

void require_contraction(const HamiltonianSpec& spec, const SemigroupConfig& cfg) {
  if (!spec.admissible())
    throw PreconditionError(spec.name + " must be convex and superlinear in p");
  if (!(cfg.dt * spec.u_lipschitz < 1.0))
    throw PreconditionError("dt * u_lipschitz must be below 1 for the fixed point");
}

}  // namespace

FixedPointResult fixed_point_A(const HamiltonianSpec& spec, const GridFunction& u0, double T,
                               const SemigroupConfig& cfg) {
  cfg.validate(u0.grid);
  require_contraction(spec, cfg);
  const int K = step_count(T, cfg.dt);
  const GridSpec& g = u0.grid;
  const int nn = g.num_nodes();

  Context ctx(spec, g, cfg);
  const auto segs = primitive_segments(ctx, cfg, K);
  const int smax = static_cast<int>(segs.size()) - 1;

  double floor_val = kBig;
  for (double v : u0.values)
    if (!is_sentinel(v)) floor_val = std::min(floor_val, v);
  if (is_sentinel(floor_val)) throw PreconditionError("initial data has no finite value");

  SpaceTimeTable w{g, cfg.dt, K, {}};
  w.values.resize(static_cast<std::size_t>(K + 1) * nn);
  for (int k = 0; k <= K; ++k)
    for (int x = 0; x < nn; ++x) w.at(k, x) = is_sentinel(u0[x]) ? floor_val : u0[x];

  FixedPointResult res;
  res.parent.assign(w.values.size(), {-1, -1});
  for (int sweep = 1; sweep <= cfg.picard_max_iter; ++sweep) {
    SpaceTimeTable v{g, cfg.dt, K, std::vector<double>(w.values.size(), kBig)};
    std::copy(u0.values.begin(), u0.values.end(), v.values.begin());
    std::vector<std::pair<int, int>> parent(w.values.size(), {-1, -1});
    std::string err;

    for (int k = 1; k <= K; ++k) {
#pragma omp parallel for schedule(static)
      for (int x = 0; x < nn; ++x) {
        try {
          double best = kBig;
          std::pair<int, int> bp{-1, -1};
          for (int s = 1; s <= std::min(k, smax); ++s) {
            const int j = k - s;
            for (const Segment& seg : segs[s]) {
              const int y = ctx.start_node(x, seg.disp);
              if (y < 0) continue;
              const double vy = v.at(j, y);
              if (is_sentinel(vy)) continue;
              const double c = vy + ctx.segment_cost(seg, x, k, w, w.at(j, y));
              if (c < best) {
                best = c;
                bp = {j, y};
              }
            }
          }
          v.at(k, x) = best;
          parent[static_cast<std::size_t>(k) * nn + x] = bp;
        } catch (const Error& e) {
#pragma omp critical(chj_fixed_point_error)
          if (err.empty()) err = e.what();
        }
      }
      if (!err.empty()) throw NumericalError(err);
    }

    double resid = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (is_sentinel(v.values[i]) || is_sentinel(w.values[i])) continue;
      resid = std::max(resid, std::abs(v.values[i] - w.values[i]));
    }
    res.residuals.push_back(resid);
    res.sweeps = sweep;
    w = std::move(v);
    res.parent = std::move(parent);
    if (resid < cfg.picard_tol) {
      res.table = std::move(w);
      return res;
    }
  }
  throw ConvergenceError("fixed point did not converge in " + std::to_string(cfg.picard_max_iter) +
                             " sweeps (residual " + std::to_string(res.residuals.back()) + ")",
                         res.residuals.back());
}

FixedPointResult implicit_action(const HamiltonianSpec& spec, std::span<const double> x0,
                                 double u0_val, double T, const GridSpec& grid,
                                 const SemigroupConfig& cfg) {
  grid.validate();
  const int src = grid.find_node(x0);
  if (src < 0) throw PreconditionError("x0 must be a grid node");
  if (!std::isfinite(u0_val) || is_sentinel(u0_val))
    throw PreconditionError("source value must be finite");
  std::vector<double> init(grid.num_nodes(), kBig);
  init[src] = u0_val;
  return fixed_point_A(spec, GridFunction(grid, std::move(init)), T, cfg);
}

std::vector<CurvePoint> optimal_curve(const FixedPointResult& fp, int k, int node) {
  const int nn = fp.table.grid.num_nodes();
  if (k < 0 || k > fp.table.steps || node < 0 || node >= nn)
    throw PreconditionError("curve end point lies outside the table");
  if (is_sentinel(fp.table.at(k, node)))
    throw PreconditionError("curve end point is unreachable");
  std::vector<CurvePoint> out{{k, node}};
  while (k > 0) {
    const auto [j, y] = fp.parent[static_cast<std::size_t>(k) * nn + node];
    if (j < 0) throw NumericalError("broken backpointer chain");
    k = j;
    node = y;
    out.push_back({k, node});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double check_variational_inequality(const HamiltonianSpec& spec, const SpaceTimeTable& sol,
                                    const std::vector<CurvePoint>& curve,
                                    const SemigroupConfig& cfg) {
  const GridSpec& g = sol.grid;
  SemigroupConfig c = cfg;
  c.dt = sol.dt;
  c.validate(g);
  if (!spec.admissible())
    throw PreconditionError(spec.name + " must be convex and superlinear in p");
  const int nn = g.num_nodes();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto [k, node] = curve[i];
    if (k < 0 || k > sol.steps || node < 0 || node >= nn)
      throw PreconditionError("curve leaves the grid");
    if (i > 0 && k <= curve[i - 1].first)
      throw PreconditionError("curve time indices must increase");
    if (is_sentinel(sol.at(k, node))) throw PreconditionError("curve visits an unreachable node");
  }
  if (curve.size() < 2) return -std::numeric_limits<double>::infinity();

  Context ctx(spec, g, c);
  std::vector<double> prefix(curve.size(), 0.0);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [k1, n1] = curve[i - 1];
    const auto [k2, n2] = curve[i];
    const auto a1 = g.axis_index(n1), a2 = g.axis_index(n2);
    std::array<int, kMaxDim> disp{};
    for (int a = 0; a < g.dim; ++a) {
      int dd = a2[a] - a1[a];
      if (g.boundary == Boundary::kPeriodic) {
        dd %= g.n;
        if (dd > g.n / 2) dd -= g.n;
        if (dd < -(g.n / 2)) dd += g.n;
      }
      disp[a] = dd;
    }
    const Segment seg = ctx.make_segment(k2 - k1, disp);
    prefix[i] = prefix[i - 1] + ctx.segment_cost(seg, n2, k2, sol, sol.at(k1, n1));
  }

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < curve.size(); ++a)
    for (std::size_t b = a + 1; b < curve.size(); ++b) {
      const double ua = sol.at(curve[a].first, curve[a].second);
      const double ub = sol.at(curve[b].first, curve[b].second);
      worst = std::max(worst, ub - ua - (prefix[b] - prefix[a]));
    }
  return worst;
}

}  // namespace chj
