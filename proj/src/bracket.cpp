#include "chj/bracket.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <random>

namespace chj {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kCommuting:
      return "commuting";
    case Verdict::kOneSidedLe:
      return "one_sided_le";
    case Verdict::kOneSidedGe:
      return "one_sided_ge";
    case Verdict::kNone:
      break;
  }
  return "none";
}

double jacobi_bracket(const HamiltonianSpec& H, const HamiltonianSpec& F,
                      std::span<const double> x, std::span<const double> p, double u,
                      double fd_step) {
  const Gradients gh = eval_gradients(H, x, p, u, fd_step);
  const Gradients gf = eval_gradients(F, x, p, u, fd_step);
  const double h = eval_hamiltonian(H, x, p, u);
  const double f = eval_hamiltonian(F, x, p, u);
  const int d = static_cast<int>(x.size());

  double t1 = 0.0, t2 = 0.0, pf = 0.0, ph = 0.0;
  for (int i = 0; i < d; ++i) {
    t1 += gh.dx[i] * gf.dp[i];
    t2 += gh.dp[i] * gf.dx[i];
    pf += p[i] * gf.dp[i];
    ph += p[i] * gh.dp[i];
  }
  const double t3 = pf * gh.du;
  const double t4 = ph * gf.du;
  const double t5 = gf.du * h;
  const double t6 = gh.du * f;
  return ((t1 - t2) + (t3 - t4)) + (t5 - t6);
}

namespace {

Range parse_range(std::string_view s, std::string_view key) {
  const auto colon = s.find(':', 1);
  auto num = [&](std::string_view t) {
    double v = 0.0;
    const char* b = t.data();
    if (!t.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
      throw PreconditionError("box: bad range for " + std::string(key));
    return v;
  };
  if (colon == std::string_view::npos)
    throw PreconditionError("box: range for " + std::string(key) + " must be lo:hi");
  Range r{num(s.substr(0, colon)), num(s.substr(colon + 1))};
  if (!(r.lo <= r.hi)) throw PreconditionError("box: empty range for " + std::string(key));
  return r;
}

}  // namespace

PhaseBox parse_box(const std::string& text, int dim) {
  PhaseBox box;
  box.dim = dim;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw PreconditionError("box: expected key=lo:hi");
    const std::string_view key = item.substr(0, eq);
    const Range r = parse_range(item.substr(eq + 1), key);
    if (key == "x") {
      box.x = r;
    } else if (key == "p") {
      box.p = r;
    } else if (key == "u") {
      box.u = r;
    } else {
      throw PreconditionError("box: unknown key '" + std::string(key) + "'");
    }
  }
  return box;
}

BracketReport bracket_scan(const HamiltonianSpec& H, const HamiltonianSpec& F, const PhaseBox& box,
                           const ScanOptions& opts) {
  const int d = box.dim;
  if (d < 1 || d > kMaxDim) throw PreconditionError("box dimension must be 1 or 2");
  if (opts.samples_per_axis < 2) throw PreconditionError("samples_per_axis must be at least 2");
  for (const Range& r : {box.x, box.p, box.u})
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
      throw PreconditionError("box must be finite");

  const int m = opts.samples_per_axis;
  const int axes = 2 * d + 1;
  long lattice = 1;
  for (int a = 0; a < axes; ++a) lattice *= m;
  const long total = lattice + kBracketRandomPoints;

  std::vector<BracketSample> pts(total);
  auto at = [m](const Range& r, int i) { return r.lo + (r.hi - r.lo) * i / (m - 1); };
  for (long k = 0; k < lattice; ++k) {
    long rem = k;
    int idx[2 * kMaxDim + 1];
    for (int a = axes - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % m);
      rem /= m;
    }
    BracketSample& s = pts[k];
    for (int a = 0; a < d; ++a) {
      s.x[a] = at(box.x, idx[a]);
      s.p[a] = at(box.p, idx[d + a]);
    }
    s.u = at(box.u, idx[2 * d]);
  }
  std::mt19937_64 rng(opts.seed);
  auto draw = [&rng](const Range& r) {
    const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return r.lo + (r.hi - r.lo) * t;
  };
  for (long k = lattice; k < total; ++k) {
    BracketSample& s = pts[k];
    for (int a = 0; a < d; ++a) s.x[a] = draw(box.x);
    for (int a = 0; a < d; ++a) s.p[a] = draw(box.p);
    s.u = draw(box.u);
  }

  std::string err;
  const bool capped = std::isfinite(opts.dx_cap);
  long hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (long k = 0; k < total; ++k) {
    BracketSample& s = pts[k];
    try {
      const std::span<const double> xs(s.x.data(), d), ps(s.p.data(), d);
      s.value = jacobi_bracket(H, F, xs, ps, s.u);
      if (capped) {
        const Gradients gh = eval_gradients(H, xs, ps, s.u), gf = eval_gradients(F, xs, ps, s.u);
        double dx = 0.0;
        for (int a = 0; a < d; ++a) dx = std::max({dx, std::abs(gh.dx[a]), std::abs(gf.dx[a])});
        if (dx > opts.dx_cap) ++hits;
      }
    } catch (const Error& e) {
#pragma omp critical(chj_bracket_error)
      if (err.empty()) err = e.what();
    }
  }
  if (!err.empty()) throw NumericalError(err);

  BracketReport rep;
  rep.samples = total;
  rep.dx_cap_hits = hits;
  rep.seed = opts.seed;
  const bool analytic = H.has_analytic_gradients() && F.has_analytic_gradients();
  rep.tolerance = opts.tolerance > 0.0 ? opts.tolerance : (analytic ? 1e-7 : 1e-4);
  rep.arg_extreme = pts.front();
  for (const BracketSample& s : pts) {
    if (std::abs(s.value) > rep.max_abs) {
      rep.max_abs = std::abs(s.value);
      rep.arg_extreme = s;
    }
    rep.max_pos = std::max(rep.max_pos, s.value);
    rep.min_neg = std::min(rep.min_neg, s.value);
  }

  const double tol = rep.tolerance;
  const bool semigroups = H.admissible() && F.admissible();
  if (rep.max_abs <= tol) {
    rep.verdict = Verdict::kCommuting;
  } else if (semigroups && rep.max_pos <= tol) {
    rep.verdict = Verdict::kOneSidedLe;
  } else if (semigroups && -rep.min_neg <= tol) {
    rep.verdict = Verdict::kOneSidedGe;
  } else {
    rep.verdict = Verdict::kNone;
  }
  if (opts.keep_rows) rep.rows = std::move(pts);
  return rep;
}

}  // namespace chj
