#include "chj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace chj {

void OracleConfig::validate() const {
  if (K < 1) throw PreconditionError("K must be at least 1");
  if (picard_rounds < 1) throw PreconditionError("picard_rounds must be at least 1");
  if (velocities.empty() || std::find(velocities.begin(), velocities.end(), 0.0) == velocities.end())
    throw PreconditionError("velocity list must contain 0");
  double size = 1.0;
  for (int i = 0; i < K; ++i) size *= static_cast<double>(velocities.size());
  if (size > 1e7) throw PreconditionError("enumeration budget exceeded (|V|^K > 1e7)");
}

double oracle_conjugate(const HamiltonianSpec& spec, double x, double q, double u) {
  if (!spec.flags.superlinear_in_p)
    throw PreconditionError("oracle conjugate needs a superlinear hamiltonian");
  auto g = [&](double p) {
    const double h = spec.eval(std::span<const double>(&x, 1), std::span<const double>(&p, 1), u);
    if (!std::isfinite(h)) throw NumericalError("hamiltonian overflow in oracle");
    return q * p - h;
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (double half = 8.0; half <= 1e4; half *= 4.0) {
    double a = -half, b = half;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + half); ++it) {
      if (gc > gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = g(d);
      }
    }
    const double p = 0.5 * (a + b);
    if (std::abs(p) < 0.9 * half) return g(p);
  }
  throw NumericalError("oracle conjugate did not stay bounded");
}

namespace {

double sample_u0(const GridFunction& u0, double z) {
  const GridSpec& g = u0.grid;
  const double h = g.spacing();
  double s = (z + g.half_width) / h;
  if (g.boundary == Boundary::kPeriodic) {
    s -= g.n * std::floor(s / g.n);
    const int i = std::min(static_cast<int>(std::floor(s)), g.n - 1);
    const double th = s - i;
    return (1.0 - th) * u0.values[i] + th * u0.values[(i + 1) % g.n];
  }
  if (s <= 0.0) return u0.values.front();
  if (s >= g.n - 1) return u0.values.back();
  const int i = static_cast<int>(std::floor(s));
  const double th = s - i;
  return th == 0.0 ? u0.values[i] : (1.0 - th) * u0.values[i] + th * u0.values[i + 1];
}

class Enumerator {
 public:
  Enumerator(const HamiltonianSpec& spec, const GridFunction& u0, double tau,
             const std::vector<double>& vels)
      : spec_(spec), u0_(u0), tau_(tau), vels_(vels) {}

  /// Optimal cost with `steps` sub-steps ending at z, running cost frozen at
  /// round r - 1. Round 0 is u0 at every time.
  double value(int r, double z, int steps) {
    if (r == 0 || steps == 0) return sample_u0(u0_, z);
    const auto key = std::make_tuple(r, steps, quantize(z));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double best = kBig;
    for (std::size_t k = 0; k < vels_.size(); ++k) {
      const double y = z - vels_[k] * tau_;
      best = std::min(best, value(r, y, steps - 1) + step_cost(r, y, steps - 1, k));
    }
    memo_[key] = best;
    return best;
  }

  /// Literal enumeration of all |V|^K paths ending at x.
  double enumerate(int r, double x, int K, long long* count) {
    double best = kBig;
    dfs(r, x, K, 0.0, best, count);
    return best;
  }

 private:
  static long long quantize(double z) { return std::llround(z * 1e9); }

  /// tau * H*(y, v_k, w(y, s)) where y is the left end at sub-step index s.
  double step_cost(int r, double y, int s, std::size_t k) {
    const auto key = std::make_tuple(r, s, quantize(y), static_cast<int>(k));
    if (auto it = cost_.find(key); it != cost_.end()) return it->second;
    const double w = value(r - 1, y, s);
    const double c = tau_ * oracle_conjugate(spec_, y, vels_[k], w);
    cost_[key] = c;
    return c;
  }

  void dfs(int r, double z, int steps, double acc, double& best, long long* count) {
    if (steps == 0) {
      best = std::min(best, acc + sample_u0(u0_, z));
      if (count) ++*count;
      return;
    }
    for (std::size_t k = 0; k < vels_.size(); ++k) {
      const double y = z - vels_[k] * tau_;
      dfs(r, y, steps - 1, acc + step_cost(r, y, steps - 1, k), best, count);
    }
  }

  const HamiltonianSpec& spec_;
  const GridFunction& u0_;
  double tau_;
  std::vector<double> vels_;
  std::map<std::tuple<int, int, long long>, double> memo_;
  std::map<std::tuple<int, int, long long, int>, double> cost_;
};

}  // namespace

OracleResult brute_force_value(const HamiltonianSpec& spec, const GridFunction& u0, double x,
                               double t, const OracleConfig& ocfg) {
  ocfg.validate();
  if (u0.grid.dim != 1) throw PreconditionError("oracle is 1-D only");
  if (!(t > 0.0)) throw PreconditionError("oracle needs t > 0");
  if (!spec.admissible())
    throw PreconditionError(spec.name + " must be convex and superlinear in p");
  for (double v : u0.values)
    if (is_sentinel(v)) throw PreconditionError("oracle initial data must be finite");

  Enumerator en(spec, u0, t / ocfg.K, ocfg.velocities);
  OracleResult res;
  const int last = ocfg.picard_rounds;
  res.value = en.enumerate(last, x, ocfg.K, &res.curves);
  const double prev = last > 1 ? en.value(last - 1, x, ocfg.K) : res.value;
  res.last_change = std::abs(res.value - prev);
  res.converged = res.last_change <= 1e-6;
  return res;
}

}  // namespace chj
