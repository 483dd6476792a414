#include "chj/grid.hpp"

#include <cmath>

namespace chj {

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::kPeriodic;
  if (s == "clamped") return Boundary::kClamped;
  throw PreconditionError("boundary must be 'periodic' or 'clamped', got '" + s + "'");
}

const char* to_string(Boundary b) { return b == Boundary::kPeriodic ? "periodic" : "clamped"; }

void GridSpec::validate() const {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("grid dimension must be 1 or 2");
  if (n < 3) throw PreconditionError("n must be at least 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw PreconditionError("L must be positive and finite");
}

double GridSpec::spacing() const {
  return boundary == Boundary::kPeriodic ? 2.0 * half_width / n : 2.0 * half_width / (n - 1);
}

std::array<int, kMaxDim> GridSpec::axis_index(int flat) const {
  if (dim == 1) return {flat, 0};
  return {flat / n, flat % n};
}

Coord GridSpec::node(int flat) const {
  const auto idx = axis_index(flat);
  Coord c{};
  for (int a = 0; a < dim; ++a) c[a] = axis_coord(idx[a]);
  return c;
}

int GridSpec::find_node(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim)) return -1;
  std::array<int, kMaxDim> idx{};
  const double h = spacing();
  for (int a = 0; a < dim; ++a) {
    const double s = (x[a] + half_width) / h;
    const long k = std::lround(s);
    if (std::abs(s - k) > 1e-9 || k < 0 || k >= n) return -1;
    idx[a] = static_cast<int>(k);
  }
  return flat(idx);
}

namespace {

struct AxisWeights {
  int lo, hi;
  double w_lo, w_hi;
};

AxisWeights axis_weights(const GridSpec& g, int i, double shift) {
  if (shift == 0.0) return {i, i, 1.0, 0.0};
  double s = i - shift;
  if (g.boundary == Boundary::kClamped) {
    if (s <= 0.0) return {0, 0, 1.0, 0.0};
    if (s >= g.n - 1) return {g.n - 1, g.n - 1, 1.0, 0.0};
    const double k = std::floor(s);
    const double th = s - k;
    const int lo = static_cast<int>(k);
    if (th == 0.0) return {lo, lo, 1.0, 0.0};
    return {lo, lo + 1, 1.0 - th, th};
  }
  const double k = std::floor(s);
  const double th = s - k;
  int lo = static_cast<int>(static_cast<long>(k) % g.n);
  if (lo < 0) lo += g.n;
  if (th == 0.0) return {lo, lo, 1.0, 0.0};
  return {lo, (lo + 1) % g.n, 1.0 - th, th};
}

}  // namespace

Stencil locate(const GridSpec& g, int node, std::span<const double> shift) {
  const auto idx = g.axis_index(node);
  Stencil st;
  if (g.dim == 1) {
    const auto a = axis_weights(g, idx[0], shift[0]);
    st.idx[0] = a.lo;
    st.w[0] = a.w_lo;
    st.count = 1;
    if (a.w_hi != 0.0) {
      st.idx[1] = a.hi;
      st.w[1] = a.w_hi;
      st.count = 2;
    }
    return st;
  }
  const auto a = axis_weights(g, idx[0], shift[0]);
  const auto b = axis_weights(g, idx[1], shift[1]);
  const int ia[2] = {a.lo, a.hi};
  const double wa[2] = {a.w_lo, a.w_hi};
  const int ib[2] = {b.lo, b.hi};
  const double wb[2] = {b.w_lo, b.w_hi};
  for (int r = 0; r < 2; ++r) {
    if (wa[r] == 0.0) continue;
    for (int c = 0; c < 2; ++c) {
      if (wb[c] == 0.0) continue;
      st.idx[st.count] = ia[r] * g.n + ib[c];
      st.w[st.count] = wa[r] * wb[c];
      ++st.count;
    }
  }
  return st;
}

double interpolate(std::span<const double> values, const Stencil& s) {
  double acc = 0.0;
  for (int k = 0; k < s.count; ++k) {
    const double v = values[s.idx[k]];
    if (is_sentinel(v)) return kBig;
    acc += s.w[k] * v;
  }
  return acc;
}

double interpolate_finite(std::span<const double> values, const Stencil& s) {
  double acc = 0.0, wsum = 0.0;
  for (int k = 0; k < s.count; ++k) {
    const double v = values[s.idx[k]];
    if (is_sentinel(v)) continue;
    acc += s.w[k] * v;
    wsum += s.w[k];
  }
  if (wsum == 0.0) return kBig;
  return wsum == 1.0 ? acc : acc / wsum;
}

double lipschitz_estimate(const GridSpec& g, std::span<const double> values) {
  const double h = g.spacing();
  double lip = 0.0;
  auto pair = [&](int a, int b) {
    if (is_sentinel(values[a]) || is_sentinel(values[b])) return;
    lip = std::max(lip, std::abs(values[a] - values[b]) / h);
  };
  const bool wrap = g.boundary == Boundary::kPeriodic;
  for (int k = 0; k < g.num_nodes(); ++k) {
    const auto idx = g.axis_index(k);
    for (int a = 0; a < g.dim; ++a) {
      auto nb = idx;
      if (idx[a] + 1 < g.n) {
        nb[a] = idx[a] + 1;
      } else if (wrap) {
        nb[a] = 0;
      } else {
        continue;
      }
      pair(k, g.flat(nb));
    }
  }
  return lip;
}

GridFunction::GridFunction(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.num_nodes()))
    throw PreconditionError("grid function size does not match its grid");
  for (double x : values)
    if (!std::isfinite(x)) throw NumericalError("grid function holds a non-finite value");
  refresh_lip();
}

double sup_distance(const GridFunction& a, const GridFunction& b, const std::vector<char>& mask) {
  if (!(a.grid == b.grid)) throw PreconditionError("grid functions live on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
  }
  return d;
}

std::vector<char> core_mask(const GridSpec& g, double radius) {
  std::vector<char> m(g.num_nodes(), 0);
  for (int k = 0; k < g.num_nodes(); ++k) {
    const Coord c = g.node(k);
    bool in = true;
    for (int a = 0; a < g.dim; ++a) in = in && std::abs(c[a]) <= radius + 1e-12;
    m[k] = in ? 1 : 0;
  }
  return m;
}

}  // namespace chj
