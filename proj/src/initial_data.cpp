#include "chj/initial_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "chj/csv.hpp"

namespace chj {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string s) : s_(std::move(s)) {}

  bool done() const { return i_ >= s_.size(); }
  bool eat(const std::string& tok) {
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    i_ += tok.size();
    return true;
  }
  bool last_was(const std::string& tok) const {
    return i_ >= tok.size() && s_.compare(i_ - tok.size(), tok.size(), tok) == 0;
  }
  bool number(double* out) {
    if (done()) return false;
    const char c = s_[i_];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.')) return false;
    const char* b = s_.c_str() + i_;
    char* e = nullptr;
    *out = std::strtod(b, &e);
    if (e == b) return false;
    i_ += static_cast<std::size_t>(e - b);
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw PreconditionError("u0 expression: " + what + " at position " + std::to_string(i_) +
                            " of '" + s_ + "'");
  }

 private:
  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace

InitialExpression InitialExpression::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw PreconditionError("u0 expression is empty");
  Cursor c(s);
  InitialExpression e;
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    if (c.eat("+")) {
    } else if (c.eat("-")) {
      sign = -1.0;
    } else if (!first) {
      c.fail("expected + or -");
    }
    first = false;

    double coef = 1.0;
    const bool has_num = c.number(&coef);
    if (has_num && !c.eat("*")) {
      e.terms_.push_back({sign * coef, Kind::kConst, 0.0});
      continue;
    }
    Term t;
    t.coef = sign * coef;
    if (c.eat("abs(x)")) {
      t.kind = Kind::kAbs;
    } else if (c.eat("x^2")) {
      t.kind = Kind::kSquare;
    } else if (c.eat("x")) {
      t.kind = Kind::kLinear;
    } else if (c.eat("cos(") || c.eat("sin(")) {
      t.kind = c.last_was("sin(") ? Kind::kSin : Kind::kCos;
      double k = 1.0;
      if (c.number(&k)) {
        if (!c.eat("*")) c.fail("expected '*' after frequency");
      }
      if (!c.eat("x)")) c.fail("expected x)");
      t.k = k;
    } else {
      c.fail("expected abs(x), cos(k*x), sin(k*x), x^2, x or a number");
    }
    e.terms_.push_back(t);
  }
  return e;
}

double InitialExpression::operator()(std::span<const double> x) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    if (t.kind == Kind::kConst) {
      v += t.coef;
      continue;
    }
    for (double xi : x) {
      switch (t.kind) {
        case Kind::kAbs:
          v += t.coef * std::abs(xi);
          break;
        case Kind::kCos:
          v += t.coef * std::cos(t.k * xi);
          break;
        case Kind::kSin:
          v += t.coef * std::sin(t.k * xi);
          break;
        case Kind::kSquare:
          v += t.coef * xi * xi;
          break;
        case Kind::kLinear:
          v += t.coef * xi;
          break;
        case Kind::kConst:
          break;
      }
    }
  }
  return v;
}

GridFunction sample(const GridSpec& g, const InitialExpression& e) {
  g.validate();
  std::vector<double> v(g.num_nodes());
  for (int k = 0; k < g.num_nodes(); ++k) {
    const Coord x = g.node(k);
    v[k] = e(std::span<const double>(x.data(), g.dim));
  }
  return GridFunction(g, std::move(v));
}

GridFunction load_initial_data(const std::string& spec, const GridSpec& g) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return read_grid_function(spec, g);
  return sample(g, InitialExpression::parse(spec));
}

GridFunction random_piecewise_linear(const GridSpec& g, std::uint64_t seed, int pieces, double lo,
                                     double hi) {
  g.validate();
  if (pieces < 1) throw PreconditionError("pieces must be at least 1");
  std::mt19937_64 rng(seed);
  const int knots_per_axis = pieces + 1;
  const int nknots = g.dim == 1 ? knots_per_axis : knots_per_axis * knots_per_axis;
  std::vector<double> knot(nknots);
  for (double& k : knot) k = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);

  const double step = 2.0 * g.half_width / pieces;
  auto locate_axis = [&](double x, int* i, double* th) {
    double s = (x + g.half_width) / step;
    s = std::clamp(s, 0.0, static_cast<double>(pieces));
    *i = std::min(static_cast<int>(std::floor(s)), pieces - 1);
    *th = s - *i;
  };
  std::vector<double> v(g.num_nodes());
  for (int n = 0; n < g.num_nodes(); ++n) {
    const Coord x = g.node(n);
    int i0, i1 = 0;
    double t0, t1 = 0.0;
    locate_axis(x[0], &i0, &t0);
    if (g.dim == 1) {
      v[n] = (1.0 - t0) * knot[i0] + t0 * knot[i0 + 1];
      continue;
    }
    locate_axis(x[1], &i1, &t1);
    auto K = [&](int a, int b) { return knot[a * knots_per_axis + b]; };
    v[n] = (1.0 - t0) * ((1.0 - t1) * K(i0, i1) + t1 * K(i0, i1 + 1)) +
           t0 * ((1.0 - t1) * K(i0 + 1, i1) + t1 * K(i0 + 1, i1 + 1));
  }
  return GridFunction(g, std::move(v));
}

}  // namespace chj
