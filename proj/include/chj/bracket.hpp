#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "chj/hamiltonian.hpp"

namespace chj {

enum class Verdict { kCommuting, kOneSidedLe, kOneSidedGe, kNone };

const char* to_string(Verdict v);

/// {H, F} = D_xH.D_pF - D_pH.D_xF + (p.D_pF) H_u - (p.D_pH) F_u + F_u H - H_u F,
/// grouped so that swapping H and F negates the result bit for bit.
double jacobi_bracket(const HamiltonianSpec& H, const HamiltonianSpec& F,
                      std::span<const double> x, std::span<const double> p, double u,
                      double fd_step = kDefaultFdStep);

struct Range {
  double lo = 0.0, hi = 0.0;
};

/// Phase-space box; x and p ranges apply to every coordinate.
struct PhaseBox {
  int dim = 1;
  Range x{-3.0, 3.0};
  Range p{-3.0, 3.0};
  Range u{-2.0, 2.0};
};

/// Parses "x=-3:3,p=-3:3,u=-2:2" (any subset, any order).
PhaseBox parse_box(const std::string& text, int dim = 1);

struct BracketSample {
  Coord x{}, p{};
  double u = 0.0;
  double value = 0.0;
};

inline constexpr std::uint64_t kBracketSeed = 0x5EED;
inline constexpr int kBracketRandomPoints = 1000;

struct BracketReport {
  double max_abs = 0.0;
  double max_pos = 0.0;  // max(0, largest sample)
  double min_neg = 0.0;  // min(0, smallest sample)
  BracketSample arg_extreme;
  Verdict verdict = Verdict::kCommuting;
  long samples = 0;
  double tolerance = 0.0;
  std::uint64_t seed = kBracketSeed;
  std::vector<BracketSample> rows;  // filled when requested
  long dx_cap_hits = 0;             // samples where |D_xH| or |D_xF| exceeded the cap
};

struct ScanOptions {
  int samples_per_axis = 9;
  /// <= 0 selects 1e-7 with analytic gradients on both sides, 1e-4 otherwise.
  double tolerance = 0.0;
  bool keep_rows = false;
  std::uint64_t seed = kBracketSeed;
  /// Bound assumed on |D_xH| and |D_xF| over the box; samples above it are
  /// counted, not rejected. Infinite disables the check.
  double dx_cap = std::numeric_limits<double>::infinity();
};

/// Tensor lattice over the box plus 1000 seeded uniform interior points.
///
/// One-sided verdicts are only issued when both Hamiltonians are convex and
/// superlinear in p, since they are statements about the two semigroups; a
/// pair such as (p1, x1) with a sign-definite bracket is reported as "none".
BracketReport bracket_scan(const HamiltonianSpec& H, const HamiltonianSpec& F, const PhaseBox& box,
                           const ScanOptions& opts = {});

}  // namespace chj
