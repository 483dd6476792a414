#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chj/common.hpp"

namespace chj {

using ScalarField =
    std::function<double(std::span<const double> x, std::span<const double> p, double u)>;
using VectorField = std::function<void(std::span<const double> x, std::span<const double> p,
                                       double u, std::span<double> out)>;

/// Structural assumptions a Hamiltonian declares about itself.
///
/// `u_additive` means H(x,p,u) - H(x,0,u) does not depend on u, and
/// `x_additive` means H(x,p,u) - H(x,0,u) does not depend on x. Together they
/// let the Lagrangian be tabulated once in the velocity alone.
struct HamiltonianFlags {
  bool convex_in_p = false;
  bool superlinear_in_p = false;
  bool u_independent = false;
  bool u_additive = false;
  bool x_additive = false;
};

/// A contact Hamiltonian H(x, p, u) on R^d x R^d x R with optional analytic
/// first derivatives. Immutable once built; all members are pure.
struct HamiltonianSpec {
  std::string name;
  ScalarField eval;
  VectorField grad_x;  // optional
  VectorField grad_p;  // optional
  ScalarField grad_u;  // optional
  double u_lipschitz = 0.0;  // bound on |dH/du|, doubles as the Gronwall rate
  HamiltonianFlags flags;

  bool has_analytic_gradients() const {
    return static_cast<bool>(grad_x) && static_cast<bool>(grad_p) && static_cast<bool>(grad_u);
  }
  /// Eligible for the Lax-Oleinik machinery (convex and superlinear in p).
  bool admissible() const { return flags.convex_in_p && flags.superlinear_in_p; }
};

struct Gradients {
  Coord dx{};
  Coord dp{};
  double du = 0.0;
  int dim = 1;
};

inline constexpr double kDefaultFdStep = 1e-5;

/// H(x, p, u). Throws NumericalError("hamiltonian overflow at ...") when the
/// value is not finite.
double eval_hamiltonian(const HamiltonianSpec& spec, std::span<const double> x,
                        std::span<const double> p, double u);

/// (D_x H, D_p H, dH/du): analytic when the spec carries all three,
/// otherwise central differences with step `fd_step` in every coordinate.
Gradients eval_gradients(const HamiltonianSpec& spec, std::span<const double> x,
                         std::span<const double> p, double u, double fd_step = kDefaultFdStep);

/// Same as eval_gradients but always by central differences.
Gradients fd_gradients(const HamiltonianSpec& spec, std::span<const double> x,
                       std::span<const double> p, double u, double fd_step = kDefaultFdStep);

struct ComposeOptions {
  /// Caller asserts f is increasing and convex on the range of H.
  bool increasing_convex = false;
  /// |f'| bound on the range of H times the base constant; negative means
  /// "use the base u_lipschitz unchanged".
  double u_lipschitz = -1.0;
  std::string label = "f";
};

/// f o H with chain-rule derivatives when both f' and the spec's analytic
/// derivatives exist.
HamiltonianSpec compose_scalar(const HamiltonianSpec& spec, std::function<double(double)> f,
                               std::function<double(double)> f_prime = {},
                               const ComposeOptions& opts = {});

/// k * H.
HamiltonianSpec scale(const HamiltonianSpec& spec, double k);

/// H + c.
HamiltonianSpec shift(const HamiltonianSpec& spec, double c);

/// sum_i c_i H_i. Empty input or all-zero coefficients give the zero
/// Hamiltonian, which is flagged inadmissible.
HamiltonianSpec linear_combination(const std::vector<std::pair<double, HamiltonianSpec>>& terms);

// ---- catalog ---------------------------------------------------------------

HamiltonianSpec make_quadratic();
HamiltonianSpec make_quadratic_potential();
HamiltonianSpec make_discount(double alpha);
/// |p|^2/2 + alpha u + sum_i (1 - cos x_i)
HamiltonianSpec make_contact(double alpha);
/// a(x)|p| + sin u with a(x) = a0 + a1 sin(x_1).
HamiltonianSpec make_eikonal_sine(double a0, double a1);
HamiltonianSpec make_momentum_coordinate();  // p_1
HamiltonianSpec make_position_coordinate();  // x_1
HamiltonianSpec make_value_coordinate();     // u

/// Named entries: quadratic, quadratic_potential, discount(alpha=1),
/// contact(alpha=1), shifted and scaled variants, eikonal_sine, p1, x1, u.
std::vector<HamiltonianSpec> builtin_catalog();

/// Resolves a selector of the form `[k*]name[(key=value,...)][+c|-c]`,
/// e.g. "discount(alpha=1)", "2*contact", "discount(alpha=0.5)+1".
/// Throws PreconditionError on unknown names or keys.
HamiltonianSpec hamiltonian_from_selector(std::string_view selector);

}  // namespace chj
