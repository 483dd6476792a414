#include "chj/lagrangian.hpp"

namespace chj {

VelocityGrid default_momentum_grid(const VelocityGrid& velocities) {
  VelocityGrid pg = velocities;
  // half the velocity spacing: the discrete sup undershoots H* by up to
  // H_pp * spacing^2 / 8, and every step inherits that bias downwards
  pg.v_max = 2.0 * velocities.v_max;
  pg.m = 4 * velocities.m - 3;
  return pg;
}

LagrangianTable::LagrangianTable(const HamiltonianSpec& spec, const GridSpec& grid,
                                 const VelocityGrid& velocities, const VelocityGrid& momenta)
    : spec_(&spec), grid_(grid), velocities_(velocities), momenta_(momenta) {
  grid_.validate();
  velocities_.validate();
  momenta_.validate();
  if (velocities_.dim != grid_.dim || momenta_.dim != grid_.dim)
    throw PreconditionError("velocity grids and spatial grid disagree on dimension");
  if (!spec.flags.superlinear_in_p)
    throw PreconditionError(spec.name + " is not superlinear in p");

  const int d = grid_.dim;
  nodes_.resize(grid_.num_nodes());
  for (int k = 0; k < grid_.num_nodes(); ++k) nodes_[k] = grid_.node(k);

  if (spec.flags.u_additive && spec.flags.x_additive) {
    mode_ = LagrangianMode::kVelocityOnly;
  } else if (spec.flags.u_additive) {
    mode_ = LagrangianMode::kPerNode;
  } else {
    mode_ = LagrangianMode::kDirect;
  }

  if (spec.flags.u_independent) {
    shift0_.resize(grid_.num_nodes());
    for (int k = 0; k < grid_.num_nodes(); ++k)
      shift0_[k] = value_shift(std::span<const double>(nodes_[k].data(), d), 0.0);
  }

  const int nq = velocities_.size();
  const int rows = mode_ == LagrangianMode::kVelocityOnly ? 1
                   : mode_ == LagrangianMode::kPerNode   ? grid_.num_nodes()
                                                         : 0;
  base_.assign(static_cast<std::size_t>(rows) * nq, 0.0);
  base_interior_.assign(base_.size(), 1);

  bool failed = false;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    const Coord& x = nodes_[r];
    for (int j = 0; j < nq; ++j) {
      const Coord q = velocities_.node(j);
      bool in = true;
      try {
        base_[static_cast<std::size_t>(r) * nq + j] = base_at(
            std::span<const double>(x.data(), d), std::span<const double>(q.data(), d), &in);
      } catch (const Error&) {
#pragma omp atomic write
        failed = true;
      }
      base_interior_[static_cast<std::size_t>(r) * nq + j] = in ? 1 : 0;
    }
  }
  if (failed) throw NumericalError("non-finite conjugate while tabulating " + spec.name);
}

double LagrangianTable::base_at(std::span<const double> x, std::span<const double> q,
                                bool* interior) const {
  static constexpr Coord zero{};
  const int d = static_cast<int>(x.size());
  const auto c = legendre_transform(*spec_, x, 0.0, q, momenta_);
  if (interior) *interior = c.interior;
  return c.value + eval_hamiltonian(*spec_, x, std::span<const double>(zero.data(), d), 0.0);
}

double LagrangianTable::value_shift(std::span<const double> x, double u) const {
  static constexpr Coord zero{};
  return eval_hamiltonian(*spec_, x, std::span<const double>(zero.data(), x.size()), u);
}

double LagrangianTable::operator()(int node, int q_index, double u) const {
  const int d = grid_.dim;
  const int nq = velocities_.size();
  std::span<const double> x(nodes_[node].data(), d);
  switch (mode_) {
    case LagrangianMode::kVelocityOnly:
      return base_[q_index] - (shift0_.empty() ? value_shift(x, u) : shift0_[node]);
    case LagrangianMode::kPerNode:
      return base_[static_cast<std::size_t>(node) * nq + q_index] -
             (shift0_.empty() ? value_shift(x, u) : shift0_[node]);
    case LagrangianMode::kDirect:
      break;
  }
  const Coord q = velocities_.node(q_index);
  return legendre_transform(*spec_, x, u, std::span<const double>(q.data(), d), momenta_).value;
}

ConjugateValue LagrangianTable::at(std::span<const double> x, std::span<const double> q,
                                   double u) const {
  if (mode_ == LagrangianMode::kDirect) return legendre_transform(*spec_, x, u, q, momenta_);
  ConjugateValue c;
  c.value = base_at(x, q, &c.interior) - value_shift(x, u);
  return c;
}

bool LagrangianTable::interior(int node, int q_index, double u) const {
  const int nq = velocities_.size();
  switch (mode_) {
    case LagrangianMode::kVelocityOnly:
      return base_interior_[q_index] != 0;
    case LagrangianMode::kPerNode:
      return base_interior_[static_cast<std::size_t>(node) * nq + q_index] != 0;
    case LagrangianMode::kDirect:
      break;
  }
  const int d = grid_.dim;
  const Coord q = velocities_.node(q_index);
  return legendre_transform(*spec_, std::span<const double>(nodes_[node].data(), d), u,
                            std::span<const double>(q.data(), d), momenta_)
      .interior;
}

}  // namespace chj
