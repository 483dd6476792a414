#pragma once

#include <span>
#include <vector>

#include "chj/grid.hpp"
#include "chj/hamiltonian.hpp"
#include "chj/transform.hpp"

namespace chj {

/// How H*(x, q, u) is produced for the candidate velocities of a run.
enum class LagrangianMode {
  kVelocityOnly,  // u_additive and x_additive: H* = K*(q) - H(x,0,u)
  kPerNode,       // u_additive only: one conjugate row per grid node
  kDirect,        // anything else: a fresh discrete transform per query
};

/// H* evaluated at grid nodes for the velocities of `velocities`, with the
/// sup taken over `momenta`. Tables are filled once at construction; lookups
/// are read-only and safe from any number of threads.
class LagrangianTable {
 public:
  LagrangianTable(const HamiltonianSpec& spec, const GridSpec& grid,
                  const VelocityGrid& velocities, const VelocityGrid& momenta);

  LagrangianMode mode() const { return mode_; }

  /// H*(x_node, q_j, u).
  double operator()(int node, int q_index, double u) const;
  /// H* at an arbitrary point and velocity (any mode).
  ConjugateValue at(std::span<const double> x, std::span<const double> q, double u) const;
  /// Whether the sup behind table entry (node, q_index) is interior.
  bool interior(int node, int q_index, double u) const;

  /// H*(x, q, 0) + H(x, 0, 0); the u-free part of the Lagrangian in the
  /// additive modes.
  double base_at(std::span<const double> x, std::span<const double> q, bool* interior) const;
  /// H(x, 0, u), subtracted from base_at in the additive modes.
  double value_shift(std::span<const double> x, double u) const;

  const HamiltonianSpec& spec() const { return *spec_; }
  const VelocityGrid& momenta() const { return momenta_; }

 private:
  const HamiltonianSpec* spec_;
  GridSpec grid_;
  VelocityGrid velocities_;
  VelocityGrid momenta_;
  LagrangianMode mode_;
  std::vector<double> base_;         // [node?][q]
  std::vector<char> base_interior_;  // same layout
  std::vector<double> shift0_;       // H(x_node, 0, 0), used when u_independent
  std::vector<Coord> nodes_;
};

/// Momentum grid used inside H* when none is given: twice the velocity range
/// at half the spacing.
VelocityGrid default_momentum_grid(const VelocityGrid& velocities);

}  // namespace chj
