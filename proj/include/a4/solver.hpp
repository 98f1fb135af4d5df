#pragma once

#include "a4/field.hpp"

namespace a4 {

/// How face nodes are advanced.
///  - periodic: every node is interior (wrap-around stencils).
///  - mur_first_order: first-order Mur radiating update on absorbing faces.
///  - far_field: Dirichlet faces holding the monopole far field Q / |x - x_c| of
///    each component's source. Only meaningful for relaxation to a static solution.
enum class BoundaryKind { periodic, mur_first_order, far_field };

BoundaryKind default_boundary(const GridSpec& g);

/// Leapfrog state for the four independent wave equations
///   (1/c^2) d^2 phi/dt^2 - lap phi = 4 pi rho,   (1/c^2) d^2 A/dt^2 - lap A = 4 pi j / c.
struct SolverState {
  FourPotentialField prev;
  FourPotentialField now;
  long step_index = 0;
  GridSpec grid;
  PhysicalConstants constants;
  BoundaryKind boundary = BoundaryKind::periodic;
  /// Relaxation friction gamma (1/time). Zero for physics runs.
  double damping = 0.0;
};

/// Friction used by relaxation-to-static runs: 2 pi c / L with L the largest domain extent.
double relaxation_damping(const GridSpec& g, const PhysicalConstants& k);

/// Builds the leapfrog pair from Cauchy data. `rate` holds the time derivatives
/// of every component; `source` is the current at t = value.time. The back level
/// is a Taylor step using the wave equation for the second derivative.
SolverState init_state(const GridSpec& grid, const FourPotentialField& value, const FourPotentialField& rate,
                       const FourCurrentField& source, const PhysicalConstants& constants,
                       BoundaryKind boundary, double damping = 0.0);

/// Advances one step with the current sampled at state.now.time. Throws
/// DivergenceError when any new value is non-finite or exceeds the runaway threshold.
SolverState step(SolverState state, const FourCurrentField& current);

/// Values larger than this (grid units) abort a run.
inline constexpr double kDivergenceThreshold = 1e12;

/// Coefficient multiplying the source of component mu: 4 pi for phi, 4 pi / c for A.
inline double source_factor(int mu, double c) { return mu == 0 ? 4.0 * 3.14159265358979323846 : 4.0 * 3.14159265358979323846 / c; }

inline const ScalarField& source_component(const FourCurrentField& j, int mu) { return mu == 0 ? j.rho : j.j[mu - 1]; }

}  // namespace a4
