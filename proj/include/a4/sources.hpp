#pragma once

#include <string>
#include <variant>
#include <vector>

#include "a4/field.hpp"

namespace a4 {

/// Switching window w(t): 0 before t_on, rises to 1 over t_rise, holds for
/// t_hold, falls back to 0 over t_fall. The ramps use the quintic smootherstep
/// 10u^3 - 15u^4 + 6u^5, which is C2, so centred time differences of anything
/// proportional to w stay second-order accurate.
struct RampWindow {
  double t_on = 0.0;
  double t_rise = 1.0;
  double t_hold = 0.0;
  double t_fall = 1.0;

  double value(double t) const;
  double rate(double t) const;
  /// Integral of w over all time: t_hold + (t_rise + t_fall) / 2.
  double integral() const { return t_hold + 0.5 * (t_rise + t_fall); }
  double end() const { return t_on + t_rise + t_hold + t_fall; }

  friend bool operator==(const RampWindow&, const RampWindow&) = default;
};

/// rho = q (2 pi sigma^2)^{-3/2} exp(-|x - center|^2 / 2 sigma^2), j = 0.
struct StaticGaussianCharge {
  double q = 1.0;
  double sigma = 1.0;
  Vec3 center{};
  friend bool operator==(const StaticGaussianCharge&, const StaticGaussianCharge&) = default;
};

/// The static Gaussian translated to start + velocity t, with convective current rho v.
struct UniformlyMovingCharge {
  double q = 1.0;
  double sigma = 1.0;
  Vec3 start{};
  Vec3 velocity{};
  friend bool operator==(const UniformlyMovingCharge&, const UniformlyMovingCharge&) = default;
};

/// Smoothed point dipole p(t) = moment sin(omega t):
/// rho = -p . grad g, j = dp/dt g. Continuity holds pointwise.
struct OscillatingDipole {
  Vec3 moment{0.0, 0.0, 1.0};
  double omega = 1.0;
  double sigma = 1.0;
  Vec3 center{};
  friend bool operator==(const OscillatingDipole&, const OscillatingDipole&) = default;
};

/// Azimuthal surface current K (current per unit length) on a cylinder of radius
/// R and length L, smeared radially and axially by Gaussians of width shell_width.
/// shell_width <= 0 selects 2h of the evaluation grid.
struct FiniteSolenoid {
  Vec3 center{};
  Vec3 axis{0.0, 0.0, 1.0};
  double radius = 4.0;
  double length = 8.0;
  double surface_current = 1.0;
  double shell_width = 0.0;
  friend bool operator==(const FiniteSolenoid&, const FiniteSolenoid&) = default;
};

/// Charge q moved from x_minus to x_plus through a smeared line current while
/// the window is on: rho = q w(t) [g(x - x_plus) - g(x - x_minus)], j = q w'(t) T(x).
struct ChargeTransferPulse {
  double q = 1.0;
  double sigma = 1.0;
  Vec3 x_minus{};
  Vec3 x_plus{};
  RampWindow window{};
  friend bool operator==(const ChargeTransferPulse&, const ChargeTransferPulse&) = default;
};

using SourceModel =
    std::variant<StaticGaussianCharge, UniformlyMovingCharge, OscillatingDipole, FiniteSolenoid, ChargeTransferPulse>;

std::string source_type_name(const SourceModel& s);

/// Gaussian tails are cut at this many widths.
inline constexpr double kGaussianCutoff = 6.0;

/// Checks resolvability, subluminality and geometry against the grid.
/// Throws ConfigError naming the violated condition.
void validate_source(const SourceModel& s, const GridSpec& grid, const PhysicalConstants& k);

/// Samples (rho, j) at time t. Throws ConfigError when the support touches an
/// absorbing face at that time.
FourCurrentField eval(const SourceModel& s, double t, const GridSpec& grid);
FourCurrentField eval(const std::vector<SourceModel>& sources, double t, const GridSpec& grid);

/// (rho(t + dt) - rho(t - dt)) / 2 dt + div j(t) on the lattice.
ScalarField continuity_residual(const SourceModel& s, double t, double dt, const GridSpec& grid);

/// The smeared line current carrying I(t) = q w'(t) from x_minus to x_plus.
/// Requires |x_plus - x_minus| >= 6 sigma.
VectorField transfer_tube_current(const Vec3& x_minus, const Vec3& x_plus, const RampWindow& w, double q,
                                  double sigma, double t, const GridSpec& grid);

/// Static azimuthal current of a finite solenoid. Requires R >= 4h, L >= 8h and
/// the smeared cylinder inside the grid.
VectorField solenoid_current(const FiniteSolenoid& s, const GridSpec& grid);

/// Lattice sum of rho h^3.
double total_charge(const ScalarField& rho);

}  // namespace a4
