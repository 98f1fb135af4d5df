#pragma once

#include <array>

#include "a4/field.hpp"

namespace a4 {

struct PotentialValue {
  double phi = 0.0;
  Vec3 a{};
};

/// Potential of a Gaussian charge of width sigma at distance r: (q / r) erf(r / (sqrt2 sigma)),
/// with the r -> 0 limit q sqrt(2/pi) / sigma.
double smoothed_coulomb(double q, double sigma, double r);

/// Magnitude of the radial electric field of the same charge.
double smoothed_coulomb_field(double q, double sigma, double r);

/// Potentials of a point charge in uniform motion, x0 + v t (Lorenz gauge):
/// phi = q gamma / sqrt(gamma^2 s_par^2 + s_perp^2), A = phi v / c, with s = x - x0 - v t.
/// Throws DomainError at the charge location and for |v| >= c.
PotentialValue lienard_wiechert_uniform(double q, const Vec3& x0, const Vec3& v, const Vec3& x, double t, double c);

/// Time derivative of the uniform-motion potentials at (x, t).
PotentialValue lienard_wiechert_uniform_rate(double q, const Vec3& x0, const Vec3& v, const Vec3& x, double t,
                                             double c);

enum class PlaneWaveKind { transverse, scalar_photon, general };

/// Real homogeneous plane wave A^mu = eps^mu amplitude cos(k.x - c|k| t + phase).
class PlaneWave {
 public:
  /// eps must be perpendicular to k (and the time component is zero).
  static PlaneWave transverse(const Vec3& eps, const Vec3& k, double amplitude, double phase = 0.0);
  /// eps = (1, 0, 0, 0).
  static PlaneWave scalar_photon(const Vec3& k, double amplitude, double phase = 0.0);
  /// Any polarisation. kind == transverse rejects eps with a time component or a
  /// longitudinal part; kind == scalar_photon overrides eps.
  static PlaneWave make(PlaneWaveKind kind, const std::array<double, 4>& eps, const Vec3& k, double amplitude,
                        double phase = 0.0);

  PlaneWaveKind kind() const { return kind_; }
  const std::array<double, 4>& polarization() const { return eps_; }
  const Vec3& k() const { return k_; }
  double amplitude() const { return amplitude_; }
  double phase() const { return phase_; }
  double omega(double c) const { return c * norm(k_); }

  PotentialValue value(const Vec3& x, double t, double c) const;
  PotentialValue rate(const Vec3& x, double t, double c) const;
  /// Analytic E = -(1/c) dA/dt - grad phi and H = curl A.
  std::pair<Vec3, Vec3> fields(const Vec3& x, double t, double c) const;
  /// Analytic Lorentz residual (1/c) dphi/dt + div A.
  double lorentz_residual(const Vec3& x, double t, double c) const;

 private:
  PlaneWave(PlaneWaveKind kind, const std::array<double, 4>& eps, const Vec3& k, double amplitude, double phase);

  PlaneWaveKind kind_;
  std::array<double, 4> eps_;
  Vec3 k_;
  double amplitude_;
  double phase_;
};

/// Exterior vector potential of an infinitely thin flux tube along `axis` through
/// `axis_point`: A = flux / (2 pi r_perp) in the azimuthal direction. Throws
/// DomainError on the axis.
Vec3 solenoid_exterior(double flux, const Vec3& axis_point, const Vec3& axis, const Vec3& x);

/// Samples phi and A of an oracle at every node.
FourPotentialField sample_potential(const GridSpec& grid, double t,
                                    const std::function<PotentialValue(const Vec3&, double)>& f);

}  // namespace a4
