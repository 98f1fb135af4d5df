#include "a4/oracles.hpp"

#include <cmath>
#include <numbers>

#include "a4/error.hpp"

namespace a4 {

namespace {
constexpr double kPi = std::numbers::pi;
}

double smoothed_coulomb(double q, double sigma, double r) {
  if (r == 0.0) return q * std::sqrt(2.0 / kPi) / sigma;
  const double x = r / (std::sqrt(2.0) * sigma);
  if (x < 1e-4) {
    // erf(x)/x = (2/sqrt(pi)) (1 - x^2/3 + x^4/10)
    const double x2 = x * x;
    return q * std::sqrt(2.0 / kPi) / sigma * (1.0 - x2 / 3.0 + x2 * x2 / 10.0);
  }
  return q / r * std::erf(x);
}

double smoothed_coulomb_field(double q, double sigma, double r) {
  const double x = r / (std::sqrt(2.0) * sigma);
  if (x < 1e-3) {
    // Linear core: E = q r / (3 sigma^3) sqrt(2/pi) (1 - 3 x^2 / 5)
    return q * r * std::sqrt(2.0 / kPi) / (3.0 * sigma * sigma * sigma) * (1.0 - 0.6 * x * x);
  }
  return q / (r * r) * (std::erf(x) - 2.0 / std::sqrt(kPi) * x * std::exp(-x * x));
}

namespace {

struct Uniform {
  double gamma;
  double d2;        // gamma^2 s_par^2 + s_perp^2
  double s_dot_v;   // s . v
};

Uniform uniform_geometry(const Vec3& x0, const Vec3& v, const Vec3& x, double t, double c) {
  const double v2 = dot(v, v);
  if (!(v2 < c * c)) throw DomainError("uniform-motion oracle requires |v| < c");
  const double gamma = 1.0 / std::sqrt(1.0 - v2 / (c * c));
  const Vec3 s = x - x0 - t * v;
  const double s2 = dot(s, s);
  const double sv = dot(s, v);
  const double spar2 = v2 > 0.0 ? sv * sv / v2 : 0.0;
  const double d2 = s2 + (gamma * gamma - 1.0) * spar2;
  if (!(d2 > 0.0)) throw DomainError("uniform-motion oracle evaluated at the charge location");
  return {gamma, d2, sv};
}

}  // namespace

PotentialValue lienard_wiechert_uniform(double q, const Vec3& x0, const Vec3& v, const Vec3& x, double t, double c) {
  const Uniform u = uniform_geometry(x0, v, x, t, c);
  const double phi = q * u.gamma / std::sqrt(u.d2);
  return {phi, (phi / c) * v};
}

PotentialValue lienard_wiechert_uniform_rate(double q, const Vec3& x0, const Vec3& v, const Vec3& x, double t,
                                             double c) {
  const Uniform u = uniform_geometry(x0, v, x, t, c);
  // d(d2)/dt = -2 s.v - 2 (gamma^2 - 1) (s.v) |v|^2 / |v|^2 = -2 gamma^2 s.v
  const double dd2 = -2.0 * u.gamma * u.gamma * u.s_dot_v;
  const double dphi = -0.5 * q * u.gamma * dd2 / (u.d2 * std::sqrt(u.d2));
  return {dphi, (dphi / c) * v};
}

PlaneWave::PlaneWave(PlaneWaveKind kind, const std::array<double, 4>& eps, const Vec3& k, double amplitude,
                     double phase)
    : kind_(kind), eps_(eps), k_(k), amplitude_(amplitude), phase_(phase) {
  if (!(norm(k_) > 0.0)) throw ConfigError("plane wave needs a non-zero wave vector");
}

PlaneWave PlaneWave::transverse(const Vec3& eps, const Vec3& k, double amplitude, double phase) {
  return make(PlaneWaveKind::transverse, {0.0, eps.x, eps.y, eps.z}, k, amplitude, phase);
}

PlaneWave PlaneWave::scalar_photon(const Vec3& k, double amplitude, double phase) {
  return make(PlaneWaveKind::scalar_photon, {1.0, 0.0, 0.0, 0.0}, k, amplitude, phase);
}

PlaneWave PlaneWave::make(PlaneWaveKind kind, const std::array<double, 4>& eps, const Vec3& k, double amplitude,
                          double phase) {
  std::array<double, 4> e = eps;
  if (kind == PlaneWaveKind::scalar_photon) e = {1.0, 0.0, 0.0, 0.0};
  if (kind == PlaneWaveKind::transverse) {
    const Vec3 spatial{e[1], e[2], e[3]};
    const double scale = norm(spatial) * norm(k);
    if (e[0] != 0.0 || std::abs(dot(spatial, k)) > 1e-12 * scale)
      throw ConfigError("transverse plane wave needs a purely spatial polarisation perpendicular to k");
  }
  return PlaneWave(kind, e, k, amplitude, phase);
}

PotentialValue PlaneWave::value(const Vec3& x, double t, double c) const {
  const double w = amplitude_ * std::cos(dot(k_, x) - omega(c) * t + phase_);
  return {eps_[0] * w, {eps_[1] * w, eps_[2] * w, eps_[3] * w}};
}

PotentialValue PlaneWave::rate(const Vec3& x, double t, double c) const {
  const double w = amplitude_ * omega(c) * std::sin(dot(k_, x) - omega(c) * t + phase_);
  return {eps_[0] * w, {eps_[1] * w, eps_[2] * w, eps_[3] * w}};
}

std::pair<Vec3, Vec3> PlaneWave::fields(const Vec3& x, double t, double c) const {
  // With theta = k.x - w t: grad cos = -k sin, d/dt cos = w sin.
  const double s = amplitude_ * std::sin(dot(k_, x) - omega(c) * t + phase_);
  const Vec3 eps_a{eps_[1], eps_[2], eps_[3]};
  const Vec3 e = -(omega(c) / c) * s * eps_a + eps_[0] * s * k_;
  const Vec3 h = -s * cross(k_, eps_a);
  return {e, h};
}

double PlaneWave::lorentz_residual(const Vec3& x, double t, double c) const {
  const double s = amplitude_ * std::sin(dot(k_, x) - omega(c) * t + phase_);
  const Vec3 eps_a{eps_[1], eps_[2], eps_[3]};
  return (eps_[0] * omega(c) / c - dot(eps_a, k_)) * s;
}

Vec3 solenoid_exterior(double flux, const Vec3& axis_point, const Vec3& axis, const Vec3& x) {
  const Vec3 n = axis / norm(axis);
  const Vec3 d = x - axis_point;
  const Vec3 perp = d - dot(d, n) * n;
  const double r2 = dot(perp, perp);
  if (!(r2 > 0.0)) throw DomainError("solenoid exterior potential evaluated on the axis");
  // theta_hat / r = (n x perp) / r^2
  return (flux / (2.0 * kPi * r2)) * cross(n, perp);
}

FourPotentialField sample_potential(const GridSpec& grid, double t,
                                    const std::function<PotentialValue(const Vec3&, double)>& f) {
  FourPotentialField out(grid, t);
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const PotentialValue v = f(grid.position(i, j, k), t);
        const std::size_t n = grid.index(i, j, k);
        out.phi[n] = v.phi;
        out.a[0][n] = v.a.x;
        out.a[1][n] = v.a.y;
        out.a[2][n] = v.a.z;
      }
  return out;
}

}  // namespace a4
