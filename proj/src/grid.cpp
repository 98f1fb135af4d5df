#include "a4/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "a4/error.hpp"

namespace a4 {

void PhysicalConstants::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("speed of light must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "absorbing"; }
std::string to_string(UnitMode m) { return m == UnitMode::natural ? "natural" : "gaussian"; }

GridSpec::GridSpec(std::array<int, 3> n, double h, double dt, Vec3 origin, Boundary boundary)
    : n_(n), h_(h), dt_(dt), origin_(origin), boundary_(boundary) {
  for (int a = 0; a < 3; ++a) {
    if (n_[static_cast<std::size_t>(a)] < 4) {
      throw ConfigError("grid needs at least 4 cells per axis (axis " + std::to_string(a) + " has " +
                        std::to_string(n_[static_cast<std::size_t>(a)]) + ")");
    }
  }
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigError("grid spacing h must be positive");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("time step dt must be positive");
}

GridSpec GridSpec::create(std::array<int, 3> n, double h, double dt, double c, Vec3 origin,
                          Boundary boundary) {
  GridSpec g(n, h, dt, origin, boundary);
  g.check_cfl(c);
  return g;
}

double GridSpec::max_stable_dt(double h, double c) { return h / (std::sqrt(3.0) * c); }

void GridSpec::check_cfl(double c) const {
  const double limit = max_stable_dt(h_, c);
  // Equality is allowed; the slack only absorbs rounding in h / sqrt(3).
  if (dt_ > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "CFL violated: c*dt = " << c * dt_ << " exceeds h/sqrt(3) = " << h_ / std::sqrt(3.0)
       << " (dt must be <= " << limit << ")";
    throw ConfigError(os.str());
  }
}

double GridSpec::extent(int axis) const {
  const int n = n_[static_cast<std::size_t>(axis)];
  return periodic() ? n * h_ : (n - 1) * h_;
}

double GridSpec::max_extent() const { return std::max({extent(0), extent(1), extent(2)}); }

Vec3 GridSpec::displacement(const Vec3& x, const Vec3& y) const {
  Vec3 d = x - y;
  if (periodic()) {
    for (int a = 0; a < 3; ++a) {
      const double period = extent(a);
      d[a] -= period * std::round(d[a] / period);
    }
  }
  return d;
}

bool GridSpec::contains(const Vec3& x, double margin) const {
  if (periodic()) return true;
  for (int a = 0; a < 3; ++a) {
    const double lo = origin_[a] + margin;
    const double hi = origin_[a] + extent(a) - margin;
    if (x[a] < lo || x[a] > hi) return false;
  }
  return true;
}

}  // namespace a4
