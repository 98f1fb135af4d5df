#include "a4/sources.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "a4/error.hpp"
#include "a4/operators.hpp"

namespace a4 {

namespace {

constexpr double kPi = std::numbers::pi;

double smootherstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smootherstep_rate(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

double gaussian3(double r2, double sigma) {
  const double norm = std::pow(2.0 * kPi * sigma * sigma, -1.5);
  return norm * std::exp(-r2 / (2.0 * sigma * sigma));
}

// Visits every node within the axis-aligned box ref +/- half. `d` is the node's
// position relative to ref, taken from one consistent periodic image.
template <class Body>
void for_nodes_in_box(const GridSpec& g, const Vec3& ref, const Vec3& half, Body&& body) {
  std::array<int, 3> lo{}, hi{};
  std::array<bool, 3> all{};
  for (int a = 0; a < 3; ++a) {
    const auto s = static_cast<std::size_t>(a);
    const double u0 = (ref[a] - half[a] - g.origin()[a]) / g.h();
    const double u1 = (ref[a] + half[a] - g.origin()[a]) / g.h();
    lo[s] = static_cast<int>(std::ceil(u0));
    hi[s] = static_cast<int>(std::floor(u1));
    if (g.periodic()) {
      all[s] = hi[s] - lo[s] + 1 >= g.n(a);
      if (all[s]) {
        lo[s] = 0;
        hi[s] = g.n(a) - 1;
      }
    } else {
      lo[s] = std::max(lo[s], 0);
      hi[s] = std::min(hi[s], g.n(a) - 1);
    }
  }
  auto wrap = [&](int p, int a) {
    const int n = g.n(a);
    return ((p % n) + n) % n;
  };
  for (int pk = lo[2]; pk <= hi[2]; ++pk)
    for (int pj = lo[1]; pj <= hi[1]; ++pj)
      for (int pi = lo[0]; pi <= hi[0]; ++pi) {
        Vec3 d{g.origin().x + g.h() * pi - ref.x, g.origin().y + g.h() * pj - ref.y,
               g.origin().z + g.h() * pk - ref.z};
        int i = pi, j = pj, k = pk;
        if (g.periodic()) {
          i = wrap(pi, 0);
          j = wrap(pj, 1);
          k = wrap(pk, 2);
          for (int a = 0; a < 3; ++a) {
            if (all[static_cast<std::size_t>(a)]) {
              const double period = g.extent(a);
              d[a] -= period * std::round(d[a] / period);
            }
          }
        }
        body(g.index(i, j, k), d);
      }
}

void require_interior(const GridSpec& g, const Vec3& ref, const Vec3& half, const char* what) {
  if (g.periodic()) {
    // A support wider than the box would overlap its own periodic image.
    for (int a = 0; a < 3; ++a)
      if (2.0 * half[a] > g.extent(a) * (1.0 + 1e-12))
        throw ConfigError(std::string(what) + " support is wider than the periodic box (axis " + std::to_string(a) +
                          ")");
    return;
  }
  for (int a = 0; a < 3; ++a) {
    const double lo = g.origin()[a];
    const double hi = lo + g.extent(a);
    if (ref[a] - half[a] < lo || ref[a] + half[a] > hi) {
      throw ConfigError(std::string(what) + " support intersects an absorbing boundary face (axis " +
                        std::to_string(a) + ")");
    }
  }
}

Vec3 cube(double r) { return {r, r, r}; }

void add_gaussian(ScalarField& rho, const Vec3& center, double q, double sigma, const char* what) {
  const GridSpec& g = rho.grid();
  const double cut = kGaussianCutoff * sigma;
  require_interior(g, center, cube(cut), what);
  for_nodes_in_box(g, center, cube(cut), [&](std::size_t n, const Vec3& d) {
    const double r2 = dot(d, d);
    if (r2 <= cut * cut) rho[n] += q * gaussian3(r2, sigma);
  });
}

double segment_profile(const Vec3& d_from_minus, const Vec3& tangent, double length, double sigma) {
  const double s = dot(d_from_minus, tangent);
  const Vec3 perp = d_from_minus - s * tangent;
  const double r2 = dot(perp, perp);
  const double transverse = std::exp(-r2 / (2.0 * sigma * sigma)) / (2.0 * kPi * sigma * sigma);
  const double root2s = std::sqrt(2.0) * sigma;
  const double along = 0.5 * (std::erf(s / root2s) - std::erf((s - length) / root2s));
  return transverse * along;
}

void add_tube_current(VectorField& j, const Vec3& x_minus, const Vec3& x_plus, double current, double sigma) {
  const GridSpec& g = j.grid();
  const Vec3 seg = x_plus - x_minus;
  const double length = norm(seg);
  const Vec3 tangent = seg / length;
  const Vec3 mid = 0.5 * (x_minus + x_plus);
  const double cut = kGaussianCutoff * sigma;
  const Vec3 half{std::abs(seg.x) / 2 + cut, std::abs(seg.y) / 2 + cut, std::abs(seg.z) / 2 + cut};
  require_interior(g, mid, half, "transfer tube");
  if (current == 0.0) return;
  const Vec3 mid_from_minus = mid - x_minus;
  for_nodes_in_box(g, mid, half, [&](std::size_t n, const Vec3& d) {
    const double f = current * segment_profile(d + mid_from_minus, tangent, length, sigma);
    j[0][n] += f * tangent.x;
    j[1][n] += f * tangent.y;
    j[2][n] += f * tangent.z;
  });
}

double resolved_width(const FiniteSolenoid& s, const GridSpec& g) {
  return s.shell_width > 0.0 ? s.shell_width : 2.0 * g.h();
}

void add_solenoid(VectorField& j, const FiniteSolenoid& s) {
  const GridSpec& g = j.grid();
  const double w = resolved_width(s, g);
  const Vec3 axis = s.axis / norm(s.axis);
  const double cut = kGaussianCutoff * w;
  const double rmax = s.radius + cut;
  const double zmax = 0.5 * s.length + cut;
  // Bounding box of the smeared cylinder for an arbitrary axis.
  Vec3 half{};
  for (int a = 0; a < 3; ++a) {
    const double ca = std::abs(axis[a]);
    half[a] = ca * zmax + std::sqrt(std::max(0.0, 1.0 - ca * ca)) * rmax;
  }
  require_interior(g, s.center, half, "solenoid");
  const double root2w = std::sqrt(2.0) * w;
  const double g1 = 1.0 / (std::sqrt(2.0 * kPi) * w);
  // Radial profile G(r - R) - G(r + R) is odd in r, so the azimuthal field is smooth on the axis.
  const double radial_norm = 1.0 / std::erf(s.radius / root2w);
  for_nodes_in_box(g, s.center, half, [&](std::size_t n, const Vec3& d) {
    const double z = dot(d, axis);
    const Vec3 perp = d - z * axis;
    const double r = norm(perp);
    if (r == 0.0 || r > rmax || std::abs(z) > zmax) return;
    const double gr = g1 * (std::exp(-(r - s.radius) * (r - s.radius) / (2 * w * w)) -
                            std::exp(-(r + s.radius) * (r + s.radius) / (2 * w * w)));
    const double wz = 0.5 * (std::erf((z + 0.5 * s.length) / root2w) - std::erf((z - 0.5 * s.length) / root2w));
    const Vec3 theta = cross(axis, perp / r);
    const double mag = s.surface_current * radial_norm * gr * wz;
    j[0][n] += mag * theta.x;
    j[1][n] += mag * theta.y;
    j[2][n] += mag * theta.z;
  });
}

void accumulate(const SourceModel& model, double t, FourCurrentField& out) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        const GridSpec& g = out.grid();
        if constexpr (std::is_same_v<T, StaticGaussianCharge>) {
          add_gaussian(out.rho, s.center, s.q, s.sigma, "static charge");
        } else if constexpr (std::is_same_v<T, UniformlyMovingCharge>) {
          const Vec3 c = s.start + t * s.velocity;
          const double cut = kGaussianCutoff * s.sigma;
          require_interior(g, c, cube(cut), "moving charge");
          for_nodes_in_box(g, c, cube(cut), [&](std::size_t n, const Vec3& d) {
            const double r2 = dot(d, d);
            if (r2 > cut * cut) return;
            const double rho = s.q * gaussian3(r2, s.sigma);
            out.rho[n] += rho;
            out.j[0][n] += rho * s.velocity.x;
            out.j[1][n] += rho * s.velocity.y;
            out.j[2][n] += rho * s.velocity.z;
          });
        } else if constexpr (std::is_same_v<T, OscillatingDipole>) {
          const Vec3 p = std::sin(s.omega * t) * s.moment;
          const Vec3 pdot = s.omega * std::cos(s.omega * t) * s.moment;
          const double cut = kGaussianCutoff * s.sigma;
          require_interior(g, s.center, cube(cut), "dipole");
          for_nodes_in_box(g, s.center, cube(cut), [&](std::size_t n, const Vec3& d) {
            const double r2 = dot(d, d);
            if (r2 > cut * cut) return;
            const double gv = gaussian3(r2, s.sigma);
            out.rho[n] += dot(p, d) / (s.sigma * s.sigma) * gv;
            out.j[0][n] += pdot.x * gv;
            out.j[1][n] += pdot.y * gv;
            out.j[2][n] += pdot.z * gv;
          });
        } else if constexpr (std::is_same_v<T, FiniteSolenoid>) {
          add_solenoid(out.j, s);
        } else if constexpr (std::is_same_v<T, ChargeTransferPulse>) {
          const double w = s.window.value(t);
          if (w != 0.0) {
            add_gaussian(out.rho, s.x_plus, s.q * w, s.sigma, "transfer endpoint");
            add_gaussian(out.rho, s.x_minus, -s.q * w, s.sigma, "transfer endpoint");
          }
          add_tube_current(out.j, s.x_minus, s.x_plus, s.q * s.window.rate(t), s.sigma);
        }
      },
      model);
}

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError(what); }

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) config_fail(std::string(what) + ": parameters must be finite");
}

void require_finite(const Vec3& v, const char* what) { require_finite({v.x, v.y, v.z}, what); }

void require_resolved(double sigma, const GridSpec& g, const char* what) {
  if (!(sigma >= 2.0 * g.h() * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << what << ": width sigma = " << sigma << " is below 2h = " << 2.0 * g.h();
    config_fail(os.str());
  }
}

}  // namespace

double RampWindow::value(double t) const {
  const double t1 = t_on + t_rise;
  const double t2 = t1 + t_hold;
  const double t3 = t2 + t_fall;
  if (t <= t_on || t >= t3) return 0.0;
  if (t < t1) return smootherstep((t - t_on) / t_rise);
  if (t <= t2) return 1.0;
  return smootherstep((t3 - t) / t_fall);
}

double RampWindow::rate(double t) const {
  const double t1 = t_on + t_rise;
  const double t2 = t1 + t_hold;
  const double t3 = t2 + t_fall;
  if (t <= t_on || t >= t3) return 0.0;
  if (t < t1) return smootherstep_rate((t - t_on) / t_rise) / t_rise;
  if (t <= t2) return 0.0;
  return -smootherstep_rate((t3 - t) / t_fall) / t_fall;
}

std::string source_type_name(const SourceModel& s) {
  static constexpr const char* names[] = {"static_gaussian_charge", "uniformly_moving_charge", "oscillating_dipole",
                                          "finite_solenoid", "charge_transfer_pulse"};
  return names[s.index()];
}

void validate_source(const SourceModel& model, const GridSpec& g, const PhysicalConstants& k) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StaticGaussianCharge>) {
          require_finite({s.q, s.sigma}, "static_gaussian_charge");
          require_finite(s.center, "static_gaussian_charge");
          require_resolved(s.sigma, g, "static_gaussian_charge");
          require_interior(g, s.center, cube(kGaussianCutoff * s.sigma), "static_gaussian_charge");
        } else if constexpr (std::is_same_v<T, UniformlyMovingCharge>) {
          require_finite({s.q, s.sigma}, "uniformly_moving_charge");
          require_finite(s.start, "uniformly_moving_charge");
          require_finite(s.velocity, "uniformly_moving_charge");
          require_resolved(s.sigma, g, "uniformly_moving_charge");
          if (!(norm(s.velocity) < k.c)) config_fail("uniformly_moving_charge: |v| must be below c");
          require_interior(g, s.start, cube(kGaussianCutoff * s.sigma), "uniformly_moving_charge");
        } else if constexpr (std::is_same_v<T, OscillatingDipole>) {
          require_finite({s.omega, s.sigma}, "oscillating_dipole");
          require_finite(s.moment, "oscillating_dipole");
          require_finite(s.center, "oscillating_dipole");
          require_resolved(s.sigma, g, "oscillating_dipole");
          require_interior(g, s.center, cube(kGaussianCutoff * s.sigma), "oscillating_dipole");
        } else if constexpr (std::is_same_v<T, FiniteSolenoid>) {
          require_finite({s.radius, s.length, s.surface_current, s.shell_width}, "finite_solenoid");
          require_finite(s.center, "finite_solenoid");
          require_finite(s.axis, "finite_solenoid");
          if (!(norm(s.axis) > 0.0)) config_fail("finite_solenoid: axis must be non-zero");
          if (s.radius < 4.0 * g.h() * (1 - 1e-12)) config_fail("finite_solenoid: radius must be >= 4h");
          if (s.length < 8.0 * g.h() * (1 - 1e-12)) config_fail("finite_solenoid: length must be >= 8h");
          if (s.shell_width > 0.0) require_resolved(s.shell_width, g, "finite_solenoid shell");
          VectorField probe(g);
          add_solenoid(probe, s);
        } else if constexpr (std::is_same_v<T, ChargeTransferPulse>) {
          require_finite({s.q, s.sigma, s.window.t_on, s.window.t_rise, s.window.t_hold, s.window.t_fall},
                         "charge_transfer_pulse");
          require_resolved(s.sigma, g, "charge_transfer_pulse");
          if (s.window.t_rise < 0 || s.window.t_hold < 0 || s.window.t_fall < 0)
            config_fail("charge_transfer_pulse: window durations must be non-negative");
          if (s.window.t_rise < 4.0 * g.dt() * (1 - 1e-12) || s.window.t_fall < 4.0 * g.dt() * (1 - 1e-12))
            config_fail("charge_transfer_pulse: t_rise and t_fall must be >= 4 dt");
          if (norm(s.x_plus - s.x_minus) < kGaussianCutoff * s.sigma)
            config_fail("charge_transfer_pulse: endpoints closer than 6 sigma");
          const double cut = kGaussianCutoff * s.sigma;
          require_interior(g, s.x_plus, cube(cut), "charge_transfer_pulse");
          require_interior(g, s.x_minus, cube(cut), "charge_transfer_pulse");
          const Vec3 seg = s.x_plus - s.x_minus;
          require_interior(g, 0.5 * (s.x_plus + s.x_minus),
                           {std::abs(seg.x) / 2 + cut, std::abs(seg.y) / 2 + cut, std::abs(seg.z) / 2 + cut},
                           "charge_transfer_pulse");
        }
      },
      model);
}

FourCurrentField eval(const SourceModel& s, double t, const GridSpec& grid) {
  FourCurrentField out(grid, t);
  accumulate(s, t, out);
  return out;
}

FourCurrentField eval(const std::vector<SourceModel>& sources, double t, const GridSpec& grid) {
  FourCurrentField out(grid, t);
  for (const auto& s : sources) accumulate(s, t, out);
  return out;
}

ScalarField continuity_residual(const SourceModel& s, double t, double dt, const GridSpec& grid) {
  const FourCurrentField ahead = eval(s, t + dt, grid);
  const FourCurrentField behind = eval(s, t - dt, grid);
  const FourCurrentField here = eval(s, t, grid);
  ScalarField out = divergence(here.j);
  const double inv = 1.0 / (2.0 * dt);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += (ahead.rho[n] - behind.rho[n]) * inv;
  return out;
}

VectorField transfer_tube_current(const Vec3& x_minus, const Vec3& x_plus, const RampWindow& w, double q,
                                  double sigma, double t, const GridSpec& grid) {
  if (norm(x_plus - x_minus) < kGaussianCutoff * sigma)
    throw ConfigError("transfer tube endpoints closer than 6 sigma");
  VectorField j(grid);
  add_tube_current(j, x_minus, x_plus, q * w.rate(t), sigma);
  return j;
}

VectorField solenoid_current(const FiniteSolenoid& s, const GridSpec& grid) {
  validate_source(s, grid, PhysicalConstants::natural());
  VectorField j(grid);
  add_solenoid(j, s);
  return j;
}

double total_charge(const ScalarField& rho) {
  // Compensated sum so that tiny residual charges are not swamped by rounding.
  double sum = 0.0, comp = 0.0;
  for (double v : rho.values()) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum * rho.grid().cell_volume();
}

}  // namespace a4
