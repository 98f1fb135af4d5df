#include <doctest.h>

#include <cmath>
#include <numbers>

#include "a4/diagnostics.hpp"
#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "a4/oracles.hpp"
#include "a4/solver.hpp"
#include "a4/sources.hpp"
#include "../support.hpp"

using namespace a4;

namespace {

constexpr double kPi = std::numbers::pi;
const PhysicalConstants kNat = PhysicalConstants::natural();

FourPotentialField random_potential(const GridSpec& g, unsigned salt, double t = 0.0) {
  FourPotentialField f(g, t);
  for (int mu = 0; mu < 4; ++mu)
    for (std::size_t n = 0; n < g.size(); ++n)
      f.component(mu)[n] = std::sin(0.731 * static_cast<double>(n) + 1.3 * mu + salt) * std::cos(0.07 * n * salt);
  return f;
}

double max_diff(const FourPotentialField& a, const FourPotentialField& b) {
  double m = 0.0;
  for (int mu = 0; mu < 4; ++mu) m = std::max(m, test::max_abs(test::diff(a.component(mu), b.component(mu))));
  return m;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const GridSpec g({8, 8, 8}, 1.0, 0.5);
  const FourPotentialField zero(g);
  SolverState s = init_state(g, zero, zero, FourCurrentField(g), kNat, BoundaryKind::periodic);
  for (int mu = 0; mu < 4; ++mu) CHECK(s.prev.component(mu) == s.now.component(mu));
  CHECK(s.prev.time == -0.5);
  for (int n = 0; n < 10; ++n) s = step(std::move(s), FourCurrentField(g, s.now.time));
  CHECK(s.step_index == 10);
  for (int mu = 0; mu < 4; ++mu) CHECK(s.now.component(mu).is_zero());
}

TEST_CASE("Taylor back-step reproduces a plane wave at third order") {
  std::vector<double> dts, errs;
  for (int n : {16, 32, 64}) {
    const double L = 16.0, h = L / n, dt = 0.5 * h;
    const GridSpec g({n, 4, 4}, h, dt);
    const PlaneWave w = PlaneWave::transverse({0, 1, 0}, {2 * kPi / L, 0, 0}, 1.0, 0.3);
    auto val = [&](const Vec3& x, double t) { return w.value(x, t, 1.0); };
    auto rate = [&](const Vec3& x, double t) { return w.rate(x, t, 1.0); };
    const SolverState s = init_state(g, sample_potential(g, 0.0, val), sample_potential(g, 0.0, rate),
                                     FourCurrentField(g), kNat, BoundaryKind::periodic);
    dts.push_back(dt);
    errs.push_back(max_diff(s.prev, sample_potential(g, -dt, val)));
  }
  // Local error combines dt^3 with the dt^2 h^2 of the lattice Laplacian.
  CHECK(test::loglog_slope(dts, errs) > 2.7);
}

TEST_CASE("static data with a matching discrete source is stationary") {
  const GridSpec g({12, 12, 12}, 1.0, 0.5);
  FourPotentialField value(g);
  value.phi = ScalarField::sample(g, [](const Vec3& x) { return std::cos(2 * kPi * x.x / 12) * std::sin(2 * kPi * x.y / 12); });
  FourCurrentField src(g);
  src.rho = laplacian(value.phi);
  src.rho *= -1.0 / (4 * kPi);
  SolverState s = init_state(g, value, FourPotentialField(g), src, kNat, BoundaryKind::periodic);
  CHECK(max_diff(s.prev, s.now) < 1e-14);
  for (int n = 0; n < 20; ++n) s = step(std::move(s), src);
  CHECK(max_diff(s.now, value) < 1e-12);
}

TEST_CASE("every produced triplet satisfies the discrete wave equation") {
  const GridSpec g({32, 32, 32}, 1.0, 0.5);
  const OscillatingDipole d{{0.2, 0, 1}, 0.4, 2.0, {16, 16, 16}};
  SolverState s = init_state(g, FourPotentialField(g), FourPotentialField(g), eval(d, 0.0, g), kNat,
                             BoundaryKind::periodic);
  for (int n = 0; n < 12; ++n) {
    const FourCurrentField j = eval(d, s.now.time, g);
    const SolverState next = step(s, j);
    const FourResidual r = dalembert_residual(s.prev, s.now, next.now, j, 0.5, 1.0);
    for (int mu = 0; mu < 4; ++mu) CHECK(test::max_abs(r[mu]) < 1e-12);
    s = next;
  }
}

TEST_CASE("the step is linear in state and source") {
  const GridSpec g({10, 10, 10}, 1.0, 0.5);
  const double a = 0.7, b = -1.9;
  auto state = [&](unsigned salt) {
    SolverState s;
    s.grid = g;
    s.constants = kNat;
    s.prev = random_potential(g, salt, -0.5);
    s.now = random_potential(g, salt + 10, 0.0);
    return s;
  };
  auto current = [&](unsigned salt) {
    FourCurrentField j(g);
    const FourPotentialField r = random_potential(g, salt);
    j.rho = r.phi;
    j.j = r.a;
    return j;
  };
  const SolverState x = state(1), y = state(2);
  const FourCurrentField jx = current(3), jy = current(4);
  SolverState mix = x;
  mix.prev = FourPotentialField(g, -0.5);
  mix.prev.add_scaled(a, x.prev).add_scaled(b, y.prev);
  mix.now = FourPotentialField(g, 0.0);
  mix.now.add_scaled(a, x.now).add_scaled(b, y.now);
  FourCurrentField jmix(g);
  jmix.rho = a * jx.rho + b * jy.rho;
  jmix.j = a * jx.j + b * jy.j;
  const SolverState sx = step(x, jx), sy = step(y, jy), smix = step(mix, jmix);
  FourPotentialField expect(g, 0.5);
  expect.add_scaled(a, sx.now).add_scaled(b, sy.now);
  CHECK(max_diff(smix.now, expect) < 1e-12);
}

TEST_CASE("components evolve independently") {
  const GridSpec g({32, 32, 32}, 1.0, 0.5, {}, Boundary::absorbing);
  const StaticGaussianCharge q{1.0, 2.0, {15.5, 15.5, 15.5}};
  SolverState s = init_state(g, FourPotentialField(g), FourPotentialField(g), eval(q, 0.0, g), kNat,
                             BoundaryKind::mur_first_order);
  for (int n = 0; n < 20; ++n) s = step(std::move(s), eval(q, s.now.time, g));
  CHECK(test::max_abs(s.now.phi) > 0.1);
  for (int a = 0; a < 3; ++a) CHECK(s.now.a[a].is_zero());
}

TEST_CASE("free-field energy surrogate shows no secular drift over 1000 steps") {
  const int n = 16;
  const GridSpec g({n, n, n}, 1.0, 0.5);
  const PlaneWave w1 = PlaneWave::transverse({0, 0, 1}, {2 * kPi / n, 2 * kPi / n, 0}, 1.0);
  const PlaneWave w2 = PlaneWave::scalar_photon({0, 0, 2 * kPi * 2 / n}, 0.5, 1.0);
  auto val = [&](const Vec3& x, double t) {
    PotentialValue a = w1.value(x, t, 1.0), b = w2.value(x, t, 1.0);
    return PotentialValue{a.phi + b.phi, a.a + b.a};
  };
  auto rate = [&](const Vec3& x, double t) {
    PotentialValue a = w1.rate(x, t, 1.0), b = w2.rate(x, t, 1.0);
    return PotentialValue{a.phi + b.phi, a.a + b.a};
  };
  SolverState s = init_state(g, sample_potential(g, 0.0, val), sample_potential(g, 0.0, rate), FourCurrentField(g),
                             kNat, BoundaryKind::periodic);
  const FourCurrentField zero(g);
  // The centred surrogate is not the scheme's exact invariant, so it oscillates
  // at O(dt^2); the secular part is the drift of its 100-step running mean.
  double e0 = 0.0, swing = 0.0, first = 0.0, last = 0.0;
  for (int k = 0; k < 1000; ++k) {
    SolverState next = step(s, zero);
    const double e = energy_surrogate(s.prev, s.now, next.now, 0.5, 1.0);
    if (k == 0) e0 = e;
    swing = std::max(swing, std::abs(e - e0) / e0);
    if (k < 100) first += e / 100;
    if (k >= 900) last += e / 100;
    s = std::move(next);
  }
  CHECK(swing < 0.01);
  CHECK(std::abs(last - first) / first < 1e-3);
}

TEST_CASE("first-order Mur faces reflect at most 5 percent of a normally incident pulse") {
  // A wide right-moving beam, short along x, hits the x = max face head on. The
  // cut box is compared with a padded box whose faces stay out of reach.
  const int nx = 40, ny = 96, pad = 20;
  const double s0 = 2.0, width = 24.0, x0 = 24.0, yc = (ny - 1) / 2.0;
  auto make = [&](int p) {
    const GridSpec g({nx + 2 * p, ny + 2 * p, ny + 2 * p}, 1.0, 0.5, {-double(p), -double(p), -double(p)},
                     Boundary::absorbing);
    auto profile = [&](const Vec3& x) {
      return std::exp(-((x.y - yc) * (x.y - yc) + (x.z - yc) * (x.z - yc)) / (2 * width * width));
    };
    FourPotentialField value(g), rate(g);
    value.phi = ScalarField::sample(g, [&](const Vec3& x) {
      const double u = x.x - x0;
      return std::exp(-u * u / (2 * s0 * s0)) * profile(x);
    });
    rate.phi = ScalarField::sample(g, [&](const Vec3& x) {
      const double u = x.x - x0;
      return u / (s0 * s0) * std::exp(-u * u / (2 * s0 * s0)) * profile(x);
    });
    return init_state(g, value, rate, FourCurrentField(g), kNat, BoundaryKind::mur_first_order);
  };
  SolverState cut = make(0), ref = make(pad);
  const int mid = ny / 2;
  double reflected = 0.0, incident = 0.0;
  for (int k = 1; k <= 48; ++k) {
    cut = step(std::move(cut), FourCurrentField(cut.grid));
    ref = step(std::move(ref), FourCurrentField(ref.grid));
    incident = std::max(incident, std::abs(ref.now.phi(nx - 1 + pad, mid + pad, mid + pad)));
    if (cut.now.time <= 16.0) continue;  // the pulse reaches the face at t = 15
    for (int i = nx - 12; i < nx - 4; ++i)
      reflected = std::max(reflected, std::abs(cut.now.phi(i, mid, mid) - ref.now.phi(i + pad, mid + pad, mid + pad)));
  }
  MESSAGE("Mur reflection ratio " << reflected / incident);
  CHECK(reflected / incident <= 0.05);
}

TEST_CASE("non-finite updates raise a divergence error naming the component") {
  const GridSpec g({8, 8, 8}, 1.0, 0.5);
  FourPotentialField v(g);
  SolverState s = init_state(g, v, v, FourCurrentField(g), kNat, BoundaryKind::periodic);
  FourCurrentField j(g);
  j.j[1][17] = std::numeric_limits<double>::infinity();
  try {
    step(s, j);
    FAIL("no divergence error");
  } catch (const DivergenceError& e) {
    CHECK(e.component() == "Ay");
    CHECK(e.step() == 1);
  }
}

TEST_CASE("relaxation damping constant") {
  const GridSpec g({10, 20, 10}, 0.5, 0.25, {}, Boundary::absorbing);
  CHECK(relaxation_damping(g, kNat) == doctest::Approx(2 * kPi / 9.5));
}
