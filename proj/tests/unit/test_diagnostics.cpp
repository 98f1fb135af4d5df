#include <doctest.h>

#include <cmath>
#include <numbers>

#include "a4/diagnostics.hpp"
#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "a4/oracles.hpp"
#include "../support.hpp"

using namespace a4;

namespace {

constexpr double kPi = std::numbers::pi;

FourPotentialField wiggle(const GridSpec& g, double t, unsigned salt) {
  FourPotentialField f(g, t);
  for (int mu = 0; mu < 4; ++mu)
    for (std::size_t n = 0; n < g.size(); ++n)
      f.component(mu)[n] = std::sin(0.37 * static_cast<double>(n) * (mu + 1) + salt + 2.1 * t) + 0.3 * std::cos(1.9 * t * mu);
  return f;
}

}  // namespace

TEST_CASE("norms of simple fields") {
  const GridSpec g({4, 4, 4}, 0.5, 0.25);
  const ScalarField two(g, 2.0);
  const Norms n = norms(two);
  CHECK(n.linf == 2.0);
  CHECK(n.l2 == doctest::Approx(std::sqrt(64 * 4 * 0.125)));
  CHECK(norms(ScalarField(g)) == Norms{});

  // Absorbing: the two outer layers are skipped unless asked for.
  const GridSpec a({8, 8, 8}, 1.0, 0.5, {}, Boundary::absorbing);
  ScalarField f(a, 1.0);
  f(1, 4, 4) = 100.0;
  CHECK(norms(f).linf == 1.0);
  CHECK(norms(f, false).linf == 100.0);
  CHECK(norms(f).l2 == doctest::Approx(std::sqrt(64.0)));

  VectorField v(g);
  v[0] = ScalarField(g, 3.0);
  v[2] = ScalarField(g, 4.0);
  CHECK(norms(v).linf == doctest::Approx(5.0));
}

TEST_CASE("static Coulomb data has zero Lorentz residual") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  FourPotentialField p(g);
  p.phi = ScalarField::sample(g, [](const Vec3& x) { return smoothed_coulomb(1.0, 2.0, norm(x - Vec3{8, 8, 8})); });
  FourPotentialField prev = p, next = p;
  prev.time = -0.5;
  next.time = 0.5;
  CHECK(lorentz_residual(prev, p, next, 0.5, 1.0).is_zero());
}

TEST_CASE("scalar photon Lorentz residual has amplitude a omega / c") {
  const double L = 32.0, a = 0.8;
  const GridSpec g({32, 4, 4}, 1.0, 0.25);
  const PlaneWave w = PlaneWave::scalar_photon({2 * kPi / L, 0, 0}, a);
  auto f = [&](const Vec3& x, double t) { return w.value(x, t, 1.0); };
  const ScalarField r = lorentz_residual(sample_potential(g, -0.25, f), sample_potential(g, 0, f),
                                         sample_potential(g, 0.25, f), 0.25, 1.0);
  const double expect = a * w.omega(1.0);
  CHECK(test::max_abs(r) == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("derived fields of linear potentials are exact") {
  // phi = 0.5 x, A = (t, x, 0): E = (-1/c - 0.5, 0, 0), H = (0, 0, 1).
  const GridSpec g({6, 6, 6}, 0.5, 0.25, {}, Boundary::absorbing);
  auto make = [&](double t) {
    FourPotentialField f(g, t);
    f.phi = ScalarField::sample(g, [](const Vec3& x) { return 0.5 * x.x; });
    f.a = VectorField::sample(g, [t](const Vec3& x) { return Vec3{t, x.x, 0}; });
    return f;
  };
  const double c = 2.0;
  const EMField em = derive_fields(make(-0.25), make(0), make(0.25), 0.25, c);
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(std::abs(em.e.at(n).x + 1 / c + 0.5) < 1e-12);
    CHECK(std::abs(em.e.at(n).y) < 1e-12);
    CHECK(std::abs(em.h.at(n).z - 1.0) < 1e-12);
    CHECK(std::abs(em.h.at(n).x) + std::abs(em.h.at(n).y) < 1e-12);
  }
}

TEST_CASE("transverse wave: Gauss exact, Ampere at second order") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const double L = 16.0, h = L / n, dt = 0.5 * h;
    const GridSpec g({n, 4, 4}, h, dt);
    const PlaneWave w = PlaneWave::transverse({0, 0, 1}, {2 * kPi / L, 0, 0}, 1.0);
    auto f = [&](const Vec3& x, double t) { return w.value(x, t, 1.0); };
    const MaxwellResiduals r = maxwell_residuals(sample_potential(g, -dt, f), sample_potential(g, 0, f),
                                                 sample_potential(g, dt, f), FourCurrentField(g), dt, 1.0);
    CHECK(test::max_abs(r.gauss_e) < 1e-12);
    CHECK(test::max_abs(r.gauss_h) < 1e-12);
    CHECK(test::max_abs(r.faraday) < 1e-12);
    hs.push_back(h);
    errs.push_back(test::max_abs(r.ampere));
  }
  CHECK(test::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("homogeneous Maxwell pair vanishes for arbitrary potentials") {
  for (unsigned salt : {1u, 2u, 3u}) {
    const GridSpec g({10, 12, 8}, 0.7, 0.3);
    const MaxwellResiduals r =
        maxwell_residuals(wiggle(g, -0.3, salt), wiggle(g, 0, salt), wiggle(g, 0.3, salt), FourCurrentField(g), 0.3, 1.0);
    CHECK(test::max_abs(r.gauss_h) < 1e-12);
    CHECK(test::max_abs(r.faraday) < 1e-12);
    CHECK(test::max_abs(r.gauss_e) > 1e-3);
  }
}

TEST_CASE("potential-form residual equals wave form minus the Lorentz gradient") {
  for (unsigned salt : {4u, 5u}) {
    const GridSpec g({10, 10, 10}, 1.0, 0.5);
    const FourPotentialField a = wiggle(g, -0.5, salt), b = wiggle(g, 0, salt), c = wiggle(g, 0.5, salt);
    FourCurrentField j(g);
    j.rho = b.phi;
    j.j = b.a;
    const FourResidual pm = potential_maxwell_residual(a, b, c, j, 0.5, 1.3);
    const FourResidual d = dalembert_residual(a, b, c, j, 0.5, 1.3);
    const FourResidual lg = lorentz_gradient(a, b, c, 0.5, 1.3);
    for (int mu = 0; mu < 4; ++mu) {
      const double scale = std::max(test::max_abs(d[mu]), test::max_abs(lg[mu]));
      CHECK(test::max_abs(test::diff(pm[mu], test::diff(d[mu], lg[mu]))) < 1e-12 * scale);
    }
  }
}

TEST_CASE("mismatched lattices are rejected") {
  const GridSpec g({8, 8, 8}, 1.0, 0.5), o({8, 8, 9}, 1.0, 0.5);
  const FourPotentialField a(g), b(o);
  CHECK_THROWS_AS(lorentz_residual(a, a, b, 0.5, 1.0), GridMismatch);
  CHECK_THROWS_AS(maxwell_residuals(a, a, a, FourCurrentField(o), 0.5, 1.0), GridMismatch);
}

TEST_CASE("diagnostic record carries step and time") {
  const GridSpec g({8, 8, 8}, 1.0, 0.5);
  const FourPotentialField a = wiggle(g, 1.0, 1), b = wiggle(g, 1.5, 1), c = wiggle(g, 2.0, 1);
  const DiagnosticRecord r = compute_record(a, b, c, FourCurrentField(g, 1.5), 0.5, 1.0, 3);
  CHECK(r.step == 3);
  CHECK(r.time == 1.5);
  CHECK(r.lorentz == norms(lorentz_residual(a, b, c, 0.5, 1.0)));
  CHECK(r.energy == doctest::Approx(energy_surrogate(a, b, c, 0.5, 1.0)));
  CHECK(r.energy > 0.0);
}
