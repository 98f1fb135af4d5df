#include <doctest.h>

#include <cmath>
#include <numbers>

#include "a4/diagnostics.hpp"
#include "a4/ensemble.hpp"
#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "../support.hpp"

using namespace a4;

namespace {

constexpr double kPi = std::numbers::pi;

FourPotentialField bumpy(const GridSpec& g, double t) {
  FourPotentialField f(g, t);
  for (int mu = 0; mu < 4; ++mu)
    f.component(mu) = ScalarField::sample(g, [&](const Vec3& x) {
      return std::sin(2 * kPi * x.x / 16 + mu + t) * std::cos(2 * kPi * x.y / 16 - t) + 0.1 * mu * x.z / 16;
    });
  return f;
}

std::vector<BaseSample> base_run(const GridSpec& g, int n) {
  std::vector<BaseSample> out;
  for (int s = 0; s < n; ++s) {
    const double t = s * g.dt();
    out.push_back({s, {bumpy(g, t - g.dt()), bumpy(g, t), bumpy(g, t + g.dt())}, FourCurrentField(g, t)});
  }
  return out;
}

HomogeneousMode scalar_mode(const GridSpec& g, int mx, int my, double amp) {
  return {{1, 0, 0, 0}, {2 * kPi * mx / (g.nx() * g.h()), 2 * kPi * my / (g.ny() * g.h()), 0}, amp, 0.3};
}

bool same(const FourPotentialField& a, const FourPotentialField& b) {
  for (int mu = 0; mu < 4; ++mu)
    if (!(a.component(mu) == b.component(mu))) return false;
  return true;
}

}  // namespace

TEST_CASE("constant and time-only gauge functions leave the fields unchanged") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  const FourPotentialField p = bumpy(g, 0.0);
  auto zero_grad = [](const Vec3&, double) { return Vec3{}; };
  CHECK(same(apply_gauge(p, zero_grad, [](const Vec3&, double) { return 0.0; }, 1.0), p));

  // chi = sin t: phi shifts by -cos t / c everywhere, grad phi and A are untouched.
  auto rate = [](const Vec3&, double t) { return std::cos(t); };
  const std::vector<FourPotentialField> s{bumpy(g, -0.5), bumpy(g, 0.0), bumpy(g, 0.5)};
  std::vector<FourPotentialField> t;
  for (const auto& f : s) t.push_back(apply_gauge(f, zero_grad, rate, 2.0));
  CHECK(t[1].phi[5] == doctest::Approx(p.phi[5] - 0.5));
  const EMField a = derive_fields(s[0], s[1], s[2], 0.5, 2.0), b = derive_fields(t[0], t[1], t[2], 0.5, 2.0);
  CHECK(test::max_abs(a.e - b.e) < 1e-14);
  CHECK(a.h == b.h);
}

TEST_CASE("a harmonic gauge function keeps E, H and the Lorentz residual to second order") {
  std::vector<double> hs, de, dl;
  for (int n : {16, 32, 64}) {
    const double L = 16.0, h = L / n, dt = 0.5 * h;
    const GridSpec g({n, n, 4}, h, dt);
    GaugeFunction chi;
    chi.terms.push_back({0.7, {2 * kPi / L, 2 * kPi * 2 / L, 0}, 0.4});
    const std::vector<FourPotentialField> s{bumpy(g, -dt), bumpy(g, 0), bumpy(g, dt)};
    const std::vector<FourPotentialField> t = apply_gauge(s, chi, 1.0);
    const EMField a = derive_fields(s[0], s[1], s[2], dt, 1.0), b = derive_fields(t[0], t[1], t[2], dt, 1.0);
    hs.push_back(h);
    de.push_back(std::max(test::max_abs(a.e - b.e), test::max_abs(a.h - b.h)));
    dl.push_back(test::max_abs(
        test::diff(lorentz_residual(s[0], s[1], s[2], dt, 1.0), lorentz_residual(t[0], t[1], t[2], dt, 1.0))));
  }
  CHECK(test::loglog_slope(hs, de) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(test::loglog_slope(hs, dl) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("gauge function terms are homogeneous waves") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  const GaugeFunction chi = GaugeFunction::random(7, 5, g, 2, 0.5);
  CHECK(chi.terms.size() == 5);
  for (const auto& t : chi.terms) {
    CHECK(std::abs(t.amplitude) <= 0.5);
    for (int a = 0; a < 3; ++a) {
      const double m = t.k[a] * 16 / (2 * kPi);
      CHECK(std::abs(m - std::round(m)) < 1e-12);
      CHECK(std::abs(m) <= 2.0 + 1e-12);
    }
  }
  const GaugeFunction again = GaugeFunction::random(7, 5, g, 2, 0.5);
  CHECK(again.terms[3].k == chi.terms[3].k);
  // Finite-difference check of gradient and rate.
  const Vec3 x{1.3, 2.1, -0.4};
  const double e = 1e-6;
  CHECK(chi.rate(x, 0.8, 1.0) == doctest::Approx((chi.value(x, 0.8 + e, 1.0) - chi.value(x, 0.8 - e, 1.0)) / (2 * e)).epsilon(1e-6));
  CHECK(chi.gradient(x, 0.8, 1.0).y ==
        doctest::Approx((chi.value(x + Vec3{0, e, 0}, 0.8, 1.0) - chi.value(x - Vec3{0, e, 0}, 0.8, 1.0)) / (2 * e)).epsilon(1e-6));
}

TEST_CASE("adding a mode with coefficient zero changes nothing") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  FourPotentialField f = bumpy(g, 0.3);
  const FourPotentialField before = f;
  add_mode(f, scalar_mode(g, 1, 2, 1.0), 0.0, 1.0);
  CHECK(same(f, before));
}

TEST_CASE("a scalar-photon mode carries Lorentz residual of amplitude |k| a") {
  const GridSpec g({64, 8, 8}, 0.5, 0.125);
  const HomogeneousMode m = scalar_mode(g, 1, 0, 0.4);
  CHECK(m.lorentz_violating());
  CHECK(m.lorentz_amplitude() == doctest::Approx(0.4 * norm(m.k)));
  std::vector<FourPotentialField> s;
  for (double t : {-0.125, 0.0, 0.125}) s.emplace_back(g, t);
  const auto t = add_mode(s, m, 1.0, 1.0);
  const ScalarField r = lorentz_residual(t[0], t[1], t[2], 0.125, 1.0);
  CHECK(test::max_abs(r) == doctest::Approx(m.lorentz_amplitude()).epsilon(0.01));

  const HomogeneousMode transverse{{0, 0, 1, 0}, {2 * kPi / 32, 0, 0}, 1.0, 0.0};
  CHECK_FALSE(transverse.lorentz_violating());
}

TEST_CASE("mode and ensemble validation") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  CHECK_NOTHROW(validate_mode(scalar_mode(g, 4, 0, 1.0), g));
  CHECK_THROWS_WITH_AS(validate_mode({{1, 0, 0, 0}, {2.0, 0, 0}, 1.0, 0.0}, g), doctest::Contains("resolvable"), ConfigError);
  CHECK_THROWS_WITH_AS(validate_mode({{1, 0, 0, 0}, {0.3, 0, 0}, 1.0, 0.0}, g), doctest::Contains("periodic"), ConfigError);
  CHECK_THROWS_AS(validate_mode({{NAN, 0, 0, 0}, {0.3, 0, 0}, 1.0, 0.0}, g), ConfigError);
  // Absorbing grids accept any resolvable k.
  CHECK_NOTHROW(validate_mode({{1, 0, 0, 0}, {0.3, 0, 0}, 1.0, 0.0}, GridSpec({16, 16, 16}, 1.0, 0.5, {}, Boundary::absorbing)));

  EnsembleSpec s;
  s.n_members = 0;
  CHECK_THROWS_AS(validate_ensemble(s), ConfigError);
  s.n_members = 3;
  s.law = AmplitudeLaw::antithetic_pairs;
  CHECK_THROWS_WITH_AS(validate_ensemble(s), doctest::Contains("even"), ConfigError);
  s.n_members = 4;
  CHECK_NOTHROW(validate_ensemble(s));
  CHECK_THROWS_AS(amplitude_law_from_string("lognormal"), ConfigError);
  for (AmplitudeLaw l : {AmplitudeLaw::symmetric_uniform, AmplitudeLaw::symmetric_gaussian, AmplitudeLaw::antithetic_pairs})
    CHECK(amplitude_law_from_string(to_string(l)) == l);
}

TEST_CASE("coefficient laws: determinism, range, antithetic pairing") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  EnsembleSpec s{{scalar_mode(g, 1, 0, 1), scalar_mode(g, 0, 1, 1), scalar_mode(g, 1, 1, 1)}, 64, 99,
                 AmplitudeLaw::symmetric_uniform};
  CHECK(member_coefficients(s, 5) == member_coefficients(s, 5));
  CHECK(member_coefficients(s, 5) != member_coefficients(s, 6));
  EnsembleSpec other = s;
  other.seed = 100;
  CHECK(member_coefficients(s, 5) != member_coefficients(other, 5));
  double mean = 0.0;
  for (int i = 0; i < 64; ++i)
    for (double c : member_coefficients(s, i)) {
      CHECK(std::abs(c) <= 1.0);
      mean += c / (64 * 3);
    }
  CHECK(std::abs(mean) < 0.15);
  CHECK_THROWS_AS(member_coefficients(s, 64), ConfigError);

  s.law = AmplitudeLaw::antithetic_pairs;
  for (int i = 0; i < 64; i += 2) {
    const auto a = member_coefficients(s, i), b = member_coefficients(s, i + 1);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == -b[m]);
  }
  s.law = AmplitudeLaw::symmetric_gaussian;
  double var = 0.0;
  for (int i = 0; i < 64; ++i)
    for (double c : member_coefficients(s, i)) var += c * c / (64 * 3);
  CHECK(var == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("tree mean") {
  const std::vector<double> same(7, 0.1);
  CHECK(tree_mean(same) == 0.1);
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(tree_mean(v) == doctest::Approx(3.0));
  const std::vector<double> pm{0.3, -0.3, 1.7, -1.7};
  CHECK(tree_mean(pm) == 0.0);
  CHECK_THROWS_AS(tree_mean(std::vector<double>{}), ConfigError);
}

TEST_CASE("ensemble average of fields") {
  const GridSpec g({8, 8, 8}, 1.0, 0.5);
  const FourPotentialField f = bumpy(g, 0.2);
  CHECK(same(ensemble_average(std::vector<FourPotentialField>(5, f)), f));
  FourPotentialField neg(g, 0.2);
  neg.add_scaled(-1.0, f);
  CHECK(ensemble_average(std::vector<FourPotentialField>{f, neg}).phi.is_zero());
  const std::vector<FourPotentialField> mixed{f, FourPotentialField(GridSpec({8, 8, 9}, 1.0, 0.5), 0.2)};
  CHECK_THROWS_AS(ensemble_average(mixed), GridMismatch);
  const std::vector<FourPotentialField> times{f, bumpy(g, 0.7)};
  CHECK_THROWS_AS(ensemble_average(times), GridMismatch);
}

TEST_CASE("ensemble members and mean") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  const EnsembleSpec spec{{scalar_mode(g, 1, 0, 0.1), scalar_mode(g, 0, 2, 0.1)}, 6, 3, AmplitudeLaw::antithetic_pairs};
  const Ensemble e(base_run(g, 3), spec, PhysicalConstants::natural());
  CHECK(e.size() == 6);
  CHECK(e.samples() == 3);
  const PotentialTriplet mean = e.mean(1);
  CHECK(same(mean.now, e.base(1).triplet.now));
  CHECK(same(mean.next, e.base(1).triplet.next));

  // member = base + deviation, and the deviation is the weighted modes.
  const PotentialTriplet m = e.member(3, 2), d = e.deviation(3, 2);
  FourPotentialField expect = e.base(2).triplet.now;
  expect += d.now;
  CHECK(same(m.now, expect));
  FourPotentialField dev(g, d.now.time);
  add_mode(dev, spec.modes[0], e.coefficients(3)[0], 1.0);
  add_mode(dev, spec.modes[1], e.coefficients(3)[1], 1.0);
  for (std::size_t n = 0; n < g.size(); n += 37) CHECK(dev.phi[n] == doctest::Approx(d.now.phi[n]).epsilon(1e-12));

  // Explicit average agrees with the linear shortcut.
  std::vector<FourPotentialField> members;
  for (int i = 0; i < 5; ++i) members.push_back(e.member(i, 0).now);
  const FourPotentialField avg = ensemble_average(members), lin = e.mean(0, 5).now;
  CHECK(test::max_abs(test::diff(avg.phi, lin.phi)) < 1e-14);
  CHECK_THROWS_AS(e.mean(0, 7), ConfigError);
}

TEST_CASE("single member with zero amplitude reproduces the base run") {
  const GridSpec g({16, 16, 16}, 1.0, 0.5);
  const EnsembleSpec spec{{scalar_mode(g, 1, 0, 0.0)}, 1, 11, AmplitudeLaw::symmetric_gaussian};
  const Ensemble e(base_run(g, 2), spec, PhysicalConstants::natural());
  CHECK(same(e.member(0, 1).now, e.base(1).triplet.now));
  CHECK(same(e.mean(1).prev, e.base(1).triplet.prev));
}
