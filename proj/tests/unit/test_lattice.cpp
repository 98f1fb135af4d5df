#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "a4/oracles.hpp"
#include "../support.hpp"

using namespace a4;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec box(int n = 8, double h = 0.5) {
  return GridSpec({n, n, n}, h, 0.25 * h, {-1.0, 0.5, 2.0}, Boundary::absorbing);
}

// Max |f - g| over nodes at least `margin` layers from every face.
double interior_max(const ScalarField& f, const std::function<double(const Vec3&)>& g, int margin = 1) {
  const GridSpec& gr = f.grid();
  double m = 0.0;
  for (int k = margin; k < gr.nz() - margin; ++k)
    for (int j = margin; j < gr.ny() - margin; ++j)
      for (int i = margin; i < gr.nx() - margin; ++i)
        m = std::max(m, std::abs(f(i, j, k) - g(gr.position(i, j, k))));
  return m;
}

}  // namespace

TEST_CASE("grid construction enforces cell counts, spacing and CFL") {
  CHECK_THROWS_AS(GridSpec({3, 8, 8}, 1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(GridSpec({8, 8, 8}, 0.0, 0.5), ConfigError);
  CHECK_THROWS_AS(GridSpec({8, 8, 8}, 1.0, -0.1), ConfigError);
  CHECK_NOTHROW(GridSpec::create({8, 8, 8}, 1.0, 1.0 / std::sqrt(3.0), 1.0));
  try {
    GridSpec::create({8, 8, 8}, 1.0, 0.6, 1.0);
    FAIL("CFL violation accepted");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("CFL") != std::string::npos);
    CHECK(msg.find("0.57735") != std::string::npos);
  }
}

TEST_CASE("grid geometry: x-fastest indexing, extents and minimum image") {
  const GridSpec p({4, 5, 6}, 2.0, 0.5);
  CHECK(p.index(1, 0, 0) == 1);
  CHECK(p.index(0, 1, 0) == 4);
  CHECK(p.index(0, 0, 1) == 20);
  CHECK(p.extent(2) == 12.0);
  const Vec3 d = p.displacement({7.0, 0, 0}, {0.5, 0, 0});
  CHECK(d.x == doctest::Approx(-1.5));
  const GridSpec a({4, 5, 6}, 2.0, 0.5, {}, Boundary::absorbing);
  CHECK(a.extent(2) == 10.0);
  CHECK(a.contains({6.0, 8.0, 10.0}));
  CHECK_FALSE(a.contains({6.1, 0, 0}));
}

TEST_CASE("gradient: linear, constant and quadratic fields") {
  const GridSpec g = box();
  const VectorField lin = gradient(ScalarField::sample(g, [](const Vec3& x) { return x.x; }));
  CHECK(test::max_abs(test::diff(lin[0], ScalarField(g, 1.0))) < 1e-13);
  CHECK(test::max_abs(lin[1]) < 1e-13);
  CHECK(test::max_abs(lin[2]) < 1e-13);
  CHECK(test::max_abs(gradient(ScalarField(g, 3.7))) < 1e-13);
  const VectorField q = gradient(ScalarField::sample(g, [](const Vec3& x) { return x.x * x.x; }));
  CHECK(interior_max(q[0], [](const Vec3& x) { return 2 * x.x; }) < 1e-12);
  // The one-sided face stencil is also exact on quadratics.
  CHECK(interior_max(q[0], [](const Vec3& x) { return 2 * x.x; }, 0) < 1e-12);
}

TEST_CASE("divergence examples") {
  const GridSpec g = box();
  const VectorField r = VectorField::sample(g, [](const Vec3& x) { return x; });
  CHECK(interior_max(divergence(r), [](const Vec3&) { return 3.0; }, 0) < 1e-12);
  const VectorField rot = VectorField::sample(g, [](const Vec3& x) { return Vec3{-x.y, x.x, 0}; });
  CHECK(test::max_abs(divergence(rot)) < 1e-12);
}

TEST_CASE("divergence of a transverse wave converges at second order") {
  const Vec3 k{2 * kPi / 16, 2 * kPi / 16, 0};
  const Vec3 eps{1, -1, 0};
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const double h = 16.0 / n;
    const GridSpec g({n, n, 4}, h, 0.25 * h);
    const VectorField v = VectorField::sample(g, [&](const Vec3& x) { return eps * std::sin(dot(k, x)); });
    hs.push_back(h);
    errs.push_back(test::max_abs(divergence(v)));
  }
  // The continuum divergence is zero; each stencil's error is O(h^2 |k|^3) but
  // the two partial derivatives cancel exactly for this symmetric k.
  CHECK(errs.back() < 1e-12);
  const Vec3 k2{2 * kPi / 16, 4 * kPi / 16, 0};
  const Vec3 e2 = Vec3{2, -1, 0} / std::sqrt(5.0);
  hs.clear();
  errs.clear();
  for (int n : {16, 32, 64}) {
    const double h = 16.0 / n;
    const GridSpec g({n, n, 4}, h, 0.25 * h);
    const VectorField v = VectorField::sample(g, [&](const Vec3& x) { return e2 * std::sin(dot(k2, x)); });
    hs.push_back(h);
    errs.push_back(test::max_abs(divergence(v)));
  }
  CHECK(test::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("curl examples and curl of a gradient") {
  const GridSpec g = box();
  const VectorField v = VectorField::sample(g, [](const Vec3& x) { return Vec3{-x.y / 2, x.x / 2, 0}; });
  const VectorField c = curl(v);
  CHECK(test::max_abs(c[0]) < 1e-13);
  CHECK(test::max_abs(c[1]) < 1e-13);
  CHECK(interior_max(c[2], [](const Vec3&) { return 1.0; }, 0) < 1e-12);
  const ScalarField quad =
      ScalarField::sample(g, [](const Vec3& x) { return x.x * x.y + 3 * x.z * x.z - x.y * x.z + 2 * x.x; });
  CHECK(interior_max(curl(gradient(quad))[0], [](const Vec3&) { return 0.0; }, 2) < 1e-12);
  CHECK(test::max_abs(curl(gradient(quad))) < 1e-11);
}

TEST_CASE("divergence of a curl vanishes for quadratic fields") {
  const GridSpec g = box();
  const VectorField v = VectorField::sample(g, [](const Vec3& x) {
    return Vec3{x.y * x.z, x.x * x.x - x.z, x.y * x.y + x.x * x.z};
  });
  CHECK(interior_max(divergence(curl(v)), [](const Vec3&) { return 0.0; }, 2) < 1e-11);
}

TEST_CASE("curl of the flux-tube exterior potential vanishes at second order") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const double h = 16.0 / (n - 1);
    const GridSpec g({n, n, 5}, h, 0.25 * h, {}, Boundary::absorbing);
    const Vec3 axis_point{-10.0, 8.0, 0.0};  // outside the box
    const VectorField a =
        VectorField::sample(g, [&](const Vec3& x) { return solenoid_exterior(1.0, axis_point, {0, 0, 1}, x); });
    hs.push_back(h);
    errs.push_back(test::max_abs(curl(a)[2]));
  }
  CHECK(test::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("laplacian examples and stencil symbol") {
  const GridSpec g = box();
  const ScalarField r2 = ScalarField::sample(g, [](const Vec3& x) { return dot(x, x); });
  CHECK(interior_max(laplacian(r2), [](const Vec3&) { return 6.0; }) < 1e-11);
  CHECK(test::max_abs(laplacian(ScalarField(g, -2.5))) < 1e-12);

  const int n = 32;
  const double h = 0.5, k = 2 * kPi * 3 / (n * h);
  const GridSpec p({n, 4, 4}, h, 0.25 * h);
  const ScalarField f = ScalarField::sample(p, [&](const Vec3& x) { return std::cos(k * x.x); });
  const ScalarField lap = laplacian(f);
  const double symbol = -4.0 / (h * h) * std::pow(std::sin(k * h / 2), 2);
  CHECK(interior_max(lap, [&](const Vec3& x) { return symbol * std::cos(k * x.x); }, 0) < 1e-12);
  const double rel = std::abs(symbol + k * k) / (k * k);
  CHECK(rel == doctest::Approx(std::pow(k * h, 2) / 12).epsilon(0.02));
}

TEST_CASE("laplacian converges at second order on a smooth field") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const double L = 10.0, h = L / n;
    const double k = 2 * kPi / L;
    const GridSpec g({n, n, n}, h, 0.25 * h);
    const ScalarField f =
        ScalarField::sample(g, [&](const Vec3& x) { return std::sin(k * x.x) * std::cos(2 * k * x.y + k * x.z); });
    const ScalarField exact =
        ScalarField::sample(g, [&](const Vec3& x) { return -6 * k * k * std::sin(k * x.x) * std::cos(2 * k * x.y + k * x.z); });
    hs.push_back(h);
    errs.push_back(test::l2(test::diff(laplacian(f), exact)));
  }
  CHECK(test::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("periodic operators commute with lattice translations") {
  const GridSpec g({8, 6, 10}, 1.0, 0.5);
  ScalarField f(g);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::sin(0.37 * static_cast<double>(n * n % 97));
  auto shift = [&](const ScalarField& s) {
    ScalarField out(g);
    for (int k = 0; k < g.nz(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) out((i + 3) % g.nx(), (j + 1) % g.ny(), (k + 7) % g.nz()) = s(i, j, k);
    return out;
  };
  CHECK(laplacian(shift(f)) == shift(laplacian(f)));
  CHECK(gradient(shift(f))[1] == shift(gradient(f)[1]));
}

TEST_CASE("operators keep finite input finite and reject mixed grids") {
  const GridSpec g = box();
  const ScalarField f = ScalarField::sample(g, [](const Vec3& x) { return 1e200 * x.x; });
  CHECK(laplacian(f).all_finite());
  const GridSpec other({8, 8, 9}, 0.5, 0.125);
  CHECK_THROWS_AS(dalembertian(ScalarField(g), ScalarField(other), ScalarField(g), 0.1, 1.0), GridMismatch);
}

TEST_CASE("dalembertian of a linear-in-time harmonic field is zero") {
  const GridSpec g = box();
  auto at = [&](double t) { return ScalarField::sample(g, [&](const Vec3& x) { return (2 + 3 * t) * (x.x + x.y); }); };
  CHECK(test::max_abs(dalembertian(at(-0.1), at(0.0), at(0.1), 0.1, 1.0)) < 1e-10);
}

TEST_CASE("dalembertian of a sampled plane wave converges at second order") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    const double L = 16.0, h = L / n, dt = 0.5 * h, k = 2 * kPi * 2 / L;
    const GridSpec g({n, 4, 4}, h, dt);
    auto at = [&](double t) { return ScalarField::sample(g, [&](const Vec3& x) { return std::cos(k * x.x - k * t); }); };
    hs.push_back(h);
    errs.push_back(test::max_abs(dalembertian(at(-dt), at(0.0), at(dt), dt, 1.0)));
  }
  CHECK(test::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("trilinear interpolation") {
  const GridSpec g = box();
  const ScalarField f = ScalarField::sample(g, [](const Vec3& x) { return std::exp(x.x) * x.y; });
  CHECK(interpolate(f, g.position(3, 2, 5)) == f(3, 2, 5));
  const ScalarField lin = ScalarField::sample(g, [](const Vec3& x) { return 1.5 + 2 * x.x - x.y + 0.5 * x.z; });
  const Vec3 p{0.137, 1.91, 3.33};
  CHECK(interpolate(lin, p) == doctest::Approx(1.5 + 2 * p.x - p.y + 0.5 * p.z).epsilon(1e-14));
  const double h = g.h();
  const ScalarField q = ScalarField::sample(g, [](const Vec3& x) { return x.x * x.x; });
  const Vec3 centre = g.position(2, 2, 2) + Vec3{h / 2, h / 2, h / 2};
  CHECK(interpolate(q, centre) - centre.x * centre.x == doctest::Approx(h * h / 4));
  CHECK_THROWS_AS(interpolate(f, g.position(0, 0, 0) - Vec3{0.01, 0, 0}), DomainError);
  const GridSpec per({8, 8, 8}, 1.0, 0.5);
  const ScalarField pf = ScalarField::sample(per, [](const Vec3& x) { return std::cos(2 * kPi * x.x / 8); });
  CHECK(interpolate(pf, {8.0, 0, 0}) == doctest::Approx(pf(0, 0, 0)));
  CHECK(interpolate(pf, {-1.0, 0, 0}) == doctest::Approx(pf(7, 0, 0)));
}
