#include "a4/operators.hpp"

#include <algorithm>
#include <cmath>

#include "a4/error.hpp"
#include "stencil.hpp"

namespace a4 {

using detail::Stencils;

ScalarField partial(const ScalarField& f, int axis) {
  const GridSpec& g = f.grid();
  const Stencils st(g);
  ScalarField out(g);
  const double* in = f.data();
  double* o = out.data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) { o[n] = detail::d1(in, n, st, axis, i, j, k); });
  return out;
}

VectorField gradient(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const Stencils st(g);
  VectorField out(g);
  const double* in = f.data();
  double* ox = out[0].data();
  double* oy = out[1].data();
  double* oz = out[2].data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    ox[n] = detail::d1(in, n, st, 0, i, j, k);
    oy[n] = detail::d1(in, n, st, 1, i, j, k);
    oz[n] = detail::d1(in, n, st, 2, i, j, k);
  });
  return out;
}

ScalarField divergence(const VectorField& v) {
  const GridSpec& g = v.grid();
  const Stencils st(g);
  ScalarField out(g);
  const double* vx = v[0].data();
  const double* vy = v[1].data();
  const double* vz = v[2].data();
  double* o = out.data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    o[n] = detail::d1(vx, n, st, 0, i, j, k) + detail::d1(vy, n, st, 1, i, j, k) +
           detail::d1(vz, n, st, 2, i, j, k);
  });
  return out;
}

VectorField curl(const VectorField& v) {
  const GridSpec& g = v.grid();
  const Stencils st(g);
  VectorField out(g);
  const double* vx = v[0].data();
  const double* vy = v[1].data();
  const double* vz = v[2].data();
  double* ox = out[0].data();
  double* oy = out[1].data();
  double* oz = out[2].data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    ox[n] = detail::d1(vz, n, st, 1, i, j, k) - detail::d1(vy, n, st, 2, i, j, k);
    oy[n] = detail::d1(vx, n, st, 2, i, j, k) - detail::d1(vz, n, st, 0, i, j, k);
    oz[n] = detail::d1(vy, n, st, 0, i, j, k) - detail::d1(vx, n, st, 1, i, j, k);
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const Stencils st(g);
  ScalarField out(g);
  const double* in = f.data();
  double* o = out.data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) { o[n] = detail::laplacian_at(in, n, st, i, j, k); });
  return out;
}

VectorField laplacian_vec(const VectorField& v) { return {laplacian(v[0]), laplacian(v[1]), laplacian(v[2])}; }

ScalarField dalembertian(const ScalarField& f_prev, const ScalarField& f_now, const ScalarField& f_next,
                         double dt, double c) {
  const GridSpec& g = f_now.grid();
  require_same_lattice(g, f_prev.grid(), "dalembertian");
  require_same_lattice(g, f_next.grid(), "dalembertian");
  const Stencils st(g);
  const double inv_cdt2 = 1.0 / ((c * dt) * (c * dt));
  ScalarField out(g);
  const double* p = f_prev.data();
  const double* m = f_now.data();
  const double* x = f_next.data();
  double* o = out.data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    o[n] = (x[n] - 2.0 * m[n] + p[n]) * inv_cdt2 - detail::laplacian_at(m, n, st, i, j, k);
  });
  return out;
}

namespace {

struct Corner {
  std::array<int, 3> lo;
  std::array<int, 3> hi;
  std::array<double, 3> t;
};

Corner locate(const GridSpec& g, const Vec3& x) {
  Corner c{};
  for (int a = 0; a < 3; ++a) {
    const int n = g.n(a);
    double u = (x[a] - g.origin()[a]) / g.h();
    const auto s = static_cast<std::size_t>(a);
    if (g.periodic()) {
      u -= n * std::floor(u / n);
      int i0 = static_cast<int>(std::floor(u));
      if (i0 >= n) i0 = n - 1;
      c.lo[s] = i0;
      c.hi[s] = (i0 + 1) % n;
      c.t[s] = u - i0;
    } else {
      const double tol = 1e-9 * (n - 1);
      if (!(u >= -tol && u <= (n - 1) + tol)) {
        throw DomainError("interpolation point outside the grid domain (axis " + std::to_string(a) +
                          ", coordinate " + std::to_string(x[a]) + ")");
      }
      u = std::clamp(u, 0.0, static_cast<double>(n - 1));
      int i0 = static_cast<int>(std::floor(u));
      if (i0 > n - 2) i0 = n - 2;
      c.lo[s] = i0;
      c.hi[s] = i0 + 1;
      c.t[s] = u - i0;
    }
  }
  return c;
}

double blend(const ScalarField& f, const Corner& c) {
  const auto& [i0, j0, k0] = c.lo;
  const auto& [i1, j1, k1] = c.hi;
  const auto& [tx, ty, tz] = c.t;
  const double c00 = (1.0 - tx) * f(i0, j0, k0) + tx * f(i1, j0, k0);
  const double c10 = (1.0 - tx) * f(i0, j1, k0) + tx * f(i1, j1, k0);
  const double c01 = (1.0 - tx) * f(i0, j0, k1) + tx * f(i1, j0, k1);
  const double c11 = (1.0 - tx) * f(i0, j1, k1) + tx * f(i1, j1, k1);
  const double c0 = (1.0 - ty) * c00 + ty * c10;
  const double c1 = (1.0 - ty) * c01 + ty * c11;
  return (1.0 - tz) * c0 + tz * c1;
}

}  // namespace

double interpolate(const ScalarField& f, const Vec3& x) { return blend(f, locate(f.grid(), x)); }

Vec3 interpolate(const VectorField& v, const Vec3& x) {
  const Corner c = locate(v.grid(), x);
  return {blend(v[0], c), blend(v[1], c), blend(v[2], c)};
}

}  // namespace a4
