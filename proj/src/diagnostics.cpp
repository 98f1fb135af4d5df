#include "a4/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "a4/operators.hpp"
#include "a4/solver.hpp"
#include "stencil.hpp"

namespace a4 {

namespace {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 128) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

bool counted(const GridSpec& g, bool interior_only, int i, int j, int k) {
  if (!interior_only || g.periodic()) return true;
  constexpr int m = 2;
  return i >= m && j >= m && k >= m && i < g.nx() - m && j < g.ny() - m && k < g.nz() - m;
}

template <class Magnitude2>
Norms reduce(const GridSpec& g, bool interior_only, Magnitude2&& mag2) {
  std::vector<double> squares;
  squares.reserve(g.size());
  double linf2 = 0.0;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!counted(g, interior_only, i, j, k)) continue;
        const double s = mag2(g.index(i, j, k));
        squares.push_back(s);
        linf2 = std::max(linf2, s);
      }
  const double sum = pairwise_sum(squares.data(), squares.size());
  return {std::sqrt(sum * g.cell_volume()), std::sqrt(linf2)};
}

void require_triplet(const FourPotentialField& prev, const FourPotentialField& now, const FourPotentialField& next) {
  require_same_lattice(now.grid(), prev.grid(), "triplet");
  require_same_lattice(now.grid(), next.grid(), "triplet");
}

}  // namespace

Norms norms(const ScalarField& f, bool interior_only) {
  return reduce(f.grid(), interior_only, [&](std::size_t n) { return f[n] * f[n]; });
}

Norms norms(const VectorField& v, bool interior_only) {
  return reduce(v.grid(), interior_only, [&](std::size_t n) {
    return v[0][n] * v[0][n] + v[1][n] * v[1][n] + v[2][n] * v[2][n];
  });
}

ScalarField lorentz_residual(const FourPotentialField& prev, const FourPotentialField& now,
                             const FourPotentialField& next, double dt, double c) {
  require_triplet(prev, now, next);
  ScalarField out = divergence(now.a);
  const double s = 1.0 / (2.0 * c * dt);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += (next.phi[n] - prev.phi[n]) * s;
  return out;
}

EMField derive_fields(const FourPotentialField& prev, const FourPotentialField& now,
                      const FourPotentialField& next, double dt, double c) {
  require_triplet(prev, now, next);
  EMField em;
  em.time = now.time;
  em.e = gradient(now.phi);
  const double s = 1.0 / (2.0 * c * dt);
  for (int a = 0; a < 3; ++a) {
    ScalarField& e = em.e[a];
    for (std::size_t n = 0; n < e.size(); ++n) e[n] = -(next.a[a][n] - prev.a[a][n]) * s - e[n];
  }
  em.h = curl(now.a);
  return em;
}

MaxwellResiduals maxwell_residuals(const EMField& prev, const EMField& now, const EMField& next,
                                   const FourCurrentField& source, double dt, double c) {
  require_same_lattice(now.grid(), prev.grid(), "maxwell_residuals");
  require_same_lattice(now.grid(), next.grid(), "maxwell_residuals");
  require_same_lattice(now.grid(), source.grid(), "maxwell_residuals");
  const double four_pi = 4.0 * std::numbers::pi;
  const double s = 1.0 / (2.0 * c * dt);
  MaxwellResiduals r;
  r.gauss_e = divergence(now.e);
  r.gauss_e.add_scaled(-four_pi, source.rho);
  r.ampere = curl(now.h);
  r.faraday = curl(now.e);
  for (int a = 0; a < 3; ++a) {
    for (std::size_t n = 0; n < r.ampere[a].size(); ++n) {
      r.ampere[a][n] -= (next.e[a][n] - prev.e[a][n]) * s + four_pi / c * source.j[a][n];
      r.faraday[a][n] += (next.h[a][n] - prev.h[a][n]) * s;
    }
  }
  r.gauss_h = divergence(now.h);
  return r;
}

MaxwellResiduals maxwell_residuals(const FourPotentialField& prev, const FourPotentialField& now,
                                   const FourPotentialField& next, const FourCurrentField& source, double dt,
                                   double c) {
  require_triplet(prev, now, next);
  require_same_lattice(now.grid(), source.grid(), "maxwell_residuals");
  const GridSpec& g = now.grid();
  const double four_pi = 4.0 * std::numbers::pi;
  const EMField em = derive_fields(prev, now, next, dt, c);

  // dE/dt and dH/dt from the triplet.
  ScalarField phi_t(g);
  VectorField a_t(g);
  VectorField a_tt(g);
  const double inv2dt = 1.0 / (2.0 * dt);
  const double invdt2 = 1.0 / (dt * dt);
  for (std::size_t n = 0; n < g.size(); ++n) phi_t[n] = (next.phi[n] - prev.phi[n]) * inv2dt;
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < g.size(); ++n) {
      a_t[a][n] = (next.a[a][n] - prev.a[a][n]) * inv2dt;
      a_tt[a][n] = (next.a[a][n] - 2.0 * now.a[a][n] + prev.a[a][n]) * invdt2;
    }
  VectorField e_t = gradient(phi_t);
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < g.size(); ++n) e_t[a][n] = -a_tt[a][n] / c - e_t[a][n];
  const VectorField h_t = curl(a_t);

  MaxwellResiduals r;
  r.gauss_e = divergence(em.e);
  r.gauss_e.add_scaled(-four_pi, source.rho);
  r.ampere = curl(em.h);
  r.faraday = curl(em.e);
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < g.size(); ++n) {
      r.ampere[a][n] -= e_t[a][n] / c + four_pi / c * source.j[a][n];
      r.faraday[a][n] += h_t[a][n] / c;
    }
  r.gauss_h = divergence(em.h);
  return r;
}

FourResidual dalembert_residual(const FourPotentialField& prev, const FourPotentialField& now,
                                const FourPotentialField& next, const FourCurrentField& source, double dt,
                                double c) {
  require_triplet(prev, now, next);
  require_same_lattice(now.grid(), source.grid(), "dalembert_residual");
  FourResidual r;
  for (int mu = 0; mu < 4; ++mu) {
    r[mu] = dalembertian(prev.component(mu), now.component(mu), next.component(mu), dt, c);
    r[mu].add_scaled(-source_factor(mu, c), source_component(source, mu));
  }
  return r;
}

FourResidual lorentz_gradient(const FourPotentialField& prev, const FourPotentialField& now,
                              const FourPotentialField& next, double dt, double c) {
  require_triplet(prev, now, next);
  const GridSpec& g = now.grid();
  const ScalarField lorentz = lorentz_residual(prev, now, next, dt, c);
  VectorField a_t(g);
  const double inv2dt = 1.0 / (2.0 * dt);
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < g.size(); ++n) a_t[a][n] = (next.a[a][n] - prev.a[a][n]) * inv2dt;
  const ScalarField div_at = divergence(a_t);

  FourResidual r;
  r[0] = ScalarField(g);
  const double inv_cdt2 = 1.0 / (c * dt * dt);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double l_t = (next.phi[n] - 2.0 * now.phi[n] + prev.phi[n]) * inv_cdt2 + div_at[n];
    r[0][n] = l_t / c;
  }
  for (int a = 0; a < 3; ++a) {
    r[a + 1] = partial(lorentz, a);
    r[a + 1] *= -1.0;
  }
  return r;
}

FourResidual potential_maxwell_residual(const FourPotentialField& prev, const FourPotentialField& now,
                                        const FourPotentialField& next, const FourCurrentField& source, double dt,
                                        double c) {
  require_triplet(prev, now, next);
  require_same_lattice(now.grid(), source.grid(), "potential_maxwell_residual");
  const GridSpec& g = now.grid();
  const detail::Stencils st(g);
  const double four_pi = 4.0 * std::numbers::pi;
  const double inv_cdt2 = 1.0 / ((c * dt) * (c * dt));
  const double inv2dt = 1.0 / (2.0 * dt);
  const double invdt2 = 1.0 / (dt * dt);

  // Lorentz residual at the middle level; its spatial gradient enters the A rows.
  ScalarField lorentz(g);
  {
    const double* ax = now.a[0].data();
    const double* ay = now.a[1].data();
    const double* az = now.a[2].data();
    for_each_node(g, [&](int i, int j, int k, std::size_t n) {
      const double div = detail::d1(ax, n, st, 0, i, j, k) + detail::d1(ay, n, st, 1, i, j, k) +
                         detail::d1(az, n, st, 2, i, j, k);
      lorentz[n] = (next.phi[n] - prev.phi[n]) * inv2dt / c + div;
    });
  }

  FourResidual r;
  for (int mu = 0; mu < 4; ++mu) r[mu] = ScalarField(g);
  const double* dax[3] = {next.a[0].data(), next.a[1].data(), next.a[2].data()};
  const double* pax[3] = {prev.a[0].data(), prev.a[1].data(), prev.a[2].data()};
  const double* lp = lorentz.data();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    // d/dt div A at the middle level, from centred differences of the neighbours.
    double div_at = 0.0;
    for (int a = 0; a < 3; ++a) {
      div_at += (detail::d1(dax[a], n, st, a, i, j, k) - detail::d1(pax[a], n, st, a, i, j, k)) * inv2dt;
    }
    const double phi_tt = (next.phi[n] - 2.0 * now.phi[n] + prev.phi[n]) * invdt2;
    const double box_phi = phi_tt / (c * c) - detail::laplacian_at(now.phi.data(), n, st, i, j, k);
    const double d0_l = (phi_tt / c + div_at) / c;
    r[0][n] = box_phi - d0_l - four_pi * source.rho[n];
    for (int a = 0; a < 3; ++a) {
      const ScalarField& ap = prev.a[a];
      const ScalarField& am = now.a[a];
      const ScalarField& an = next.a[a];
      const double box_a = (an[n] - 2.0 * am[n] + ap[n]) * inv_cdt2 - detail::laplacian_at(am.data(), n, st, i, j, k);
      const double di_l = detail::d1(lp, n, st, a, i, j, k);
      r[a + 1][n] = box_a + di_l - four_pi / c * source.j[a][n];
    }
  });
  return r;
}

double energy_surrogate(const FourPotentialField& prev, const FourPotentialField& now,
                        const FourPotentialField& next, double dt, double c) {
  require_triplet(prev, now, next);
  const GridSpec& g = now.grid();
  const detail::Stencils st(g);
  std::vector<double> density(g.size());
  const double s = 1.0 / (2.0 * dt * c);
  double total = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const double* f = now.component(mu).data();
    const ScalarField& fp = prev.component(mu);
    const ScalarField& fn = next.component(mu);
    for (int k = 0; k < g.nz(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          const std::size_t n = g.index(i, j, k);
          const double ft = (fn[n] - fp[n]) * s;
          const double gx = detail::d1(f, n, st, 0, i, j, k);
          const double gy = detail::d1(f, n, st, 1, i, j, k);
          const double gz = detail::d1(f, n, st, 2, i, j, k);
          density[n] = ft * ft + gx * gx + gy * gy + gz * gz;
        }
    total += pairwise_sum(density.data(), density.size());
  }
  return total * g.cell_volume();
}

DiagnosticRecord compute_record(const FourPotentialField& prev, const FourPotentialField& now,
                                const FourPotentialField& next, const FourCurrentField& source, double dt,
                                double c, long step, bool interior_only) {
  DiagnosticRecord rec;
  rec.step = step;
  rec.time = now.time;
  rec.lorentz = norms(lorentz_residual(prev, now, next, dt, c), interior_only);
  const MaxwellResiduals mx = maxwell_residuals(prev, now, next, source, dt, c);
  rec.gauss_e = norms(mx.gauss_e, interior_only);
  rec.ampere = norms(mx.ampere, interior_only);
  rec.gauss_h = norms(mx.gauss_h, interior_only);
  rec.faraday = norms(mx.faraday, interior_only);
  const FourResidual dr = dalembert_residual(prev, now, next, source, dt, c);
  for (int mu = 0; mu < 4; ++mu) rec.dalembert[static_cast<std::size_t>(mu)] = norms(dr[mu], interior_only);
  rec.energy = energy_surrogate(prev, now, next, dt, c);
  return rec;
}

}  // namespace a4
