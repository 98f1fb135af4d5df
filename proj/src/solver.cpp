#include "a4/solver.hpp"

#include <cmath>
#include <numbers>

#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "stencil.hpp"

namespace a4 {

namespace {

bool is_face(const GridSpec& g, int i, int j, int k) {
  return i == 0 || j == 0 || k == 0 || i == g.nx() - 1 || j == g.ny() - 1 || k == g.nz() - 1;
}

struct Monopole {
  double charge = 0.0;
  Vec3 center{};
};

Monopole monopole(const ScalarField& s, double scale) {
  const GridSpec& g = s.grid();
  double q = 0.0;
  double w = 0.0;
  Vec3 m{};
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double v = s(i, j, k);
        if (v == 0.0) continue;
        q += v;
        w += std::abs(v);
        m += std::abs(v) * g.position(i, j, k);
      }
  Monopole out;
  out.charge = q * scale * g.cell_volume();
  out.center = w > 0.0 ? m / w : g.origin();
  return out;
}

void mur_faces(const GridSpec& g, const double* now, double* next, double r) {
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  auto mur = [&](std::size_t face, std::size_t inner) { next[face] = now[inner] + r * (next[inner] - now[face]); };
  // x faces (j, k interior), then y faces (k interior, all i), then z faces (all i, j):
  // every inner neighbour is final before it is read.
  for (int k = 1; k < nz - 1; ++k)
    for (int j = 1; j < ny - 1; ++j) {
      mur(g.index(0, j, k), g.index(1, j, k));
      mur(g.index(nx - 1, j, k), g.index(nx - 2, j, k));
    }
  for (int k = 1; k < nz - 1; ++k)
    for (int i = 0; i < nx; ++i) {
      mur(g.index(i, 0, k), g.index(i, 1, k));
      mur(g.index(i, ny - 1, k), g.index(i, ny - 2, k));
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mur(g.index(i, j, 0), g.index(i, j, 1));
      mur(g.index(i, j, nz - 1), g.index(i, j, nz - 2));
    }
}

void far_field_faces(const GridSpec& g, double* next, const Monopole& mp) {
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!is_face(g, i, j, k)) continue;
        const double r = norm(g.position(i, j, k) - mp.center);
        next[g.index(i, j, k)] = mp.charge == 0.0 ? 0.0 : mp.charge / r;
      }
}

}  // namespace

BoundaryKind default_boundary(const GridSpec& g) {
  return g.periodic() ? BoundaryKind::periodic : BoundaryKind::mur_first_order;
}

double relaxation_damping(const GridSpec& g, const PhysicalConstants& k) {
  return 2.0 * std::numbers::pi * k.c / g.max_extent();
}

SolverState init_state(const GridSpec& grid, const FourPotentialField& value, const FourPotentialField& rate,
                       const FourCurrentField& source, const PhysicalConstants& constants,
                       BoundaryKind boundary, double damping) {
  constants.validate();
  grid.check_cfl(constants.c);
  require_same_lattice(grid, value.grid(), "init_state value");
  require_same_lattice(grid, rate.grid(), "init_state rate");
  require_same_lattice(grid, source.grid(), "init_state source");
  if (boundary == BoundaryKind::periodic && !grid.periodic())
    throw ConfigError("periodic boundary kind requires a periodic grid");
  if (boundary != BoundaryKind::periodic && grid.periodic())
    throw ConfigError("absorbing boundary kinds require an absorbing grid");
  if (!(damping >= 0.0)) throw ConfigError("damping must be non-negative");

  const double dt = grid.dt();
  const double c = constants.c;
  SolverState s;
  s.grid = grid;
  s.constants = constants;
  s.boundary = boundary;
  s.damping = damping;
  s.now = value;
  s.prev = FourPotentialField(grid, value.time - dt);
  for (int mu = 0; mu < 4; ++mu) {
    const ScalarField lap = laplacian(value.component(mu));
    const ScalarField& f = value.component(mu);
    const ScalarField& fdot = rate.component(mu);
    const ScalarField& src = source_component(source, mu);
    const double sf = source_factor(mu, c);
    ScalarField& back = s.prev.component(mu);
    for (std::size_t n = 0; n < f.size(); ++n) {
      const double accel = c * c * (lap[n] + sf * src[n]) - damping * fdot[n];
      back[n] = f[n] - dt * fdot[n] + 0.5 * dt * dt * accel;
    }
  }
  return s;
}

SolverState step(SolverState state, const FourCurrentField& current) {
  const GridSpec& g = state.grid;
  require_same_lattice(g, current.grid(), "step current");
  const detail::Stencils st(g);
  const double c = state.constants.c;
  const double dt = g.dt();
  const double cdt2 = (c * dt) * (c * dt);
  const double gdt = state.damping * dt;
  const double mur_r = (c * dt - g.h()) / (c * dt + g.h());
  const bool periodic = state.boundary == BoundaryKind::periodic;

  // The old back level becomes the new front level's storage.
  FourPotentialField next = std::move(state.prev);
  next.time = state.now.time + dt;

  for (int mu = 0; mu < 4; ++mu) {
    const double* p = next.component(mu).data();  // still holds level n-1
    const double* m = state.now.component(mu).data();
    const double* src = source_component(current, mu).data();
    double* out = next.component(mu).data();
    const double sf = source_factor(mu, c);
    const int i_lo = periodic ? 0 : 1;
    const int i_hi = periodic ? g.nx() : g.nx() - 1;
    const int j_lo = periodic ? 0 : 1;
    const int j_hi = periodic ? g.ny() : g.ny() - 1;
    const int k_lo = periodic ? 0 : 1;
    const int k_hi = periodic ? g.nz() : g.nz() - 1;
    parallel_for(k_hi - k_lo, [&](long b, long e) {
      for (int k = k_lo + static_cast<int>(b); k < k_lo + static_cast<int>(e); ++k)
        for (int j = j_lo; j < j_hi; ++j)
          for (int i = i_lo; i < i_hi; ++i) {
            const std::size_t n = g.index(i, j, k);
            const double lap = detail::laplacian_at(m, n, st, i, j, k);
            out[n] = 2.0 * m[n] - p[n] + cdt2 * (lap + sf * src[n]) - gdt * (m[n] - p[n]);
          }
    });
    if (state.boundary == BoundaryKind::mur_first_order) {
      mur_faces(g, m, out, mur_r);
    } else if (state.boundary == BoundaryKind::far_field) {
      far_field_faces(g, out, monopole(source_component(current, mu), sf / (4.0 * std::numbers::pi)));
    }
  }

  for (int mu = 0; mu < 4; ++mu) {
    for (double v : next.component(mu).values()) {
      if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold)
        throw DivergenceError(component_name(mu), state.step_index + 1, v);
    }
  }

  state.prev = std::move(state.now);
  state.now = std::move(next);
  state.step_index += 1;
  return state;
}

}  // namespace a4
