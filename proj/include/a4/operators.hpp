#pragma once

#include "a4/field.hpp"

namespace a4 {

// Discrete differential operators on the collocated lattice. All use
// second-order centred differences; on absorbing grids the face nodes fall
// back to second-order one-sided formulas, on periodic grids they wrap.

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian_vec(const VectorField& v);

/// Partial derivative along one axis.
ScalarField partial(const ScalarField& f, int axis);

/// (f_next - 2 f_now + f_prev) / (c dt)^2 - laplacian(f_now)
ScalarField dalembertian(const ScalarField& f_prev, const ScalarField& f_now, const ScalarField& f_next,
                         double dt, double c);

/// Trilinear interpolation. Exact for fields linear in each coordinate.
/// Throws DomainError outside the node box of an absorbing grid.
double interpolate(const ScalarField& f, const Vec3& x);
Vec3 interpolate(const VectorField& v, const Vec3& x);

/// Node-loop helper: body(i, j, k, linear index), parallel over z-slabs.
template <class Body>
void for_each_node(const GridSpec& g, Body&& body);

}  // namespace a4

#include "a4/parallel.hpp"

template <class Body>
void a4::for_each_node(const GridSpec& g, Body&& body) {
  parallel_for(g.nz(), [&](long k0, long k1) {
    for (int k = static_cast<int>(k0); k < static_cast<int>(k1); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) body(i, j, k, g.index(i, j, k));
  });
}
