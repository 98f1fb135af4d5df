#pragma once

// Second-order finite-difference stencils shared by the operators, the solver
// and the diagnostics, so that every consumer evaluates bit-identical values.

#include <array>
#include <cstddef>
#include <vector>

#include "a4/grid.hpp"

namespace a4::detail {

enum class StencilKind : unsigned char { centered, forward, backward };

/// Per-position neighbour offsets along one axis.
struct AxisStencil {
  std::ptrdiff_t stride = 1;
  std::vector<std::ptrdiff_t> minus;  // offset of the p-1 neighbour (wrapped on periodic grids)
  std::vector<std::ptrdiff_t> plus;   // offset of the p+1 neighbour
  std::vector<StencilKind> kind;
};

struct Stencils {
  std::array<AxisStencil, 3> axis;
  double inv2h = 0.0;
  double invh2 = 0.0;

  explicit Stencils(const GridSpec& g) {
    inv2h = 0.5 / g.h();
    invh2 = 1.0 / (g.h() * g.h());
    for (int a = 0; a < 3; ++a) {
      const int n = g.n(a);
      const std::ptrdiff_t s = g.stride(a);
      AxisStencil& st = axis[static_cast<std::size_t>(a)];
      st.stride = s;
      st.minus.assign(static_cast<std::size_t>(n), -s);
      st.plus.assign(static_cast<std::size_t>(n), s);
      st.kind.assign(static_cast<std::size_t>(n), StencilKind::centered);
      if (g.periodic()) {
        st.minus[0] = s * (n - 1);
        st.plus[static_cast<std::size_t>(n - 1)] = -s * (n - 1);
      } else {
        st.kind[0] = StencilKind::forward;
        st.kind[static_cast<std::size_t>(n - 1)] = StencilKind::backward;
      }
    }
  }
};

inline double d1_at(const double* f, std::size_t n, const AxisStencil& st, int p, double inv2h) {
  const auto q = static_cast<std::size_t>(p);
  switch (st.kind[q]) {
    case StencilKind::centered:
      return (f[n + st.plus[q]] - f[n + st.minus[q]]) * inv2h;
    case StencilKind::forward: {
      const std::ptrdiff_t s = st.stride;
      return (-3.0 * f[n] + 4.0 * f[n + s] - f[n + 2 * s]) * inv2h;
    }
    case StencilKind::backward: {
      const std::ptrdiff_t s = st.stride;
      return (3.0 * f[n] - 4.0 * f[n - s] + f[n - 2 * s]) * inv2h;
    }
  }
  return 0.0;
}

inline double d2_at(const double* f, std::size_t n, const AxisStencil& st, int p, double invh2) {
  const auto q = static_cast<std::size_t>(p);
  switch (st.kind[q]) {
    case StencilKind::centered:
      return (f[n + st.plus[q]] - 2.0 * f[n] + f[n + st.minus[q]]) * invh2;
    case StencilKind::forward: {
      const std::ptrdiff_t s = st.stride;
      return (2.0 * f[n] - 5.0 * f[n + s] + 4.0 * f[n + 2 * s] - f[n + 3 * s]) * invh2;
    }
    case StencilKind::backward: {
      const std::ptrdiff_t s = st.stride;
      return (2.0 * f[n] - 5.0 * f[n - s] + 4.0 * f[n - 2 * s] - f[n - 3 * s]) * invh2;
    }
  }
  return 0.0;
}

inline double laplacian_at(const double* f, std::size_t n, const Stencils& st, int i, int j, int k) {
  return d2_at(f, n, st.axis[0], i, st.invh2) + d2_at(f, n, st.axis[1], j, st.invh2) +
         d2_at(f, n, st.axis[2], k, st.invh2);
}

/// Derivative along `axis` at node (i, j, k).
inline double d1(const double* f, std::size_t n, const Stencils& st, int axis, int i, int j, int k) {
  const int p = axis == 0 ? i : (axis == 1 ? j : k);
  return d1_at(f, n, st.axis[static_cast<std::size_t>(axis)], p, st.inv2h);
}

}  // namespace a4::detail
