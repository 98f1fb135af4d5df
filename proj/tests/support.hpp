#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's own oracles or norms.

#include <cmath>
#include <numbers>
#include <string>

#include "a4/field.hpp"

namespace a4::test {

/// Potential of a normalised Gaussian charge: q erf(r / (sqrt2 sigma)) / r.
inline double erf_coulomb(double q, double sigma, double r) {
  if (r < 1e-8 * sigma) return q * std::sqrt(2.0 / std::numbers::pi) / sigma;
  return q * std::erf(r / (std::sqrt(2.0) * sigma)) / r;
}

/// Radial field of the same charge.
inline double erf_coulomb_field(double q, double sigma, double r) {
  const double s2 = std::sqrt(2.0) * sigma;
  return q * (std::erf(r / s2) / (r * r) - 2.0 / (std::sqrt(std::numbers::pi) * s2) * std::exp(-r * r / (s2 * s2)) / r);
}

inline double sum_squares(const ScalarField& f) {
  long double s = 0.0L;
  for (double v : f.values()) s += static_cast<long double>(v) * v;
  return static_cast<double>(s);
}

inline double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const VectorField& v) { return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])}); }

/// sqrt(sum f^2 h^3) over all nodes.
inline double l2(const ScalarField& f) { return std::sqrt(sum_squares(f) * f.grid().cell_volume()); }
inline double l2(const VectorField& v) {
  return std::sqrt((sum_squares(v[0]) + sum_squares(v[1]) + sum_squares(v[2])) * v.grid().cell_volume());
}

inline ScalarField diff(const ScalarField& a, const ScalarField& b) {
  ScalarField d = a;
  for (std::size_t n = 0; n < d.size(); ++n) d[n] -= b[n];
  return d;
}

/// Least-squares slope of log y against log x.
template <class V>
double loglog_slope(const V& x, const V& y) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace a4::test
