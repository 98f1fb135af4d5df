#include "a4/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "a4/error.hpp"

namespace a4 {

void require_same_lattice(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": operands live on different grids");
}

ScalarField::ScalarField(const GridSpec& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("field has " + std::to_string(values_.size()) + " values, grid expects " +
                       std::to_string(grid_.size()));
  }
}

ScalarField ScalarField::sample(const GridSpec& grid, const std::function<double(const Vec3&)>& f) {
  ScalarField out(grid);
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) out(i, j, k) = f(grid.position(i, j, k));
  return out;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool ScalarField::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_lattice(grid_, o.grid_, "ScalarField +=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_lattice(grid_, o.grid_, "ScalarField -=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::add_scaled(double s, const ScalarField& o) {
  require_same_lattice(grid_, o.grid_, "ScalarField add_scaled");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += s * o.values_[n];
  return *this;
}

bool operator==(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid_ == b.grid_) || a.values_.size() != b.values_.size()) return false;
  // Bitwise: distinguishes -0.0 from 0.0 and compares NaN payloads.
  return a.values_.empty() ||
         std::memcmp(a.values_.data(), b.values_.data(), a.values_.size() * sizeof(double)) == 0;
}

VectorField::VectorField(const GridSpec& grid) : c_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : c_{std::move(x), std::move(y), std::move(z)} {
  require_same_lattice(c_[0].grid(), c_[1].grid(), "VectorField");
  require_same_lattice(c_[0].grid(), c_[2].grid(), "VectorField");
}

VectorField VectorField::sample(const GridSpec& grid, const std::function<Vec3(const Vec3&)>& f) {
  VectorField out(grid);
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const Vec3 v = f(grid.position(i, j, k));
        const std::size_t n = grid.index(i, j, k);
        out.c_[0][n] = v.x;
        out.c_[1][n] = v.y;
        out.c_[2][n] = v.z;
      }
  return out;
}

bool VectorField::all_finite() const {
  return c_[0].all_finite() && c_[1].all_finite() && c_[2].all_finite();
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int a = 0; a < 3; ++a) (*this)[a] += o[a];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int a = 0; a < 3; ++a) (*this)[a] -= o[a];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

VectorField& VectorField::add_scaled(double s, const VectorField& o) {
  for (int a = 0; a < 3; ++a) (*this)[a].add_scaled(s, o[a]);
  return *this;
}

FourPotentialField::FourPotentialField(const GridSpec& grid, double t) : phi(grid), a(grid), time(t) {}

FourPotentialField::FourPotentialField(ScalarField phi_, VectorField a_, double t)
    : phi(std::move(phi_)), a(std::move(a_)), time(t) {
  require_same_lattice(phi.grid(), a.grid(), "FourPotentialField");
}

FourPotentialField& FourPotentialField::operator+=(const FourPotentialField& o) {
  phi += o.phi;
  a += o.a;
  return *this;
}

FourPotentialField& FourPotentialField::add_scaled(double s, const FourPotentialField& o) {
  phi.add_scaled(s, o.phi);
  a.add_scaled(s, o.a);
  return *this;
}

FourCurrentField::FourCurrentField(const GridSpec& grid, double t) : rho(grid), j(grid), time(t) {}

FourCurrentField& FourCurrentField::operator+=(const FourCurrentField& o) {
  rho += o.rho;
  j += o.j;
  return *this;
}

}  // namespace a4
