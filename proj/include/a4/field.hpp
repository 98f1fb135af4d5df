#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "a4/grid.hpp"

namespace a4 {

/// Real values on every lattice node, x-fastest.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double value = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  /// Samples f at every node position.
  static ScalarField sample(const GridSpec& grid, const std::function<double(const Vec3&)>& f);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool all_finite() const;
  bool is_zero() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& add_scaled(double s, const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

  /// Bitwise equality of lattice and values.
  friend bool operator==(const ScalarField& a, const ScalarField& b);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Three ScalarFields on one grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const GridSpec& grid);
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  static VectorField sample(const GridSpec& grid, const std::function<Vec3(const Vec3&)>& f);

  const GridSpec& grid() const { return c_[0].grid(); }
  ScalarField& operator[](int axis) { return c_[static_cast<std::size_t>(axis)]; }
  const ScalarField& operator[](int axis) const { return c_[static_cast<std::size_t>(axis)]; }
  Vec3 at(std::size_t n) const { return {c_[0][n], c_[1][n], c_[2][n]}; }

  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& add_scaled(double s, const VectorField& o);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  std::array<ScalarField, 3> c_;
};

/// A^mu = (phi, A) sampled at one time level.
struct FourPotentialField {
  ScalarField phi;
  VectorField a;
  double time = 0.0;

  FourPotentialField() = default;
  explicit FourPotentialField(const GridSpec& grid, double t = 0.0);
  FourPotentialField(ScalarField phi, VectorField a, double t);

  const GridSpec& grid() const { return phi.grid(); }
  /// Component mu: 0 = phi, 1..3 = A_x..A_z.
  ScalarField& component(int mu) { return mu == 0 ? phi : a[mu - 1]; }
  const ScalarField& component(int mu) const { return mu == 0 ? phi : a[mu - 1]; }

  FourPotentialField& operator+=(const FourPotentialField& o);
  FourPotentialField& add_scaled(double s, const FourPotentialField& o);

  friend bool operator==(const FourPotentialField&, const FourPotentialField&) = default;
};

/// j^mu source data (rho, j) at one time level; j is the plain current density
/// (the four-vector's spatial part is j / c).
struct FourCurrentField {
  ScalarField rho;
  VectorField j;
  double time = 0.0;

  FourCurrentField() = default;
  explicit FourCurrentField(const GridSpec& grid, double t = 0.0);

  const GridSpec& grid() const { return rho.grid(); }
  FourCurrentField& operator+=(const FourCurrentField& o);
};

/// Electric and magnetic field vectors derived from potentials.
struct EMField {
  VectorField e;
  VectorField h;
  double time = 0.0;

  const GridSpec& grid() const { return e.grid(); }
};

/// Three consecutive time levels (n-1, n, n+1) of a potential.
struct PotentialTriplet {
  FourPotentialField prev;
  FourPotentialField now;
  FourPotentialField next;
};

inline const char* component_name(int mu) {
  static constexpr const char* names[4] = {"phi", "Ax", "Ay", "Az"};
  return names[mu];
}

void require_same_lattice(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace a4
