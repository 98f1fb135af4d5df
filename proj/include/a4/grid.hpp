#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "a4/vec3.hpp"

namespace a4 {

enum class UnitMode { natural, gaussian };

/// Speed of light and reduced Planck constant. Natural units set both to 1;
/// Gaussian units use CGS values (cm/s, erg s).
struct PhysicalConstants {
  double c = 1.0;
  double hbar = 1.0;
  UnitMode unit_mode = UnitMode::natural;

  static PhysicalConstants natural() { return {1.0, 1.0, UnitMode::natural}; }
  static PhysicalConstants gaussian() { return {2.99792458e10, 1.054571817e-27, UnitMode::gaussian}; }

  /// Throws ConfigError unless c > 0 and hbar > 0.
  void validate() const;

  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

enum class Boundary { periodic, absorbing };

std::string to_string(Boundary b);
std::string to_string(UnitMode m);

/// Uniform collocated lattice. Node (i, j, k) sits at origin + h * (i, j, k).
/// Periodic grids wrap node n onto node 0, so the period along an axis is n * h;
/// absorbing grids span [origin, origin + (n - 1) h].
class GridSpec {
 public:
  GridSpec() = default;

  /// Checks the lattice-only invariants (cell counts >= 4, h > 0, dt > 0).
  GridSpec(std::array<int, 3> n, double h, double dt, Vec3 origin = {},
           Boundary boundary = Boundary::periodic);

  /// As above, and additionally enforces the explicit-scheme stability bound
  /// c dt <= h / sqrt(3).
  static GridSpec create(std::array<int, 3> n, double h, double dt, double c, Vec3 origin = {},
                         Boundary boundary = Boundary::periodic);

  void check_cfl(double c) const;
  static double max_stable_dt(double h, double c);

  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  int n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  const std::array<int, 3>& dims() const { return n_; }
  double h() const { return h_; }
  double dt() const { return dt_; }
  const Vec3& origin() const { return origin_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }

  std::size_t size() const {
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]) *
           static_cast<std::size_t>(n_[2]);
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(k));
  }
  std::ptrdiff_t stride(int axis) const {
    return axis == 0 ? 1 : (axis == 1 ? n_[0] : static_cast<std::ptrdiff_t>(n_[0]) * n_[1]);
  }

  Vec3 position(int i, int j, int k) const {
    return {origin_.x + h_ * i, origin_.y + h_ * j, origin_.z + h_ * k};
  }

  /// Length of the domain along an axis: the period for periodic grids,
  /// (n - 1) h for absorbing ones.
  double extent(int axis) const;
  double max_extent() const;
  double cell_volume() const { return h_ * h_ * h_; }

  /// Displacement x - y. Periodic axes use the minimum image.
  Vec3 displacement(const Vec3& x, const Vec3& y) const;

  /// True when the point lies in the closed node box (always true on periodic grids).
  bool contains(const Vec3& x, double margin = 0.0) const;

  /// Same lattice, spacing and step; origin and boundary are ignored.
  bool same_lattice(const GridSpec& o) const { return n_ == o.n_ && h_ == o.h_ && dt_ == o.dt_; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::array<int, 3> n_{4, 4, 4};
  double h_ = 1.0;
  double dt_ = 0.5;
  Vec3 origin_{};
  Boundary boundary_ = Boundary::periodic;
};

}  // namespace a4
