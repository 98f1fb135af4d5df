#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "a4/field.hpp"
#include "a4/oracles.hpp"

namespace a4 {

// Ensembles of microscopic solutions that violate the Lorentz condition member
// by member but satisfy it on average.
//
// The averaging <.> is realised classically: each member is a solved base run
// plus random multiples of homogeneous modes (solutions of D B = 0 with
// d_mu B^mu != 0, e.g. scalar photons). The coefficient laws have zero mean, so
// the mean potential tends to the base run.
//
// Lorentz-violating members are built from such modes and NOT from gauge
// transformations: adding d^mu chi with D chi = 0 leaves d_mu A^mu unchanged.

/// chi(x, t) = sum amplitude cos(k.x - c|k| t + phase); every term satisfies D chi = 0.
struct GaugeTerm {
  double amplitude = 0.0;
  Vec3 k{};
  double phase = 0.0;
};

struct GaugeFunction {
  std::vector<GaugeTerm> terms;

  double value(const Vec3& x, double t, double c) const;
  Vec3 gradient(const Vec3& x, double t, double c) const;
  double rate(const Vec3& x, double t, double c) const;

  /// n_terms random terms with wave vectors commensurate with the grid's period
  /// (integer mode numbers in [-max_mode, max_mode]) and amplitudes in [-amplitude, amplitude].
  static GaugeFunction random(std::uint64_t seed, int n_terms, const GridSpec& grid, int max_mode, double amplitude);
};

/// A -> A + grad chi, phi -> phi - (1/c) d chi/dt, which leaves E and H unchanged.
FourPotentialField apply_gauge(const FourPotentialField& f, const GaugeFunction& chi, double c);
FourPotentialField apply_gauge(const FourPotentialField& f, const std::function<Vec3(const Vec3&, double)>& grad_chi,
                               const std::function<double(const Vec3&, double)>& rate_chi, double c);
std::vector<FourPotentialField> apply_gauge(std::span<const FourPotentialField> series, const GaugeFunction& chi,
                                            double c);

/// Homogeneous plane-wave mode eps^mu amplitude cos(k.x - c|k| t + phase).
struct HomogeneousMode {
  std::array<double, 4> polarization{1.0, 0.0, 0.0, 0.0};
  Vec3 k{};
  double amplitude = 1.0;
  double phase = 0.0;

  PotentialValue value(const Vec3& x, double t, double c) const;
  /// Amplitude of its Lorentz residual: |eps^0 |k| - eps . k| amplitude (omega / c = |k|).
  double lorentz_amplitude() const;
  bool lorentz_violating() const { return lorentz_amplitude() > 1e-12 * std::abs(amplitude) * norm(k); }
  friend bool operator==(const HomogeneousMode&, const HomogeneousMode&) = default;
};

/// Throws ConfigError when the mode's wavelength is below 4h or, on periodic
/// grids, when k does not fit the period.
void validate_mode(const HomogeneousMode& m, const GridSpec& grid);

/// f += coefficient * mode, sampled at f.time.
void add_mode(FourPotentialField& f, const HomogeneousMode& m, double coefficient, double c);
std::vector<FourPotentialField> add_mode(std::span<const FourPotentialField> series, const HomogeneousMode& m,
                                         double coefficient, double c);

enum class AmplitudeLaw { symmetric_uniform, symmetric_gaussian, antithetic_pairs };

struct EnsembleSpec {
  std::vector<HomogeneousMode> modes;
  int n_members = 1;
  std::uint64_t seed = 0;
  AmplitudeLaw law = AmplitudeLaw::symmetric_uniform;
  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

std::string to_string(AmplitudeLaw law);
/// Throws ConfigError for unknown names.
AmplitudeLaw amplitude_law_from_string(const std::string& name);

/// Throws ConfigError for n_members < 1 or an odd member count under antithetic pairing.
void validate_ensemble(const EnsembleSpec& spec);

/// One coefficient per mode for the given member. Member i draws from its own
/// stream derived from (seed, i); under antithetic pairing members 2m and 2m+1
/// share the stream of 2m and carry opposite signs.
std::vector<double> member_coefficients(const EnsembleSpec& spec, int member);

/// Arithmetic mean with a fixed binary tree over member index, split at even
/// positions (pairs 2m, 2m+1 always share a subtree): mean(L ++ R) =
/// mean(L) + (mean(R) - mean(L)) * |R| / (|L| + |R|). Identical inputs reproduce
/// themselves exactly.
double tree_mean(std::span<const double> values);
FourPotentialField ensemble_average(std::span<const FourPotentialField> members);
std::vector<FourPotentialField> ensemble_average(const std::vector<std::vector<FourPotentialField>>& members);

/// One stored base-run sample.
struct BaseSample {
  long step = 0;
  PotentialTriplet triplet;
  FourCurrentField source;
};

/// The members of an ensemble over a solved base run. Members are materialised
/// on demand: member i at sample s is base(s) + sum_m c_{i,m} mode_m.
class Ensemble {
 public:
  Ensemble(std::vector<BaseSample> base, EnsembleSpec spec, PhysicalConstants constants);

  int size() const { return spec_.n_members; }
  std::size_t samples() const { return base_.size(); }
  const EnsembleSpec& spec() const { return spec_; }
  const PhysicalConstants& constants() const { return constants_; }
  const BaseSample& base(std::size_t sample) const { return base_.at(sample); }
  const std::vector<double>& coefficients(int member) const { return coefficients_.at(static_cast<std::size_t>(member)); }

  PotentialTriplet member(int member, std::size_t sample) const;
  /// Deviation of a member from the base run (the admixed modes only).
  PotentialTriplet deviation(int member, std::size_t sample) const;

  /// Mean over the first n members (all when n <= 0). Uses linearity: the base
  /// plus the modes weighted by the tree mean of each coefficient column, so
  /// antithetic pairs reproduce the base bit for bit.
  PotentialTriplet mean(std::size_t sample, int n = 0) const;
  std::vector<double> mean_coefficients(int n = 0) const;

 private:
  PotentialTriplet admixture(const std::vector<double>& coefficients, std::size_t sample) const;

  std::vector<BaseSample> base_;
  EnsembleSpec spec_;
  PhysicalConstants constants_;
  std::vector<std::vector<double>> coefficients_;
};

}  // namespace a4
