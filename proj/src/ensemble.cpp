#include "a4/ensemble.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "a4/parallel.hpp"

namespace a4 {

namespace {

// The standard fixes the engine output sequence but not the distributions, so
// uniform and normal variates are converted by hand.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

double symmetric_uniform(std::mt19937_64& g) { return 2.0 * uniform01(g) - 1.0; }

double standard_normal(std::mt19937_64& g) {
  const double u1 = 1.0 - uniform01(g);  // (0, 1]
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PlaneWave as_wave(const HomogeneousMode& m) {
  return PlaneWave::make(PlaneWaveKind::general, m.polarization, m.k, m.amplitude, m.phase);
}

// Adds coefficient * w at f.time. The phase is separable, so the cosine is built
// from per-axis complex factors instead of one cos call per node.
void add_sampled(FourPotentialField& f, double coefficient, const PlaneWave& w, double c) {
  const GridSpec& g = f.grid();
  std::array<std::vector<std::complex<double>>, 3> axis;
  for (int a = 0; a < 3; ++a) {
    auto& e = axis[static_cast<std::size_t>(a)];
    e.resize(static_cast<std::size_t>(g.n(a)));
    for (int i = 0; i < g.n(a); ++i) e[static_cast<std::size_t>(i)] = std::polar(1.0, w.k()[a] * (g.origin()[a] + g.h() * i));
  }
  const std::complex<double> lead = std::polar(coefficient * w.amplitude(), w.phase() - w.omega(c) * f.time);
  const auto& eps = w.polarization();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    const double v = (lead * axis[2][static_cast<std::size_t>(k)] * axis[1][static_cast<std::size_t>(j)] *
                      axis[0][static_cast<std::size_t>(i)]).real();
    f.phi[n] += eps[0] * v;
    f.a[0][n] += eps[1] * v;
    f.a[1][n] += eps[2] * v;
    f.a[2][n] += eps[3] * v;
  });
}

template <class T, class Combine>
T tree_reduce(std::span<const T> v, Combine&& combine) {
  if (v.size() == 1) return v[0];
  // Splits stay on even indices so antithetic pairs share a subtree.
  std::size_t half = v.size() / 2;
  if (v.size() > 2 && half % 2 == 1) ++half;
  T left = tree_reduce(v.subspan(0, half), combine);
  T right = tree_reduce(v.subspan(half), combine);
  return combine(std::move(left), right, static_cast<double>(v.size() - half) / static_cast<double>(v.size()));
}

}  // namespace

double GaugeFunction::value(const Vec3& x, double t, double c) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.amplitude * std::cos(dot(term.k, x) - c * norm(term.k) * t + term.phase);
  return s;
}

Vec3 GaugeFunction::gradient(const Vec3& x, double t, double c) const {
  Vec3 g{};
  for (const auto& term : terms)
    g -= term.amplitude * std::sin(dot(term.k, x) - c * norm(term.k) * t + term.phase) * term.k;
  return g;
}

double GaugeFunction::rate(const Vec3& x, double t, double c) const {
  double s = 0.0;
  for (const auto& term : terms) {
    const double w = c * norm(term.k);
    s += term.amplitude * w * std::sin(dot(term.k, x) - w * t + term.phase);
  }
  return s;
}

GaugeFunction GaugeFunction::random(std::uint64_t seed, int n_terms, const GridSpec& grid, int max_mode,
                                    double amplitude) {
  if (n_terms < 0 || max_mode < 1) throw ConfigError("random gauge function needs n_terms >= 0 and max_mode >= 1");
  std::mt19937_64 g = stream(seed, 0);
  auto draw_int = [&] {
    return static_cast<int>(std::floor(uniform01(g) * (2 * max_mode + 1))) - max_mode;
  };
  GaugeFunction chi;
  while (static_cast<int>(chi.terms.size()) < n_terms) {
    const std::array<int, 3> m{draw_int(), draw_int(), draw_int()};
    if (m[0] == 0 && m[1] == 0 && m[2] == 0) continue;
    Vec3 k;
    for (int a = 0; a < 3; ++a) k[a] = 2.0 * std::numbers::pi * m[static_cast<std::size_t>(a)] / grid.extent(a);
    chi.terms.push_back({amplitude * symmetric_uniform(g), k, 2.0 * std::numbers::pi * uniform01(g)});
  }
  return chi;
}

FourPotentialField apply_gauge(const FourPotentialField& f, const std::function<Vec3(const Vec3&, double)>& grad_chi,
                               const std::function<double(const Vec3&, double)>& rate_chi, double c) {
  FourPotentialField out = f;
  const GridSpec& g = f.grid();
  for_each_node(g, [&](int i, int j, int k, std::size_t n) {
    const Vec3 x = g.position(i, j, k);
    const Vec3 d = grad_chi(x, f.time);
    out.a[0][n] += d.x;
    out.a[1][n] += d.y;
    out.a[2][n] += d.z;
    out.phi[n] -= rate_chi(x, f.time) / c;
  });
  return out;
}

FourPotentialField apply_gauge(const FourPotentialField& f, const GaugeFunction& chi, double c) {
  return apply_gauge(
      f, [&](const Vec3& x, double t) { return chi.gradient(x, t, c); },
      [&](const Vec3& x, double t) { return chi.rate(x, t, c); }, c);
}

std::vector<FourPotentialField> apply_gauge(std::span<const FourPotentialField> series, const GaugeFunction& chi,
                                            double c) {
  std::vector<FourPotentialField> out;
  out.reserve(series.size());
  for (const auto& f : series) out.push_back(apply_gauge(f, chi, c));
  return out;
}

PotentialValue HomogeneousMode::value(const Vec3& x, double t, double c) const { return as_wave(*this).value(x, t, c); }

double HomogeneousMode::lorentz_amplitude() const {
  const Vec3 eps{polarization[1], polarization[2], polarization[3]};
  return std::abs((polarization[0] * norm(k) - dot(eps, k)) * amplitude);
}

void validate_mode(const HomogeneousMode& m, const GridSpec& grid) {
  for (double e : m.polarization)
    if (!std::isfinite(e)) throw ConfigError("mode polarisation must be finite");
  if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase) || !std::isfinite(norm(m.k)))
    throw ConfigError("mode amplitude, phase and k must be finite");
  const double kn = norm(m.k);
  if (kn * grid.h() > std::numbers::pi / 2.0 * (1.0 + 1e-12))
    throw ConfigError("mode wavelength " + std::to_string(2.0 * std::numbers::pi / kn) +
                      " is below the resolvable limit 4h = " + std::to_string(4.0 * grid.h()));
  if (grid.periodic()) {
    for (int a = 0; a < 3; ++a) {
      const double turns = m.k[a] * grid.extent(a) / (2.0 * std::numbers::pi);
      if (std::abs(turns - std::round(turns)) > 1e-9 * std::max(1.0, std::abs(turns)))
        throw ConfigError("mode wave vector does not fit the periodic box along axis " + std::to_string(a));
    }
  }
}

void add_mode(FourPotentialField& f, const HomogeneousMode& m, double coefficient, double c) {
  validate_mode(m, f.grid());
  if (coefficient == 0.0) return;
  add_sampled(f, coefficient, as_wave(m), c);
}

std::vector<FourPotentialField> add_mode(std::span<const FourPotentialField> series, const HomogeneousMode& m,
                                         double coefficient, double c) {
  std::vector<FourPotentialField> out(series.begin(), series.end());
  for (auto& f : out) add_mode(f, m, coefficient, c);
  return out;
}

std::string to_string(AmplitudeLaw law) {
  switch (law) {
    case AmplitudeLaw::symmetric_uniform: return "symmetric_uniform";
    case AmplitudeLaw::symmetric_gaussian: return "symmetric_gaussian";
    case AmplitudeLaw::antithetic_pairs: return "antithetic_pairs";
  }
  return "?";
}

AmplitudeLaw amplitude_law_from_string(const std::string& name) {
  for (AmplitudeLaw l : {AmplitudeLaw::symmetric_uniform, AmplitudeLaw::symmetric_gaussian, AmplitudeLaw::antithetic_pairs})
    if (to_string(l) == name) return l;
  throw ConfigError("unknown amplitude law '" + name + "'");
}

void validate_ensemble(const EnsembleSpec& spec) {
  if (spec.n_members < 1) throw ConfigError("ensemble needs n_members >= 1");
  if (spec.law == AmplitudeLaw::antithetic_pairs && spec.n_members % 2 != 0)
    throw ConfigError("antithetic pairing needs an even number of members");
}

std::vector<double> member_coefficients(const EnsembleSpec& spec, int member) {
  if (member < 0 || member >= spec.n_members) throw ConfigError("member index out of range");
  const bool antithetic = spec.law == AmplitudeLaw::antithetic_pairs;
  const int draw_index = antithetic ? member - member % 2 : member;
  std::mt19937_64 g = stream(spec.seed, static_cast<std::uint64_t>(draw_index));
  std::vector<double> c(spec.modes.size());
  for (double& v : c) v = spec.law == AmplitudeLaw::symmetric_gaussian ? standard_normal(g) : symmetric_uniform(g);
  if (antithetic && member % 2 == 1)
    for (double& v : c) v = -v;
  return c;
}

double tree_mean(std::span<const double> values) {
  if (values.empty()) throw ConfigError("mean of an empty set");
  return tree_reduce(values, [](double a, double b, double w) { return a + (b - a) * w; });
}

FourPotentialField ensemble_average(std::span<const FourPotentialField> members) {
  if (members.empty()) throw ConfigError("ensemble average of no members");
  for (const auto& m : members) {
    require_same_lattice(members[0].grid(), m.grid(), "ensemble average");
    if (m.time != members[0].time) throw GridMismatch("ensemble members are sampled at different times");
  }
  return tree_reduce(members, [](FourPotentialField a, const FourPotentialField& b, double w) {
    const std::size_t n = a.grid().size();
    for (int mu = 0; mu < 4; ++mu) {
      ScalarField& x = a.component(mu);
      const ScalarField& y = b.component(mu);
      for (std::size_t p = 0; p < n; ++p) x[p] = x[p] + (y[p] - x[p]) * w;
    }
    return a;
  });
}

std::vector<FourPotentialField> ensemble_average(const std::vector<std::vector<FourPotentialField>>& members) {
  if (members.empty()) throw ConfigError("ensemble average of no members");
  const std::size_t len = members[0].size();
  for (const auto& m : members)
    if (m.size() != len) throw GridMismatch("ensemble members have different series lengths");
  std::vector<FourPotentialField> out;
  out.reserve(len);
  std::vector<FourPotentialField> slice;
  for (std::size_t s = 0; s < len; ++s) {
    slice.clear();
    for (const auto& m : members) slice.push_back(m[s]);
    out.push_back(ensemble_average(slice));
  }
  return out;
}

Ensemble::Ensemble(std::vector<BaseSample> base, EnsembleSpec spec, PhysicalConstants constants)
    : base_(std::move(base)), spec_(std::move(spec)), constants_(constants) {
  validate_ensemble(spec_);
  if (!base_.empty())
    for (const auto& m : spec_.modes) validate_mode(m, base_[0].triplet.now.grid());
  coefficients_.reserve(static_cast<std::size_t>(spec_.n_members));
  for (int i = 0; i < spec_.n_members; ++i) coefficients_.push_back(member_coefficients(spec_, i));
}

PotentialTriplet Ensemble::admixture(const std::vector<double>& coefficients, std::size_t sample) const {
  const PotentialTriplet& b = base_.at(sample).triplet;
  PotentialTriplet out{FourPotentialField(b.prev.grid(), b.prev.time), FourPotentialField(b.now.grid(), b.now.time),
                       FourPotentialField(b.next.grid(), b.next.time)};
  for (std::size_t m = 0; m < spec_.modes.size(); ++m) {
    if (coefficients[m] == 0.0) continue;
    const PlaneWave w = as_wave(spec_.modes[m]);
    add_sampled(out.prev, coefficients[m], w, constants_.c);
    add_sampled(out.now, coefficients[m], w, constants_.c);
    add_sampled(out.next, coefficients[m], w, constants_.c);
  }
  return out;
}

PotentialTriplet Ensemble::deviation(int member, std::size_t sample) const {
  return admixture(coefficients(member), sample);
}

PotentialTriplet Ensemble::member(int member, std::size_t sample) const {
  PotentialTriplet out = base_.at(sample).triplet;
  const PotentialTriplet d = deviation(member, sample);
  out.prev += d.prev;
  out.now += d.now;
  out.next += d.next;
  return out;
}

std::vector<double> Ensemble::mean_coefficients(int n) const {
  const int count = n <= 0 ? size() : n;
  if (count > size()) throw ConfigError("mean over more members than the ensemble holds");
  std::vector<double> mean(spec_.modes.size());
  std::vector<double> column(static_cast<std::size_t>(count));
  for (std::size_t m = 0; m < mean.size(); ++m) {
    for (int i = 0; i < count; ++i) column[static_cast<std::size_t>(i)] = coefficients_[static_cast<std::size_t>(i)][m];
    mean[m] = tree_mean(column);
  }
  return mean;
}

PotentialTriplet Ensemble::mean(std::size_t sample, int n) const {
  PotentialTriplet out = base_.at(sample).triplet;
  const std::vector<double> c = mean_coefficients(n);
  bool any = false;
  for (double v : c) any = any || v != 0.0;
  if (!any) return out;
  const PotentialTriplet d = admixture(c, sample);
  out.prev += d.prev;
  out.now += d.now;
  out.next += d.next;
  return out;
}

}  // namespace a4
