#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "a4/field.hpp"
#include "a4/oracles.hpp"

namespace a4 {

// Aharonov-Bohm phases as line integrals of the potentials:
//   magnetic   (q / hbar c) loop integral of A . dl
//   electric   -(q / hbar) integral of (phi_1 - phi_2) dt
//   covariant  (q / hbar c) integral of (A . dx - c phi dt) around a closed spacetime path,
// which reduces to the first for a constant-time loop and to the second for two
// parked worldlines joined by instantaneous legs. These are the textbook
// semiclassical expressions; hbar enters nowhere else in the library.

struct PhaseResult {
  double phase = 0.0;
  /// |T_2N - T_N| / 3 of the last halving, scaled like the phase.
  double quadrature_estimate = 0.0;
  bool converged = true;
};

/// Closed polyline at a fixed time; the first vertex is repeated at the end.
struct Loop {
  std::vector<Vec3> vertices;
  double time = 0.0;
};

/// Polygon approximating a circle of the given radius, traversed `winding` times.
Loop circle_loop(const Vec3& center, const Vec3& normal, double radius, int segments, double time, int winding = 1);

struct Event {
  double t = 0.0;
  Vec3 x{};
};

/// Strictly time-ordered samples of a charge's trajectory.
struct Worldline {
  std::vector<Event> samples;
  double charge = 1.0;
};

/// Worldline parked at x over [t0, t1], sampled n + 1 times.
Worldline parked_worldline(const Vec3& x, double t0, double t1, int n, double charge = 1.0);

/// (phi, A) at an arbitrary spacetime point.
using PotentialProvider = std::function<PotentialValue(const Vec3&, double)>;

struct QuadratureOptions {
  /// Stop when successive estimates differ by less than rel_tol * integral of |integrand|.
  double rel_tol = 1e-4;
  int max_levels = 14;
  /// Throw QuadratureError instead of returning converged = false.
  bool strict = true;
};

/// Stored potentials at increasing times. Evaluation interpolates trilinearly in
/// space and linearly in time; bracketing snapshots further apart than
/// 4 * grid dt, or a time outside the stored range, raise DomainError.
class SnapshotHistory {
 public:
  void add(FourPotentialField snapshot);
  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }
  const FourPotentialField& operator[](std::size_t i) const { return snapshots_[i]; }
  PotentialValue operator()(const Vec3& x, double t) const;
  PotentialProvider provider() const;

 private:
  std::vector<FourPotentialField> snapshots_;
};

/// Static provider built from one snapshot (time is ignored).
PotentialProvider snapshot_provider(const FourPotentialField& f);

PhaseResult magnetic_ab_phase(const VectorField& a, const Loop& loop, double q, const PhysicalConstants& k,
                              const QuadratureOptions& opt = {});
PhaseResult magnetic_ab_phase(const PotentialProvider& a, const Loop& loop, double q, const PhysicalConstants& k,
                              const QuadratureOptions& opt = {});

/// Sampled potentials on a common time axis; trapezoid rule, with the estimate
/// taken against the rule on every other sample.
PhaseResult electric_ab_phase(std::span<const double> times, std::span<const double> phi1,
                              std::span<const double> phi2, double q, const PhysicalConstants& k);
/// Prescribed potential difference phi_1(t) - phi_2(t) integrated over [t0, t1] with step halving.
PhaseResult electric_ab_phase(const std::function<double(double)>& delta_phi, double t0, double t1, double q,
                              const PhysicalConstants& k, const QuadratureOptions& opt = {});

/// Closed spacetime path: `path` from event a to event b, then `partner` (also
/// from a to b) traversed backwards. The charge is path.charge.
PhaseResult covariant_phase(const PotentialProvider& a, const Worldline& path, const Worldline& partner,
                            const PhysicalConstants& k, const QuadratureOptions& opt = {});
/// Open-path integral (q / hbar c) int (A . dx - c phi dt) along one worldline.
PhaseResult covariant_phase(const PotentialProvider& a, const Worldline& path, const PhysicalConstants& k,
                            const QuadratureOptions& opt = {});
/// A loop as a spacetime path at constant time.
PhaseResult covariant_phase(const PotentialProvider& a, const Loop& loop, double q, const PhysicalConstants& k,
                            const QuadratureOptions& opt = {});

/// delta_phase / 2 pi * spacing. Throws ConfigError for spacing <= 0.
double fringe_shift(double delta_phase, double fringe_spacing);

/// Contents of a path-specification file:
///   # comment
///   loop <t> [q]          followed by "x y z" vertex lines
///   worldline [q]         followed by "t x y z" lines
///   partner               follows a worldline; "t x y z" lines
/// Loops that do not repeat their first vertex are closed automatically.
struct PathSpec {
  struct LoopEntry {
    Loop loop;
    double charge = 1.0;
  };
  struct WorldlineEntry {
    Worldline path;
    bool has_partner = false;
    Worldline partner;
  };
  std::vector<LoopEntry> loops;
  std::vector<WorldlineEntry> worldlines;
};

/// Throws SyntaxError with line and column for malformed input and ConfigError
/// for time-ordering violations.
PathSpec parse_path_spec(std::istream& in, const std::string& name = "<paths>");
PathSpec read_path_spec(const std::string& path);

/// Checks the worldline invariants against a grid: increasing times, spatial
/// steps no longer than 8h, samples inside the domain.
void validate_worldline(const Worldline& w, const GridSpec& grid);

}  // namespace a4
