#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "a4/ensemble.hpp"
#include "a4/oracles.hpp"
#include "a4/solver.hpp"
#include "a4/sources.hpp"

namespace a4 {

// Scenario text format: '[section]' headers, 'key = value' lines, '#' comments.
// Repeated tables use '[[source]]' and '[[mode]]'. Vectors are whitespace-separated
// numbers. Sections:
//   [grid]       n, h, dt (or courant = c dt / h), origin, boundary = periodic | absorbing
//   [constants]  units = natural | gaussian, c, hbar
//   [run]        n_steps, snapshot_every, diagnostic_every, relaxation, damping, seed
//   [initial]    kind = zero | plane_wave | coulomb | file, plus the kind's keys
//   [[source]]   type = static_charge | moving_charge | dipole | solenoid | charge_transfer
//   [ensemble]   n_members, law; followed by [[mode]] tables
//   [output]     directory, snapshots, diagnostics
//   [compare]    radius (oracle-compare region around the first charge)

struct ZeroInitial {
  friend bool operator==(const ZeroInitial&, const ZeroInitial&) = default;
};

/// Analytic plane wave at t = 0 with its exact time derivative.
struct PlaneWaveInitial {
  PlaneWaveKind kind = PlaneWaveKind::transverse;
  std::array<double, 4> polarization{0.0, 1.0, 0.0, 0.0};
  Vec3 k{};
  double amplitude = 1.0;
  double phase = 0.0;
  PlaneWave wave() const { return PlaneWave::make(kind, polarization, k, amplitude, phase); }
  friend bool operator==(const PlaneWaveInitial&, const PlaneWaveInitial&) = default;
};

/// Static smoothed Coulomb potential, zero rate.
struct CoulombInitial {
  double q = 1.0;
  double sigma = 1.0;
  Vec3 center{};
  friend bool operator==(const CoulombInitial&, const CoulombInitial&) = default;
};

/// A4PT snapshot as the value; the optional second snapshot is the level one step earlier.
struct FileInitial {
  std::string path;
  std::string previous;
  friend bool operator==(const FileInitial&, const FileInitial&) = default;
};

using InitialCondition = std::variant<ZeroInitial, PlaneWaveInitial, CoulombInitial, FileInitial>;

struct OutputSpec {
  std::string directory = "out";
  bool snapshots = true;
  std::string diagnostics = "diagnostics.csv";
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  GridSpec grid;
  PhysicalConstants constants;
  long n_steps = 0;
  long snapshot_every = 1;
  long diagnostic_every = 1;
  /// Relax to a static solution: damping plus far-field faces on absorbing grids.
  bool relaxation = false;
  /// Overrides the default relaxation friction.
  std::optional<double> damping;
  std::uint64_t seed = 0;
  std::vector<SourceModel> sources;
  InitialCondition initial = ZeroInitial{};
  std::optional<EnsembleSpec> ensemble;  // its seed mirrors `seed`
  OutputSpec output;
  std::optional<double> compare_radius;
  /// Directory that relative file references resolve against.
  std::string base_dir = ".";
  /// Notes about adjusted settings (cadence clamping and the like).
  std::vector<std::string> warnings;

  BoundaryKind boundary_kind() const;
  double effective_damping() const;
  double end_time() const { return static_cast<double>(n_steps) * grid.dt(); }
  std::string resolve(const std::string& path) const;

  /// Structural equality; base_dir and warnings are ignored.
  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Parses and validates. Syntax problems raise SyntaxError (line and column);
/// violated physics preconditions raise ConfigError prefixed with "name:line:".
Scenario parse_scenario(const std::string& text, const std::string& name = "<scenario>",
                        const std::string& base_dir = ".");
/// Reads a file (IoError if missing) and parses it relative to its directory.
Scenario load_scenario(const std::string& path);

/// Text form that parse_scenario maps back to an equal Scenario.
std::string serialize_scenario(const Scenario& s);

/// Re-runs the semantic checks (after command-line overrides, for instance).
void validate_scenario(Scenario& s);

}  // namespace a4
