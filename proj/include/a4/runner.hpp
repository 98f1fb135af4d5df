#pragma once

#include <functional>
#include <string>
#include <vector>

#include "a4/ab_phase.hpp"
#include "a4/diagnostics.hpp"
#include "a4/ensemble.hpp"
#include "a4/scenario.hpp"

namespace a4 {

/// What the runner shows an observer at a recorded step n: the levels
/// n - 1, n, n + 1 and the current at level n.
struct StepView {
  long step = 0;
  double time = 0.0;
  const PotentialTriplet* triplet = nullptr;
  const FourCurrentField* source = nullptr;
  bool snapshot = false;
  bool diagnostic = false;
};

using RunObserver = std::function<void(const StepView&)>;

struct RunOptions {
  /// Write snapshots, the diagnostics CSV and warnings under this directory
  /// (empty: nothing is written).
  std::string out_dir;
};

struct RunResult {
  std::vector<DiagnosticRecord> records;
  std::vector<std::string> snapshot_files;
  FourPotentialField final_state;
  std::vector<std::string> warnings;
};

/// Leapfrog pair at the start of a scenario, built from its initial condition.
SolverState initial_state(const Scenario& s);

/// True when the step is a recorded snapshot / diagnostic step (the final step always is).
bool is_snapshot_step(const Scenario& s, long step);
bool is_diagnostic_step(const Scenario& s, long step);

/// Runs steps 0..n_steps. Each recorded step looks one step ahead so that
/// diagnostics see centred time differences; n_steps = 0 still yields one
/// snapshot and one record at the initial time.
RunResult run(const Scenario& s, const RunObserver& observer = {}, const RunOptions& opt = {});

std::string snapshot_file_name(long step, const std::string& prefix = "snap");

/// A4PT files of a directory whose names start with `prefix`, sorted by name.
std::vector<std::string> list_snapshots(const std::string& dir, const std::string& prefix = "snap");

/// Runs the base scenario and keeps a triplet at every diagnostic step.
/// Throws ConfigError when the scenario has no [ensemble] section.
Ensemble generate_ensemble(const Scenario& s);

/// Records of every member and of the mean at every stored sample. Errors are
/// re-thrown with the member index in the message.
struct EnsembleReport {
  std::vector<std::vector<DiagnosticRecord>> members;  // [member][sample]
  std::vector<DiagnosticRecord> mean;
};
EnsembleReport ensemble_report(const Ensemble& e);
std::string format_ensemble_members_csv(const EnsembleReport& r);

/// Solved-versus-analytic comparison of one field.
struct OracleRow {
  std::string component;
  double l2_error = 0.0;
  double l2_reference = 0.0;
  double relative = 0.0;  // l2_error / l2_reference (0 when the reference vanishes)
  double linf_error = 0.0;
};
struct OracleComparison {
  std::string oracle;
  double radius = 0.0;  // 0: whole interior
  long nodes = 0;
  std::vector<OracleRow> rows;
};

/// Uses the scenario's analytic counterpart: the evolved plane wave for a
/// plane-wave initial condition without sources, or the summed smoothed Coulomb
/// potential for static charges (compared within `compare radius` of the first
/// charge, default a quarter of the largest extent). Throws ConfigError when
/// neither applies.
OracleComparison compare_with_oracle(const Scenario& s, const FourPotentialField& solved);
std::string format_oracle_table(const OracleComparison& c);

}  // namespace a4
