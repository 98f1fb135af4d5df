#include "a4/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#include "a4/ab_phase.hpp"
#include "a4/error.hpp"
#include "a4/io.hpp"
#include "a4/parallel.hpp"
#include "a4/runner.hpp"

namespace a4 {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<long> snapshot_every;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool positional_scenario) {
  if (positional_scenario) app->add_option("scenario_file", c.scenario, "Scenario file");
  app->add_option("--scenario", c.scenario, "Scenario file");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Seed (overrides the scenario)");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores); results do not depend on it");
  app->add_option("--snapshot-every", c.snapshot_every, "Snapshot cadence (overrides the scenario)");
  app->add_flag("--quiet", c.quiet, "Only print errors");
}

Scenario load(const Common& c) {
  if (c.scenario.empty()) throw CLI::RequiredError("a scenario file");
  Scenario s = load_scenario(c.scenario);
  bool changed = false;
  if (c.seed) {
    s.seed = *c.seed;
    changed = true;
  }
  if (c.snapshot_every) {
    s.snapshot_every = *c.snapshot_every;
    changed = true;
  }
  if (changed) validate_scenario(s);
  return s;
}

std::string out_dir(const Common& c, const Scenario* s) {
  if (!c.out.empty()) return c.out;
  return s ? s->output.directory : std::string("out");
}

void print_warnings(const std::vector<std::string>& w, std::ostream& err) {
  for (const auto& line : w) err << "warning: " << line << "\n";
}

std::string summary(const Scenario& s) {
  const GridSpec& g = s.grid;
  std::ostringstream o;
  o << "grid " << g.nx() << "x" << g.ny() << "x" << g.nz() << " " << to_string(g.boundary()) << ", h " << g.h()
    << ", dt " << g.dt() << ", n_steps " << s.n_steps << ", sources " << s.sources.size();
  if (s.relaxation) o << ", relaxation";
  if (s.ensemble) o << ", ensemble " << s.ensemble->n_members << " members x " << s.ensemble->modes.size() << " modes";
  return o.str();
}

int cmd_validate(const Common& c, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  if (!c.quiet) print_warnings(s.warnings, err);
  out << "ok: " << c.scenario << ": " << summary(s) << "\n";
  return kExitOk;
}

int cmd_run(const Common& c, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  if (!c.quiet) print_warnings(s.warnings, err);
  const std::string dir = out_dir(c, &s);
  const RunResult r = run(s, {}, RunOptions{dir});
  if (!c.quiet) {
    out << "ran " << s.n_steps << " steps: " << r.snapshot_files.size() << " snapshots, " << r.records.size()
        << " diagnostic records in " << dir << "\n";
    if (!r.records.empty()) {
      const DiagnosticRecord& last = r.records.back();
      out << "final lorentz L2 " << last.lorentz.l2 << ", gauss_e L2 " << last.gauss_e.l2 << "\n";
    }
  }
  return kExitOk;
}

int cmd_diagnose(const Common& c, const std::string& snapshots, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> s;
  if (!c.scenario.empty()) s = load(c);
  const Vec3 origin = s ? s->grid.origin() : Vec3{};
  const Boundary boundary = s ? s->grid.boundary() : Boundary::periodic;
  const auto files = list_snapshots(snapshots);
  if (files.size() < 3) throw ConfigError("diagnose needs at least three snapshots in " + snapshots);
  const double c_light = s ? s->constants.c : 1.0;
  std::vector<FourPotentialField> f;
  for (const auto& p : files) f.push_back(read_snapshot(p, origin, boundary));
  if (s) require_same_lattice(s->grid, f[0].grid(), "snapshot vs scenario");
  std::vector<DiagnosticRecord> records;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double d1 = f[i].time - f[i - 1].time, d2 = f[i + 1].time - f[i].time;
    if (std::abs(d1 - d2) > 1e-9 * std::abs(d1)) {
      if (!c.quiet) err << "warning: skipping " << files[i] << " (uneven snapshot spacing)\n";
      continue;
    }
    const FourCurrentField src = s ? eval(s->sources, f[i].time, f[i].grid()) : FourCurrentField(f[i].grid(), f[i].time);
    const long step = std::lround(f[i].time / f[i].grid().dt());
    records.push_back(compute_record(f[i - 1], f[i], f[i + 1], src, d1, c_light, step));
  }
  const std::string dir = c.out.empty() ? snapshots : c.out;
  fs::create_directories(dir);
  const std::string path = (fs::path(dir) / "diagnose.csv").string();
  write_diagnostics_csv(records, path);
  if (!c.quiet) out << records.size() << " records written to " << path << "\n";
  return kExitOk;
}

int cmd_ensemble(const Common& c, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  if (!c.quiet) print_warnings(s.warnings, err);
  const Ensemble e = generate_ensemble(s);
  const EnsembleReport r = ensemble_report(e);
  const std::string dir = out_dir(c, &s);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  write_diagnostics_csv(r.mean, (fs::path(dir) / "ensemble_mean.csv").string());
  write_text_file((fs::path(dir) / "ensemble_members.csv").string(), format_ensemble_members_csv(r));
  if (s.output.snapshots)
    for (std::size_t k = 0; k < e.samples(); ++k)
      if (is_snapshot_step(s, e.base(k).step))
        write_snapshot(e.mean(k).now, (fs::path(dir) / snapshot_file_name(e.base(k).step, "mean")).string());
  if (!c.quiet && !r.mean.empty()) {
    double member_rms = 0.0;
    for (const auto& m : r.members) member_rms += m.back().lorentz.l2 * m.back().lorentz.l2;
    member_rms = std::sqrt(member_rms / static_cast<double>(r.members.size()));
    out << e.size() << " members, law " << to_string(e.spec().law) << ", seed " << e.spec().seed << "\n"
        << "final step " << r.mean.back().step << ": member lorentz L2 (rms) " << member_rms << ", mean lorentz L2 "
        << r.mean.back().lorentz.l2 << ", mean gauss_e L2 " << r.mean.back().gauss_e.l2 << "\n";
  }
  return kExitOk;
}

int cmd_ab_phase(const Common& c, const std::string& paths, const std::string& snapshots, std::ostream& out,
                 std::ostream& err) {
  if (paths.empty()) throw CLI::RequiredError("--paths");
  std::optional<Scenario> s;
  if (!c.scenario.empty()) s = load(c);
  if (s && !c.quiet) print_warnings(s->warnings, err);
  const PhysicalConstants k = s ? s->constants : PhysicalConstants::natural();
  SnapshotHistory history;
  if (!snapshots.empty()) {
    const Vec3 origin = s ? s->grid.origin() : Vec3{};
    const Boundary boundary = s ? s->grid.boundary() : Boundary::periodic;
    for (const auto& p : list_snapshots(snapshots)) history.add(read_snapshot(p, origin, boundary));
  } else if (s) {
    run(*s, [&](const StepView& v) {
      if (v.snapshot) history.add(v.triplet->now);
    });
  } else {
    throw CLI::RequiredError("--snapshots or a scenario");
  }
  if (history.empty()) throw ConfigError("no snapshots available");
  const PathSpec spec = read_path_spec(paths);
  const PotentialProvider provider = history.size() == 1 ? snapshot_provider(history[0]) : history.provider();
  char buf[200];
  for (std::size_t i = 0; i < spec.loops.size(); ++i) {
    const auto& l = spec.loops[i];
    const PhaseResult p = covariant_phase(provider, l.loop, l.charge, k);
    std::snprintf(buf, sizeof buf, "loop %zu t=%.6g phase=%.12g estimate=%.3g\n", i, l.loop.time, p.phase,
                  p.quadrature_estimate);
    out << buf;
  }
  for (std::size_t i = 0; i < spec.worldlines.size(); ++i) {
    const auto& w = spec.worldlines[i];
    const PhaseResult p =
        w.has_partner ? covariant_phase(provider, w.path, w.partner, k) : covariant_phase(provider, w.path, k);
    std::snprintf(buf, sizeof buf, "worldline %zu %s phase=%.12g estimate=%.3g\n", i,
                  w.has_partner ? "closed" : "open", p.phase, p.quadrature_estimate);
    out << buf;
  }
  return kExitOk;
}

int cmd_oracle_compare(const Common& c, std::optional<double> tolerance, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  if (!c.quiet) print_warnings(s.warnings, err);
  RunOptions opt;
  if (!c.out.empty()) opt.out_dir = c.out;
  const RunResult r = run(s, {}, opt);
  const OracleComparison cmp = compare_with_oracle(s, r.final_state);
  out << format_oracle_table(cmp);
  if (tolerance && cmp.rows.back().relative >= *tolerance) {
    err << "relative L2 error " << cmp.rows.back().relative << " exceeds tolerance " << *tolerance << "\n";
    return kExitPhysics;
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Four-potential lattice simulator"};
  app.require_subcommand(1);
  Common common;
  std::string snapshots, paths;
  std::optional<double> tolerance;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario, writing snapshots and diagnostics");
  add_common(run_cmd, common, true);
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a scenario without running it");
  add_common(validate_cmd, common, true);
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Recompute diagnostics from stored snapshots");
  add_common(diagnose_cmd, common, false);
  diagnose_cmd->add_option("snapshots", snapshots, "Snapshot directory")->required();
  auto* ensemble_cmd = app.add_subcommand("ensemble", "Run a scenario's ensemble and report member and mean diagnostics");
  add_common(ensemble_cmd, common, true);
  auto* ab_cmd = app.add_subcommand("ab-phase", "Aharonov-Bohm phases along the paths of a path file");
  add_common(ab_cmd, common, false);
  ab_cmd->add_option("--paths", paths, "Path specification file")->required();
  ab_cmd->add_option("--snapshots", snapshots, "Snapshot directory (otherwise the scenario is run)");
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "Compare a solved scenario with its analytic oracle");
  add_common(oracle_cmd, common, true);
  oracle_cmd->add_option("--tolerance", tolerance, "Exit 2 when the overall relative L2 error reaches this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  set_thread_count(common.threads);
  try {
    if (*run_cmd) return cmd_run(common, out, err);
    if (*validate_cmd) return cmd_validate(common, out, err);
    if (*diagnose_cmd) return cmd_diagnose(common, snapshots, out, err);
    if (*ensemble_cmd) return cmd_ensemble(common, out, err);
    if (*ab_cmd) return cmd_ab_phase(common, paths, snapshots, out, err);
    if (*oracle_cmd) return cmd_oracle_compare(common, tolerance, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace a4
