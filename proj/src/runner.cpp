#include "a4/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "a4/error.hpp"
#include "a4/io.hpp"
#include "a4/operators.hpp"

namespace a4 {

namespace {

bool time_independent(const std::vector<SourceModel>& sources) {
  return std::all_of(sources.begin(), sources.end(), [](const SourceModel& m) {
    return std::holds_alternative<StaticGaussianCharge>(m) || std::holds_alternative<FiniteSolenoid>(m);
  });
}

// Sources sampled at successive times, evaluated once when nothing moves.
class SourceCache {
 public:
  explicit SourceCache(const Scenario& s) : s_(s), fixed_(time_independent(s.sources)) {}

  const FourCurrentField& at(double t) {
    if (!fixed_ || !ready_) {
      current_ = eval(s_.sources, t, s_.grid);
      ready_ = true;
    }
    current_.time = t;
    return current_;
  }

 private:
  const Scenario& s_;
  bool fixed_;
  bool ready_ = false;
  FourCurrentField current_;
};

}  // namespace

SolverState initial_state(const Scenario& s) {
  const GridSpec& g = s.grid;
  const double c = s.constants.c;
  FourPotentialField value(g, 0.0);
  FourPotentialField rate(g, 0.0);
  std::optional<FourPotentialField> previous;
  if (const auto* pw = std::get_if<PlaneWaveInitial>(&s.initial)) {
    const PlaneWave w = pw->wave();
    value = sample_potential(g, 0.0, [&](const Vec3& x, double t) { return w.value(x, t, c); });
    rate = sample_potential(g, 0.0, [&](const Vec3& x, double t) { return w.rate(x, t, c); });
  } else if (const auto* cb = std::get_if<CoulombInitial>(&s.initial)) {
    value.phi = ScalarField::sample(
        g, [&](const Vec3& x) { return smoothed_coulomb(cb->q, cb->sigma, norm(g.displacement(x, cb->center))); });
  } else if (const auto* f = std::get_if<FileInitial>(&s.initial)) {
    value = read_snapshot(s.resolve(f->path), g.origin(), g.boundary());
    require_same_lattice(g, value.grid(), "initial snapshot");
    rate = FourPotentialField(g, value.time);
    if (!f->previous.empty()) {
      previous = read_snapshot(s.resolve(f->previous), g.origin(), g.boundary());
      require_same_lattice(g, previous->grid(), "previous snapshot");
    }
  }
  const FourCurrentField src = eval(s.sources, value.time, g);
  SolverState st = init_state(g, value, rate, src, s.constants, s.boundary_kind(), s.effective_damping());
  if (previous) st.prev = std::move(*previous);
  return st;
}

bool is_snapshot_step(const Scenario& s, long step) {
  return step == s.n_steps || step % s.snapshot_every == 0;
}

bool is_diagnostic_step(const Scenario& s, long step) {
  return step == s.n_steps || step % s.diagnostic_every == 0;
}

std::string snapshot_file_name(long step, const std::string& prefix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%08ld.a4pt", prefix.c_str(), step);
  return buf;
}

std::vector<std::string> list_snapshots(const std::string& dir, const std::string& prefix) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with(prefix) && name.ends_with(".a4pt")) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunResult run(const Scenario& s, const RunObserver& observer, const RunOptions& opt) {
  namespace fs = std::filesystem;
  // Scenarios assembled in code bypass the parser, so the stability limit is rechecked here.
  s.constants.validate();
  s.grid.check_cfl(s.constants.c);
  RunResult result;
  result.warnings = s.warnings;
  const bool write = !opt.out_dir.empty();
  if (write) {
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + opt.out_dir + ": " + ec.message());
  }
  SourceCache sources(s);
  SolverState state = initial_state(s);
  const double dt = s.grid.dt();
  const double c = s.constants.c;
  for (long n = 0; n <= s.n_steps; ++n) {
    const bool snap = is_snapshot_step(s, n);
    const bool diag = is_diagnostic_step(s, n);
    const FourCurrentField& src = sources.at(state.now.time);
    if (snap && write && s.output.snapshots) {
      const std::string path = (fs::path(opt.out_dir) / snapshot_file_name(n)).string();
      write_snapshot(state.now, path);
      result.snapshot_files.push_back(path);
    }
    if (diag || (snap && observer)) {
      PotentialTriplet tri{state.prev, state.now, {}};
      state = step(std::move(state), src);
      tri.next = state.now;
      if (diag) result.records.push_back(compute_record(tri.prev, tri.now, tri.next, src, dt, c, n));
      if (observer) observer(StepView{n, tri.now.time, &tri, &src, snap, diag});
      if (n == s.n_steps) result.final_state = std::move(tri.now);
    } else {
      if (n == s.n_steps) result.final_state = state.now;
      if (n < s.n_steps) state = step(std::move(state), src);
    }
  }
  if (write) {
    if (!s.output.diagnostics.empty() && s.output.diagnostics != "none")
      write_diagnostics_csv(result.records, (fs::path(opt.out_dir) / s.output.diagnostics).string());
    if (!result.warnings.empty()) {
      std::string text;
      for (const auto& w : result.warnings) text += "warning: " + w + "\n";
      write_text_file((fs::path(opt.out_dir) / "warnings.txt").string(), text);
    }
  }
  return result;
}

Ensemble generate_ensemble(const Scenario& s) {
  if (!s.ensemble) throw ConfigError("scenario has no [ensemble] section");
  EnsembleSpec spec = *s.ensemble;
  spec.seed = s.seed;
  std::vector<BaseSample> base;
  run(s, [&](const StepView& v) {
    if (v.diagnostic) base.push_back({v.step, *v.triplet, *v.source});
  });
  return Ensemble(std::move(base), std::move(spec), s.constants);
}

EnsembleReport ensemble_report(const Ensemble& e) {
  EnsembleReport r;
  const double c = e.constants().c;
  r.members.resize(static_cast<std::size_t>(e.size()));
  for (int i = 0; i < e.size(); ++i) {
    try {
      for (std::size_t k = 0; k < e.samples(); ++k) {
        const BaseSample& b = e.base(k);
        const PotentialTriplet m = e.member(i, k);
        r.members[static_cast<std::size_t>(i)].push_back(
            compute_record(m.prev, m.now, m.next, b.source, b.triplet.now.grid().dt(), c, b.step));
      }
    } catch (const DivergenceError&) {
      throw;
    } catch (const Error& err) {
      throw ConfigError("ensemble member " + std::to_string(i) + ": " + err.what());
    }
  }
  for (std::size_t k = 0; k < e.samples(); ++k) {
    const BaseSample& b = e.base(k);
    const PotentialTriplet m = e.mean(k);
    r.mean.push_back(compute_record(m.prev, m.now, m.next, b.source, b.triplet.now.grid().dt(), c, b.step));
  }
  return r;
}

std::string format_ensemble_members_csv(const EnsembleReport& r) {
  std::vector<DiagnosticRecord> flat;
  std::vector<std::size_t> member_of;
  for (std::size_t i = 0; i < r.members.size(); ++i)
    for (const auto& rec : r.members[i]) {
      flat.push_back(rec);
      member_of.push_back(i);
    }
  const std::string body = format_diagnostics_csv(flat);
  // Prefix every line with the member column.
  std::string out = "member,";
  std::size_t row = 0, start = 0;
  bool header = true;
  while (start < body.size()) {
    const std::size_t end = body.find('\n', start);
    if (!header) out += std::to_string(member_of[row++]) + ",";
    out += body.substr(start, end - start + 1);
    header = false;
    start = end + 1;
  }
  return out;
}

OracleComparison compare_with_oracle(const Scenario& s, const FourPotentialField& solved) {
  const GridSpec& g = s.grid;
  const double c = s.constants.c;
  require_same_lattice(g, solved.grid(), "oracle comparison");
  OracleComparison out;
  FourPotentialField oracle(g, solved.time);
  std::function<bool(const Vec3&)> inside = [](const Vec3&) { return true; };

  const auto* pw = std::get_if<PlaneWaveInitial>(&s.initial);
  const bool all_static_charges =
      !s.sources.empty() && std::all_of(s.sources.begin(), s.sources.end(), [](const SourceModel& m) {
        return std::holds_alternative<StaticGaussianCharge>(m);
      });
  if (pw && s.sources.empty()) {
    const PlaneWave w = pw->wave();
    oracle = sample_potential(g, solved.time, [&](const Vec3& x, double t) { return w.value(x, t, c); });
    out.oracle = "plane_wave";
    if (s.compare_radius) {
      out.radius = *s.compare_radius;
      const Vec3 mid = g.origin() + 0.5 * Vec3{g.extent(0), g.extent(1), g.extent(2)};
      inside = [&, mid](const Vec3& x) { return norm(g.displacement(x, mid)) < out.radius; };
    }
  } else if (all_static_charges) {
    std::vector<StaticGaussianCharge> charges;
    for (const auto& m : s.sources) charges.push_back(std::get<StaticGaussianCharge>(m));
    oracle.phi = ScalarField::sample(g, [&](const Vec3& x) {
      double v = 0.0;
      for (const auto& q : charges) v += smoothed_coulomb(q.q, q.sigma, norm(g.displacement(x, q.center)));
      return v;
    });
    out.oracle = "smoothed_coulomb";
    out.radius = s.compare_radius ? *s.compare_radius : 0.25 * g.max_extent();
    const Vec3 center = charges.front().center;
    inside = [&, center](const Vec3& x) { return norm(g.displacement(x, center)) < out.radius; };
  } else {
    throw ConfigError("no analytic oracle for this scenario (needs a source-free plane wave or static charges)");
  }

  std::vector<char> mask(g.size(), 0);
  for_each_node(g, [&](int i, int j, int k, std::size_t n) { mask[n] = inside(g.position(i, j, k)) ? 1 : 0; });
  out.nodes = std::count(mask.begin(), mask.end(), 1);
  auto masked = [&](const ScalarField& f) {
    ScalarField m = f;
    for (std::size_t n = 0; n < m.size(); ++n)
      if (!mask[n]) m[n] = 0.0;
    return m;
  };
  double err2 = 0.0, ref2 = 0.0, linf = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const ScalarField diff = masked(solved.component(mu) - oracle.component(mu));
    const Norms e = norms(diff);
    const Norms r = norms(masked(oracle.component(mu)));
    out.rows.push_back({component_name(mu), e.l2, r.l2, r.l2 > 0.0 ? e.l2 / r.l2 : 0.0, e.linf});
    err2 += e.l2 * e.l2;
    ref2 += r.l2 * r.l2;
    linf = std::max(linf, e.linf);
  }
  const double e_all = std::sqrt(err2), r_all = std::sqrt(ref2);
  out.rows.push_back({"all", e_all, r_all, r_all > 0.0 ? e_all / r_all : 0.0, linf});
  return out;
}

std::string format_oracle_table(const OracleComparison& c) {
  std::string out = "oracle " + c.oracle + ", nodes " + std::to_string(c.nodes);
  char buf[160];
  if (c.radius > 0.0) {
    std::snprintf(buf, sizeof buf, ", r < %.6g", c.radius);
    out += buf;
  }
  out += "\ncomponent          l2_error      l2_reference  l2_relative      linf_error\n";
  for (const auto& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%-9s %15.8e %15.8e %15.8e %15.8e\n", r.component.c_str(), r.l2_error,
                  r.l2_reference, r.relative, r.linf_error);
    out += buf;
  }
  return out;
}

}  // namespace a4
