#include "a4/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "a4/error.hpp"
#include "a4/io.hpp"
#include "text.hpp"

namespace a4 {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // of the value
  int key_column = 0;
  bool used = false;
};

struct Table {
  std::string name;
  bool array = false;
  int line = 0;
  std::map<std::string, Entry> entries;
};

const std::set<std::string> kSingleSections{"grid", "constants", "run", "initial", "ensemble", "output", "compare"};
const std::set<std::string> kArraySections{"source", "mode"};

std::vector<Table> split_tables(const std::string& text, const std::string& file) {
  std::vector<Table> tables;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view body = detail::strip_comment(raw);
    const std::string_view line = detail::trim(body);
    if (line.empty()) continue;
    const int col = static_cast<int>(line.data() - body.data()) + 1;
    if (line.front() == '[') {
      const bool array = line.starts_with("[[");
      const std::string_view close = array ? "]]" : "]";
      if (!line.ends_with(close) || line.size() <= 2 * close.size())
        throw SyntaxError(file, line_no, col, "malformed section header");
      const std::string name(detail::trim(line.substr(close.size(), line.size() - 2 * close.size())));
      if (array ? !kArraySections.count(name) : !kSingleSections.count(name))
        throw SyntaxError(file, line_no, col,
                          "unknown section " + std::string(array ? "[[" : "[") + name + (array ? "]]" : "]"));
      if (!array && !seen.insert(name).second)
        throw SyntaxError(file, line_no, col, "section [" + name + "] appears twice");
      tables.push_back({name, array, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(file, line_no, col, "expected 'key = value'");
    if (tables.empty()) throw SyntaxError(file, line_no, col, "key outside any section");
    const std::string key(detail::trim(line.substr(0, eq)));
    if (key.empty()) throw SyntaxError(file, line_no, col, "empty key");
    for (char ch : key)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        throw SyntaxError(file, line_no, col, "invalid character in key '" + key + "'");
    std::string_view value = line.substr(eq + 1);
    std::size_t lead = 0;
    while (lead < value.size() && detail::is_space(value[lead])) ++lead;
    value = detail::trim(value);
    const int vcol = col + static_cast<int>(eq + 1 + lead);
    if (value.empty()) throw SyntaxError(file, line_no, vcol, "missing value for '" + key + "'");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    auto& entries = tables.back().entries;
    if (entries.count(key)) throw SyntaxError(file, line_no, col, "duplicate key '" + key + "'");
    entries[key] = {std::string(value), line_no, vcol, col, false};
  }
  return tables;
}

class Reader {
 public:
  Reader(Table& t, const std::string& file) : t_(t), file_(file) {}

  bool has(const std::string& key) const { return t_.entries.count(key) > 0; }
  int line() const { return t_.line; }
  int line_of(const std::string& key) const { return has(key) ? t_.entries.at(key).line : t_.line; }

  std::string str(const std::string& key) {
    Entry& e = require(key);
    return e.value;
  }
  std::string str(const std::string& key, const std::string& fallback) { return has(key) ? str(key) : fallback; }

  double real(const std::string& key) {
    const auto v = reals(key, 1);
    return v[0];
  }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  long long integer(const std::string& key) {
    Entry& e = require(key);
    return detail::parse_int(detail::trim(e.value), file_, e.line, e.column);
  }
  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    Entry& e = require(key);
    return detail::parse_u64(detail::trim(e.value), file_, e.line, e.column);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    Entry& e = require(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw SyntaxError(file_, e.line, e.column, "expected true or false");
  }

  std::vector<double> reals(const std::string& key, std::size_t count) {
    Entry& e = require(key);
    const auto toks = detail::split_tokens(e.value, e.column - 1);
    if (toks.size() != count)
      throw SyntaxError(file_, e.line, e.column,
                        "'" + key + "' expects " + std::to_string(count) + " number" + (count > 1 ? "s" : ""));
    std::vector<double> v;
    for (const auto& tok : toks) v.push_back(detail::parse_double(tok.text, file_, e.line, tok.column));
    return v;
  }

  Vec3 vec3(const std::string& key) {
    const auto v = reals(key, 3);
    return {v[0], v[1], v[2]};
  }
  Vec3 vec3(const std::string& key, const Vec3& fallback) { return has(key) ? vec3(key) : fallback; }

  std::array<double, 4> vec4(const std::string& key) {
    const auto v = reals(key, 4);
    return {v[0], v[1], v[2], v[3]};
  }

  std::array<int, 3> ivec3(const std::string& key) {
    Entry& e = require(key);
    const auto toks = detail::split_tokens(e.value, e.column - 1);
    if (toks.size() != 1 && toks.size() != 3)
      throw SyntaxError(file_, e.line, e.column, "'" + key + "' expects one or three integers");
    std::array<int, 3> out{};
    for (std::size_t a = 0; a < 3; ++a) {
      const auto& tok = toks[toks.size() == 1 ? 0 : a];
      out[a] = static_cast<int>(detail::parse_int(tok.text, file_, e.line, tok.column));
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, e] : t_.entries)
      if (!e.used) throw SyntaxError(file_, e.line, e.key_column, "unknown key '" + key + "' in [" + t_.name + "]");
  }

 private:
  Entry& require(const std::string& key) {
    auto it = t_.entries.find(key);
    if (it == t_.entries.end())
      throw SyntaxError(file_, t_.line, 1, "missing key '" + key + "' in [" + t_.name + "]");
    it->second.used = true;
    return it->second;
  }

  Table& t_;
  const std::string& file_;
};

// Runs `f`, prefixing any ConfigError with the file and line it concerns.
template <class F>
auto at_line(const std::string& file, int line, F&& f) {
  try {
    return f();
  } catch (const GridMismatch&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + e.what());
  }
}

Vec3 wave_vector(Reader& r, const GridSpec& g, const std::string& file) {
  if (r.has("k") && r.has("k_modes")) throw SyntaxError(file, r.line_of("k_modes"), 1, "give either k or k_modes");
  if (r.has("k_modes")) {
    const Vec3 m = r.vec3("k_modes");
    Vec3 k;
    for (int a = 0; a < 3; ++a) k[a] = 2.0 * std::numbers::pi * m[a] / g.extent(a);
    return k;
  }
  return r.vec3("k");
}

PlaneWaveKind wave_kind(const std::string& s, const std::string& file, int line) {
  if (s == "transverse") return PlaneWaveKind::transverse;
  if (s == "scalar_photon") return PlaneWaveKind::scalar_photon;
  if (s == "general") return PlaneWaveKind::general;
  throw SyntaxError(file, line, 1, "unknown wave kind '" + s + "'");
}

const char* wave_kind_name(PlaneWaveKind k) {
  switch (k) {
    case PlaneWaveKind::transverse: return "transverse";
    case PlaneWaveKind::scalar_photon: return "scalar_photon";
    case PlaneWaveKind::general: return "general";
  }
  return "?";
}

SourceModel read_source(Reader& r, const std::string& file) {
  const std::string type = r.str("type");
  if (type == "static_charge") return StaticGaussianCharge{r.real("q"), r.real("sigma"), r.vec3("center")};
  if (type == "moving_charge")
    return UniformlyMovingCharge{r.real("q"), r.real("sigma"), r.vec3("start"), r.vec3("velocity")};
  if (type == "dipole") return OscillatingDipole{r.vec3("moment"), r.real("omega"), r.real("sigma"), r.vec3("center")};
  if (type == "solenoid") {
    FiniteSolenoid s;
    s.center = r.vec3("center");
    s.axis = r.vec3("axis", s.axis);
    s.radius = r.real("radius");
    s.length = r.real("length");
    s.surface_current = r.real("surface_current");
    s.shell_width = r.real("shell_width", 0.0);
    return s;
  }
  if (type == "charge_transfer") {
    ChargeTransferPulse p;
    p.q = r.real("q");
    p.sigma = r.real("sigma");
    p.x_minus = r.vec3("x_minus");
    p.x_plus = r.vec3("x_plus");
    p.window = {r.real("t_on"), r.real("t_rise"), r.real("t_hold"), r.real("t_fall")};
    return p;
  }
  throw SyntaxError(file, r.line_of("type"), 1, "unknown source type '" + type + "'");
}

void check_sources(Scenario& s) {
  for (const auto& src : s.sources) {
    validate_source(src, s.grid, s.constants);
    if (const auto* m = std::get_if<UniformlyMovingCharge>(&src)) {
      // The packet must stay clear of absorbing faces for the whole run.
      if (!s.grid.periodic()) (void)eval(src, s.end_time(), s.grid);
      (void)m;
    }
  }
  if (s.relaxation && s.grid.periodic()) {
    double q = 0.0;
    for (const auto& src : s.sources) {
      if (const auto* c = std::get_if<StaticGaussianCharge>(&src)) q += c->q;
      if (const auto* c = std::get_if<UniformlyMovingCharge>(&src)) q += c->q;
    }
    if (q != 0.0) throw ConfigError("relaxation on a periodic grid needs zero net charge");
  }
}

void check_cadence(long n_steps, long& every, const char* what, std::vector<std::string>& warnings) {
  if (every < 1) throw ConfigError(std::string(what) + " must be >= 1");
  if (n_steps > 0 && every > n_steps) {
    warnings.push_back(std::string(what) + " " + std::to_string(every) + " exceeds n_steps; clamped to " +
                       std::to_string(n_steps));
    every = n_steps;
  }
  if (n_steps > 0 && n_steps % every != 0)
    warnings.push_back(std::string(what) + " " + std::to_string(every) + " does not divide n_steps " +
                       std::to_string(n_steps) + "; the final step is recorded as well");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

std::string fmt(const std::array<double, 4>& v) {
  return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]) + " " + fmt(v[3]);
}

}  // namespace

BoundaryKind Scenario::boundary_kind() const {
  if (grid.periodic()) return BoundaryKind::periodic;
  return relaxation ? BoundaryKind::far_field : BoundaryKind::mur_first_order;
}

double Scenario::effective_damping() const {
  if (damping) return *damping;
  return relaxation ? relaxation_damping(grid, constants) : 0.0;
}

std::string Scenario::resolve(const std::string& path) const {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.grid == b.grid && a.constants == b.constants && a.n_steps == b.n_steps &&
         a.snapshot_every == b.snapshot_every && a.diagnostic_every == b.diagnostic_every &&
         a.relaxation == b.relaxation && a.damping == b.damping && a.seed == b.seed && a.sources == b.sources &&
         a.initial == b.initial && a.ensemble == b.ensemble && a.output == b.output &&
         a.compare_radius == b.compare_radius;
}

void validate_scenario(Scenario& s) {
  s.constants.validate();
  s.grid.check_cfl(s.constants.c);
  if (s.n_steps < 0) throw ConfigError("n_steps must be >= 0");
  s.warnings.clear();
  check_cadence(s.n_steps, s.snapshot_every, "snapshot_every", s.warnings);
  check_cadence(s.n_steps, s.diagnostic_every, "diagnostic_every", s.warnings);
  if (s.damping && !(*s.damping >= 0.0 && std::isfinite(*s.damping))) throw ConfigError("damping must be >= 0");
  check_sources(s);
  if (const auto* pw = std::get_if<PlaneWaveInitial>(&s.initial)) {
    (void)pw->wave();
    validate_mode({pw->wave().polarization(), pw->k, pw->amplitude, pw->phase}, s.grid);
  } else if (const auto* c = std::get_if<CoulombInitial>(&s.initial)) {
    validate_source(StaticGaussianCharge{c->q, c->sigma, c->center}, s.grid, s.constants);
  } else if (const auto* f = std::get_if<FileInitial>(&s.initial)) {
    for (const std::string* p : {&f->path, &f->previous})
      if (!p->empty() && !std::filesystem::exists(s.resolve(*p)))
        throw IoError("initial-condition file not found: " + s.resolve(*p));
  }
  if (s.ensemble) {
    s.ensemble->seed = s.seed;
    validate_ensemble(*s.ensemble);
    for (const auto& m : s.ensemble->modes) validate_mode(m, s.grid);
  }
  if (s.compare_radius && !(*s.compare_radius > 0.0)) throw ConfigError("compare radius must be positive");
}

Scenario parse_scenario(const std::string& text, const std::string& file, const std::string& base_dir) {
  std::vector<Table> tables = split_tables(text, file);
  auto find = [&](const std::string& name) -> Table* {
    for (auto& t : tables)
      if (t.name == name) return &t;
    return nullptr;
  };
  Scenario s;
  s.base_dir = base_dir;

  if (Table* t = find("constants")) {
    Reader r(*t, file);
    const std::string units = r.str("units", "natural");
    if (units == "natural")
      s.constants = PhysicalConstants::natural();
    else if (units == "gaussian")
      s.constants = PhysicalConstants::gaussian();
    else
      throw SyntaxError(file, r.line_of("units"), 1, "unknown unit system '" + units + "'");
    s.constants.c = r.real("c", s.constants.c);
    s.constants.hbar = r.real("hbar", s.constants.hbar);
    r.finish();
    at_line(file, t->line, [&] { s.constants.validate(); });
  }

  Table* grid = find("grid");
  if (!grid) throw SyntaxError(file, 1, 1, "missing [grid] section");
  {
    Reader r(*grid, file);
    const auto n = r.ivec3("n");
    const double h = r.real("h");
    if (r.has("dt") && r.has("courant")) throw SyntaxError(file, r.line_of("courant"), 1, "give either dt or courant");
    const double dt = r.has("courant") ? r.real("courant") * h / s.constants.c : r.real("dt");
    const Vec3 origin = r.vec3("origin", {});
    const std::string b = r.str("boundary", "periodic");
    Boundary boundary;
    if (b == "periodic")
      boundary = Boundary::periodic;
    else if (b == "absorbing")
      boundary = Boundary::absorbing;
    else
      throw SyntaxError(file, r.line_of("boundary"), 1, "unknown boundary '" + b + "'");
    r.finish();
    s.grid = at_line(file, grid->line, [&] { return GridSpec::create(n, h, dt, s.constants.c, origin, boundary); });
  }

  Table* run = find("run");
  if (!run) throw SyntaxError(file, 1, 1, "missing [run] section");
  {
    Reader r(*run, file);
    s.n_steps = static_cast<long>(r.integer("n_steps"));
    s.snapshot_every = static_cast<long>(r.integer("snapshot_every", std::max<long>(s.n_steps, 1)));
    s.diagnostic_every = static_cast<long>(r.integer("diagnostic_every", 1));
    s.relaxation = r.boolean("relaxation", false);
    if (r.has("damping")) s.damping = r.real("damping");
    s.seed = r.u64("seed", 0);
    r.finish();
  }

  if (Table* t = find("initial")) {
    Reader r(*t, file);
    const std::string kind = r.str("kind", "zero");
    if (kind == "zero") {
      s.initial = ZeroInitial{};
    } else if (kind == "plane_wave") {
      PlaneWaveInitial p;
      p.kind = wave_kind(r.str("wave", "transverse"), file, r.line_of("wave"));
      if (p.kind != PlaneWaveKind::scalar_photon)
        p.polarization = r.vec4("polarization");
      else
        p.polarization = {1.0, 0.0, 0.0, 0.0};
      p.k = wave_vector(r, s.grid, file);
      p.amplitude = r.real("amplitude", 1.0);
      p.phase = r.real("phase", 0.0);
      s.initial = p;
    } else if (kind == "coulomb") {
      s.initial = CoulombInitial{r.real("q"), r.real("sigma"), r.vec3("center")};
    } else if (kind == "file") {
      s.initial = FileInitial{r.str("path"), r.str("previous", "")};
    } else {
      throw SyntaxError(file, r.line_of("kind"), 1, "unknown initial kind '" + kind + "'");
    }
    r.finish();
  }

  bool have_ensemble = false;
  for (auto& t : tables) {
    if (t.name == "source") {
      Reader r(t, file);
      s.sources.push_back(read_source(r, file));
      r.finish();
      at_line(file, t.line, [&] { validate_source(s.sources.back(), s.grid, s.constants); });
    } else if (t.name == "ensemble") {
      Reader r(t, file);
      EnsembleSpec e;
      e.n_members = static_cast<int>(r.integer("n_members"));
      const std::string law = r.str("law", "symmetric_uniform");
      e.law = at_line(file, r.line_of("law"), [&] { return amplitude_law_from_string(law); });
      r.finish();
      s.ensemble = e;
      have_ensemble = true;
    } else if (t.name == "mode") {
      if (!have_ensemble) throw SyntaxError(file, t.line, 1, "[[mode]] must follow [ensemble]");
      Reader r(t, file);
      HomogeneousMode m;
      m.polarization = r.vec4("polarization");
      m.k = wave_vector(r, s.grid, file);
      m.amplitude = r.real("amplitude", 1.0);
      m.phase = r.real("phase", 0.0);
      r.finish();
      at_line(file, t.line, [&] { validate_mode(m, s.grid); });
      s.ensemble->modes.push_back(m);
    }
  }

  if (Table* t = find("output")) {
    Reader r(*t, file);
    s.output.directory = r.str("directory", s.output.directory);
    s.output.snapshots = r.boolean("snapshots", s.output.snapshots);
    s.output.diagnostics = r.str("diagnostics", s.output.diagnostics);
    r.finish();
  }
  if (Table* t = find("compare")) {
    Reader r(*t, file);
    if (r.has("radius")) s.compare_radius = r.real("radius");
    r.finish();
  }

  at_line(file, run->line, [&] { validate_scenario(s); });
  return s;
}

Scenario load_scenario(const std::string& path) {
  const std::string text = read_text_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  return parse_scenario(text, path, dir);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  const GridSpec& g = s.grid;
  o << "[grid]\n"
    << "n = " << g.nx() << " " << g.ny() << " " << g.nz() << "\n"
    << "h = " << fmt(g.h()) << "\n"
    << "dt = " << fmt(g.dt()) << "\n"
    << "origin = " << fmt(g.origin()) << "\n"
    << "boundary = " << to_string(g.boundary()) << "\n\n";
  o << "[constants]\n"
    << "units = " << to_string(s.constants.unit_mode) << "\n"
    << "c = " << fmt(s.constants.c) << "\n"
    << "hbar = " << fmt(s.constants.hbar) << "\n\n";
  o << "[run]\n"
    << "n_steps = " << s.n_steps << "\n"
    << "snapshot_every = " << s.snapshot_every << "\n"
    << "diagnostic_every = " << s.diagnostic_every << "\n"
    << "relaxation = " << (s.relaxation ? "true" : "false") << "\n";
  if (s.damping) o << "damping = " << fmt(*s.damping) << "\n";
  o << "seed = " << s.seed << "\n\n";

  o << "[initial]\n";
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, ZeroInitial>) {
          o << "kind = zero\n";
        } else if constexpr (std::is_same_v<T, PlaneWaveInitial>) {
          o << "kind = plane_wave\nwave = " << wave_kind_name(init.kind) << "\n";
          if (init.kind != PlaneWaveKind::scalar_photon) o << "polarization = " << fmt(init.polarization) << "\n";
          o << "k = " << fmt(init.k) << "\namplitude = " << fmt(init.amplitude) << "\nphase = " << fmt(init.phase)
            << "\n";
        } else if constexpr (std::is_same_v<T, CoulombInitial>) {
          o << "kind = coulomb\nq = " << fmt(init.q) << "\nsigma = " << fmt(init.sigma)
            << "\ncenter = " << fmt(init.center) << "\n";
        } else {
          o << "kind = file\npath = " << init.path << "\n";
          if (!init.previous.empty()) o << "previous = " << init.previous << "\n";
        }
      },
      s.initial);

  for (const auto& src : s.sources) {
    o << "\n[[source]]\n";
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, StaticGaussianCharge>) {
            o << "type = static_charge\nq = " << fmt(m.q) << "\nsigma = " << fmt(m.sigma)
              << "\ncenter = " << fmt(m.center) << "\n";
          } else if constexpr (std::is_same_v<T, UniformlyMovingCharge>) {
            o << "type = moving_charge\nq = " << fmt(m.q) << "\nsigma = " << fmt(m.sigma)
              << "\nstart = " << fmt(m.start) << "\nvelocity = " << fmt(m.velocity) << "\n";
          } else if constexpr (std::is_same_v<T, OscillatingDipole>) {
            o << "type = dipole\nmoment = " << fmt(m.moment) << "\nomega = " << fmt(m.omega)
              << "\nsigma = " << fmt(m.sigma) << "\ncenter = " << fmt(m.center) << "\n";
          } else if constexpr (std::is_same_v<T, FiniteSolenoid>) {
            o << "type = solenoid\ncenter = " << fmt(m.center) << "\naxis = " << fmt(m.axis)
              << "\nradius = " << fmt(m.radius) << "\nlength = " << fmt(m.length)
              << "\nsurface_current = " << fmt(m.surface_current) << "\nshell_width = " << fmt(m.shell_width)
              << "\n";
          } else {
            o << "type = charge_transfer\nq = " << fmt(m.q) << "\nsigma = " << fmt(m.sigma)
              << "\nx_minus = " << fmt(m.x_minus) << "\nx_plus = " << fmt(m.x_plus)
              << "\nt_on = " << fmt(m.window.t_on) << "\nt_rise = " << fmt(m.window.t_rise)
              << "\nt_hold = " << fmt(m.window.t_hold) << "\nt_fall = " << fmt(m.window.t_fall) << "\n";
          }
        },
        src);
  }

  if (s.ensemble) {
    o << "\n[ensemble]\nn_members = " << s.ensemble->n_members << "\nlaw = " << to_string(s.ensemble->law) << "\n";
    for (const auto& m : s.ensemble->modes)
      o << "\n[[mode]]\npolarization = " << fmt(m.polarization) << "\nk = " << fmt(m.k)
        << "\namplitude = " << fmt(m.amplitude) << "\nphase = " << fmt(m.phase) << "\n";
  }

  o << "\n[output]\ndirectory = " << s.output.directory << "\nsnapshots = " << (s.output.snapshots ? "true" : "false")
    << "\ndiagnostics = " << s.output.diagnostics << "\n";
  if (s.compare_radius) o << "\n[compare]\nradius = " << fmt(*s.compare_radius) << "\n";
  return o.str();
}

}  // namespace a4
