#include "a4/ab_phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <string>

#include "a4/error.hpp"
#include "a4/operators.hpp"
#include "a4/parallel.hpp"
#include "text.hpp"

namespace a4 {

namespace {

constexpr int kMinLevels = 4;

struct PathIntegral {
  double value = 0.0;
  double estimate = 0.0;
  bool converged = false;
  double coarse = 0.0;
  double fine = 0.0;
};

// Integral of A . dx - c phi dt along the piecewise-linear spacetime path through
// `ev`. Composite trapezoid on every segment with the subinterval count doubled
// until successive totals agree, then one Richardson step.
PathIntegral integrate_path(const std::vector<Event>& ev, const PotentialProvider& p, double c,
                            const QuadratureOptions& opt) {
  PathIntegral r;
  if (ev.size() < 2) {
    r.converged = true;
    return r;
  }
  const std::size_t segments = ev.size() - 1;
  auto integrand = [&](std::size_t seg, double s) {
    const Event& a = ev[seg];
    const Event& b = ev[seg + 1];
    const Vec3 dx = b.x - a.x;
    const double dt = b.t - a.t;
    const PotentialValue v = p(a.x + s * dx, a.t + s * dt);
    return dot(v.a, dx) - c * v.phi * dt;
  };
  // Points s = m / n for odd m (all m at the first level), evaluated in parallel
  // and summed in a fixed order.
  auto add_points = [&](long n, long first, long stride, double& sum, double& abs_sum) {
    const long per_seg = (n - first + stride - 1) / stride;
    std::vector<double> vals(segments * static_cast<std::size_t>(per_seg));
    parallel_for(static_cast<long>(vals.size()), [&](long lo, long hi) {
      for (long q = lo; q < hi; ++q) {
        const std::size_t seg = static_cast<std::size_t>(q / per_seg);
        const long m = first + (q % per_seg) * stride;
        vals[static_cast<std::size_t>(q)] = integrand(seg, static_cast<double>(m) / static_cast<double>(n));
      }
    });
    for (double v : vals) {
      sum += v;
      abs_sum += std::abs(v);
    }
  };

  double end_sum = 0.0, end_abs = 0.0;
  for (std::size_t seg = 0; seg < segments; ++seg) {
    const double f0 = integrand(seg, 0.0), f1 = integrand(seg, 1.0);
    end_sum += 0.5 * (f0 + f1);
    end_abs += 0.5 * (std::abs(f0) + std::abs(f1));
  }
  long n = 2;
  double int_sum = 0.0, int_abs = 0.0;
  add_points(n, 1, 2, int_sum, int_abs);
  double prev = (end_sum + int_sum) / static_cast<double>(n);
  for (int level = 1; level <= opt.max_levels; ++level) {
    n *= 2;
    add_points(n, 1, 2, int_sum, int_abs);
    const double cur = (end_sum + int_sum) / static_cast<double>(n);
    const double abs_total = (end_abs + int_abs) / static_cast<double>(n);
    const double diff = cur - prev;
    r.coarse = prev;
    r.fine = cur;
    r.value = cur + diff / 3.0;
    r.estimate = std::abs(diff) / 3.0;
    if (level >= kMinLevels && std::abs(diff) <= opt.rel_tol * abs_total) {
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  return r;
}

PhaseResult finish(const PathIntegral& in, double scale, const QuadratureOptions& opt) {
  if (!in.converged && opt.strict) throw QuadratureError(scale * in.coarse, scale * in.fine);
  return {scale * in.value, std::abs(scale) * in.estimate, in.converged};
}

std::vector<Event> loop_events(const Loop& loop) {
  if (loop.vertices.size() < 2) throw ConfigError("loop needs at least two vertices");
  if (!(loop.vertices.front() == loop.vertices.back())) throw ConfigError("loop is not closed (first != last vertex)");
  std::vector<Event> ev;
  ev.reserve(loop.vertices.size());
  for (const Vec3& x : loop.vertices) ev.push_back({loop.time, x});
  return ev;
}

void check_time_order(const Worldline& w, const char* what) {
  if (w.samples.empty()) throw ConfigError(std::string(what) + " has no samples");
  for (std::size_t i = 1; i < w.samples.size(); ++i)
    if (!(w.samples[i].t > w.samples[i - 1].t))
      throw ConfigError(std::string(what) + " times must increase strictly (sample " + std::to_string(i) + ")");
}

bool same_event(const Event& a, const Event& b) {
  const double scale = std::max({1.0, std::abs(a.t), norm(a.x)});
  return std::abs(a.t - b.t) <= 1e-9 * scale && norm(a.x - b.x) <= 1e-9 * scale;
}

}  // namespace

Loop circle_loop(const Vec3& center, const Vec3& normal, double radius, int segments, double time, int winding) {
  if (segments < 3 || winding < 1 || !(radius > 0.0)) throw ConfigError("circle loop needs >= 3 segments, radius > 0");
  const Vec3 n = normal / norm(normal);
  const Vec3 trial = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 u = cross(n, trial);
  u = u / norm(u);
  const Vec3 v = cross(n, u);
  Loop loop;
  loop.time = time;
  const int total = segments * winding;
  for (int s = 0; s < total; ++s) {
    const double a = 2.0 * std::numbers::pi * s / segments;
    loop.vertices.push_back(center + radius * (std::cos(a) * u + std::sin(a) * v));
  }
  loop.vertices.push_back(loop.vertices.front());
  return loop;
}

Worldline parked_worldline(const Vec3& x, double t0, double t1, int n, double charge) {
  if (n < 1 || !(t1 > t0)) throw ConfigError("parked worldline needs t1 > t0 and n >= 1");
  Worldline w;
  w.charge = charge;
  for (int i = 0; i <= n; ++i) w.samples.push_back({i == n ? t1 : t0 + (t1 - t0) * i / n, x});
  return w;
}

void SnapshotHistory::add(FourPotentialField snapshot) {
  if (!snapshots_.empty()) {
    require_same_lattice(snapshots_.front().grid(), snapshot.grid(), "snapshot history");
    if (!(snapshot.time > snapshots_.back().time)) throw ConfigError("snapshot times must increase");
  }
  snapshots_.push_back(std::move(snapshot));
}

PotentialValue SnapshotHistory::operator()(const Vec3& x, double t) const {
  if (snapshots_.empty()) throw DomainError("no snapshots stored");
  auto sample = [&](const FourPotentialField& f) {
    return PotentialValue{interpolate(f.phi, x), interpolate(f.a, x)};
  };
  const double eps = 1e-9 * snapshots_.front().grid().dt();
  if (t < snapshots_.front().time - eps || t > snapshots_.back().time + eps)
    throw DomainError("time " + std::to_string(t) + " outside the stored snapshot range");
  auto it = std::upper_bound(snapshots_.begin(), snapshots_.end(), t,
                             [](double tt, const FourPotentialField& f) { return tt < f.time; });
  if (it == snapshots_.begin()) return sample(*it);
  if (it == snapshots_.end()) return sample(snapshots_.back());
  const FourPotentialField& a = *(it - 1);
  const FourPotentialField& b = *it;
  if (std::abs(t - a.time) <= eps) return sample(a);
  if (b.time - a.time > 4.0 * a.grid().dt() * (1.0 + 1e-12))
    throw DomainError("snapshot gap " + std::to_string(b.time - a.time) + " exceeds 4 dt around t = " +
                      std::to_string(t));
  const double w = (t - a.time) / (b.time - a.time);
  const PotentialValue va = sample(a), vb = sample(b);
  return {va.phi + w * (vb.phi - va.phi), va.a + w * (vb.a - va.a)};
}

PotentialProvider SnapshotHistory::provider() const {
  return [this](const Vec3& x, double t) { return (*this)(x, t); };
}

PotentialProvider snapshot_provider(const FourPotentialField& f) {
  return [&f](const Vec3& x, double) { return PotentialValue{interpolate(f.phi, x), interpolate(f.a, x)}; };
}

PhaseResult magnetic_ab_phase(const PotentialProvider& a, const Loop& loop, double q, const PhysicalConstants& k,
                              const QuadratureOptions& opt) {
  k.validate();
  const PotentialProvider spatial = [&](const Vec3& x, double t) { return PotentialValue{0.0, a(x, t).a}; };
  return finish(integrate_path(loop_events(loop), spatial, k.c, opt), q / (k.hbar * k.c), opt);
}

PhaseResult magnetic_ab_phase(const VectorField& a, const Loop& loop, double q, const PhysicalConstants& k,
                              const QuadratureOptions& opt) {
  for (const Vec3& x : loop.vertices)
    if (!a.grid().contains(x)) throw DomainError("loop leaves the grid domain");
  return magnetic_ab_phase([&](const Vec3& x, double) { return PotentialValue{0.0, interpolate(a, x)}; }, loop, q, k,
                           opt);
}

PhaseResult electric_ab_phase(std::span<const double> times, std::span<const double> phi1,
                              std::span<const double> phi2, double q, const PhysicalConstants& k) {
  k.validate();
  if (phi1.size() != times.size() || phi2.size() != times.size())
    throw ConfigError("electric AB phase: potential series and time axis have different lengths");
  if (times.size() < 2) throw ConfigError("electric AB phase needs at least two samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("electric AB phase: times must increase strictly");
  auto trapezoid = [&](std::size_t stride) {
    double s = 0.0;
    std::size_t i = 0;
    while (i + 1 < times.size()) {
      const std::size_t j = std::min(i + stride, times.size() - 1);
      s += 0.5 * (times[j] - times[i]) * ((phi1[i] - phi2[i]) + (phi1[j] - phi2[j]));
      i = j;
    }
    return s;
  };
  const double fine = trapezoid(1);
  const double coarse = times.size() >= 3 ? trapezoid(2) : fine;
  const double scale = -q / k.hbar;
  return {scale * fine, std::abs(scale * (fine - coarse)) / 3.0, true};
}

PhaseResult electric_ab_phase(const std::function<double(double)>& delta_phi, double t0, double t1, double q,
                              const PhysicalConstants& k, const QuadratureOptions& opt) {
  k.validate();
  if (!(t1 > t0)) throw ConfigError("electric AB phase needs t1 > t0");
  // A parked path at the origin: the integrand reduces to -c (phi_1 - phi_2) dt.
  const PotentialProvider p = [&](const Vec3&, double t) { return PotentialValue{delta_phi(t), {}}; };
  const std::vector<Event> ev{{t0, {}}, {t1, {}}};
  return finish(integrate_path(ev, p, k.c, opt), q / (k.hbar * k.c), opt);
}

PhaseResult covariant_phase(const PotentialProvider& a, const Worldline& path, const PhysicalConstants& k,
                            const QuadratureOptions& opt) {
  k.validate();
  check_time_order(path, "worldline");
  return finish(integrate_path(path.samples, a, k.c, opt), path.charge / (k.hbar * k.c), opt);
}

PhaseResult covariant_phase(const PotentialProvider& a, const Worldline& path, const Worldline& partner,
                            const PhysicalConstants& k, const QuadratureOptions& opt) {
  k.validate();
  check_time_order(path, "worldline");
  check_time_order(partner, "partner worldline");
  if (!same_event(path.samples.front(), partner.samples.front()) ||
      !same_event(path.samples.back(), partner.samples.back()))
    throw ConfigError("worldline and partner must share their first and last events");
  std::vector<Event> ev = path.samples;
  for (std::size_t i = partner.samples.size() - 1; i-- > 0;) ev.push_back(partner.samples[i]);
  ev.back() = ev.front();
  return finish(integrate_path(ev, a, k.c, opt), path.charge / (k.hbar * k.c), opt);
}

PhaseResult covariant_phase(const PotentialProvider& a, const Loop& loop, double q, const PhysicalConstants& k,
                            const QuadratureOptions& opt) {
  k.validate();
  return finish(integrate_path(loop_events(loop), a, k.c, opt), q / (k.hbar * k.c), opt);
}

double fringe_shift(double delta_phase, double fringe_spacing) {
  if (!(fringe_spacing > 0.0)) throw ConfigError("fringe spacing must be positive");
  return delta_phase / (2.0 * std::numbers::pi) * fringe_spacing;
}

void validate_worldline(const Worldline& w, const GridSpec& grid) {
  check_time_order(w, "worldline");
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    if (!grid.contains(w.samples[i].x)) throw DomainError("worldline sample " + std::to_string(i) + " outside the grid");
    if (i > 0 && norm(grid.displacement(w.samples[i].x, w.samples[i - 1].x)) > 8.0 * grid.h())
      throw ConfigError("worldline step " + std::to_string(i) + " longer than 8h");
  }
}

PathSpec parse_path_spec(std::istream& in, const std::string& name) {
  enum class Block { none, loop, worldline, partner };
  PathSpec spec;
  Block block = Block::none;
  std::string raw;
  int line_no = 0;
  auto numbers = [&](const std::vector<detail::Token>& toks, std::size_t from, std::size_t count) {
    if (toks.size() != from + count)
      throw SyntaxError(name, line_no, toks.empty() ? 1 : toks.back().column,
                        "expected " + std::to_string(count) + " numbers");
    std::vector<double> v;
    for (std::size_t i = from; i < toks.size(); ++i)
      v.push_back(detail::parse_double(toks[i].text, name, line_no, toks[i].column));
    return v;
  };
  auto close_loop = [&] {
    if (block != Block::loop) return;
    Loop& l = spec.loops.back().loop;
    if (l.vertices.size() < 2) throw SyntaxError(name, line_no, 1, "loop needs at least two vertices");
    if (!(l.vertices.front() == l.vertices.back())) l.vertices.push_back(l.vertices.front());
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto toks = detail::split_tokens(detail::strip_comment(raw));
    if (toks.empty()) continue;
    const std::string_view head = toks[0].text;
    if (head == "loop") {
      close_loop();
      if (toks.size() < 2 || toks.size() > 3)
        throw SyntaxError(name, line_no, toks[0].column, "expected 'loop <t> [q]'");
      PathSpec::LoopEntry e;
      e.loop.time = detail::parse_double(toks[1].text, name, line_no, toks[1].column);
      if (toks.size() == 3) e.charge = detail::parse_double(toks[2].text, name, line_no, toks[2].column);
      spec.loops.push_back(std::move(e));
      block = Block::loop;
    } else if (head == "worldline") {
      close_loop();
      if (toks.size() > 2) throw SyntaxError(name, line_no, toks[0].column, "expected 'worldline [q]'");
      PathSpec::WorldlineEntry e;
      if (toks.size() == 2) e.path.charge = detail::parse_double(toks[1].text, name, line_no, toks[1].column);
      spec.worldlines.push_back(std::move(e));
      block = Block::worldline;
    } else if (head == "partner") {
      if (block != Block::worldline || toks.size() != 1)
        throw SyntaxError(name, line_no, toks[0].column, "'partner' must directly follow a worldline block");
      spec.worldlines.back().has_partner = true;
      spec.worldlines.back().partner.charge = spec.worldlines.back().path.charge;
      block = Block::partner;
    } else {
      switch (block) {
        case Block::none:
          throw SyntaxError(name, line_no, toks[0].column, "sample outside a loop or worldline block");
        case Block::loop: {
          const auto v = numbers(toks, 0, 3);
          spec.loops.back().loop.vertices.push_back({v[0], v[1], v[2]});
          break;
        }
        case Block::worldline:
        case Block::partner: {
          const auto v = numbers(toks, 0, 4);
          Worldline& w = block == Block::worldline ? spec.worldlines.back().path : spec.worldlines.back().partner;
          if (!w.samples.empty() && !(v[0] > w.samples.back().t))
            throw SyntaxError(name, line_no, toks[0].column, "worldline times must increase strictly");
          w.samples.push_back({v[0], {v[1], v[2], v[3]}});
          break;
        }
      }
    }
  }
  close_loop();
  for (const auto& w : spec.worldlines) {
    if (w.path.samples.size() < 2) throw SyntaxError(name, line_no, 1, "worldline needs at least two samples");
    if (w.has_partner && w.partner.samples.size() < 2)
      throw SyntaxError(name, line_no, 1, "partner needs at least two samples");
  }
  return spec;
}

PathSpec read_path_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open path specification " + path);
  return parse_path_spec(in, path);
}

}  // namespace a4
