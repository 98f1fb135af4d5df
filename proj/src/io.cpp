#include "a4/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "a4/error.hpp"
#include "text.hpp"

namespace a4 {

namespace {

constexpr char kMagic[4] = {'A', '4', 'P', 'T'};
constexpr std::uint16_t kEndianMarker = 0x00FF;

void put_u(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) { put_u(out, std::bit_cast<std::uint64_t>(v), 8); }

std::uint64_t get_u(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u(p, 8)); }

using Reason = SnapshotFormatError::Reason;

}  // namespace

std::vector<unsigned char> encode_snapshot(const FourPotentialField& f) {
  const GridSpec& g = f.grid();
  std::vector<unsigned char> out;
  out.reserve(kSnapshotHeaderSize + 4 * 8 * g.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u(out, kSnapshotVersion, 4);
  for (int a = 0; a < 3; ++a) put_u(out, static_cast<std::uint32_t>(g.n(a)), 4);
  put_f64(out, g.h());
  put_f64(out, g.dt());
  put_f64(out, f.time);
  put_u(out, 4, 1);
  put_u(out, kEndianMarker, 2);
  for (int mu = 0; mu < 4; ++mu)
    for (double v : f.component(mu).values()) put_f64(out, v);
  return out;
}

SnapshotHeader decode_snapshot_header(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw SnapshotFormatError(Reason::bad_magic, "bad magic: not an A4PT snapshot");
  if (bytes.size() < kSnapshotHeaderSize) throw SnapshotFormatError(Reason::truncated, "truncated snapshot header");
  const unsigned char* p = bytes.data();
  SnapshotHeader h;
  h.version = static_cast<std::uint32_t>(get_u(p + 4, 4));
  if (h.version != kSnapshotVersion)
    throw SnapshotFormatError(Reason::version_mismatch, "snapshot version " + std::to_string(h.version) +
                                                            " (expected " + std::to_string(kSnapshotVersion) + ")");
  h.nx = static_cast<std::uint32_t>(get_u(p + 8, 4));
  h.ny = static_cast<std::uint32_t>(get_u(p + 12, 4));
  h.nz = static_cast<std::uint32_t>(get_u(p + 16, 4));
  h.h = get_f64(p + 20);
  h.dt = get_f64(p + 28);
  h.time = get_f64(p + 36);
  h.component_count = p[44];
  if (h.component_count != 4) throw SnapshotFormatError(Reason::bad_header, "snapshot component count must be 4");
  if (get_u(p + 45, 2) != kEndianMarker) throw SnapshotFormatError(Reason::bad_header, "bad endianness marker");
  return h;
}

FourPotentialField decode_snapshot(const std::vector<unsigned char>& bytes, const Vec3& origin, Boundary boundary) {
  const SnapshotHeader h = decode_snapshot_header(bytes);
  GridSpec g;
  try {
    g = GridSpec({static_cast<int>(h.nx), static_cast<int>(h.ny), static_cast<int>(h.nz)}, h.h, h.dt, origin, boundary);
  } catch (const ConfigError& e) {
    throw SnapshotFormatError(Reason::bad_header, std::string("invalid snapshot lattice: ") + e.what());
  }
  const std::size_t expected = kSnapshotHeaderSize + 4 * 8 * g.size();
  if (bytes.size() < expected)
    throw SnapshotFormatError(Reason::truncated, "truncated snapshot payload: " + std::to_string(bytes.size()) +
                                                     " of " + std::to_string(expected) + " bytes");
  if (bytes.size() > expected) throw SnapshotFormatError(Reason::bad_header, "trailing bytes after snapshot payload");
  FourPotentialField f(g, h.time);
  const unsigned char* p = bytes.data() + kSnapshotHeaderSize;
  for (int mu = 0; mu < 4; ++mu)
    for (double& v : f.component(mu).values()) {
      v = get_f64(p);
      p += 8;
    }
  return f;
}

void write_snapshot(const FourPotentialField& f, const std::string& path) {
  const auto bytes = encode_snapshot(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

FourPotentialField read_snapshot(const std::string& path, const Vec3& origin, Boundary boundary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes, origin, boundary);
  } catch (const SnapshotFormatError& e) {
    throw SnapshotFormatError(e.reason(), path + ": " + e.what());
  }
}

std::vector<std::string> diagnostics_columns() {
  std::vector<std::string> c{"step", "time", "lorentz_l2", "lorentz_linf"};
  for (const char* n : kMaxwellNames) {
    c.push_back(std::string(n) + "_l2");
    c.push_back(std::string(n) + "_linf");
  }
  for (int mu = 0; mu < 4; ++mu) {
    c.push_back(std::string("dalembert_") + component_name(mu) + "_l2");
    c.push_back(std::string("dalembert_") + component_name(mu) + "_linf");
  }
  c.push_back("energy");
  return c;
}

namespace {

std::vector<double> record_values(const DiagnosticRecord& r) {
  std::vector<double> v{r.time, r.lorentz.l2, r.lorentz.linf, r.gauss_e.l2, r.gauss_e.linf, r.ampere.l2,
                        r.ampere.linf, r.gauss_h.l2, r.gauss_h.linf, r.faraday.l2, r.faraday.linf};
  for (const Norms& n : r.dalembert) {
    v.push_back(n.l2);
    v.push_back(n.linf);
  }
  v.push_back(r.energy);
  return v;
}

}  // namespace

std::string format_diagnostics_csv(const std::vector<DiagnosticRecord>& records) {
  std::string out;
  const auto cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  char buf[32];
  for (const auto& r : records) {
    out += std::to_string(r.step);
    for (double v : record_values(r)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_diagnostics_csv(const std::vector<DiagnosticRecord>& records, const std::string& path) {
  write_text_file(path, format_diagnostics_csv(records));
}

std::vector<DiagnosticRecord> parse_diagnostics_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  const auto cols = diagnostics_columns();
  std::string header;
  for (std::size_t i = 0; i < cols.size(); ++i) header += (i ? "," : "") + cols[i];
  if (!std::getline(in, line) || detail::trim(line) != header)
    throw SyntaxError(name, 1, 1, "unexpected diagnostics CSV header");
  std::vector<DiagnosticRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::vector<int> columns;
    std::string_view rest = line;
    int col = 1;
    while (true) {
      const auto p = rest.find(',');
      fields.push_back(detail::trim(rest.substr(0, p)));
      columns.push_back(col);
      if (p == std::string_view::npos) break;
      col += static_cast<int>(p) + 1;
      rest.remove_prefix(p + 1);
    }
    if (fields.size() != cols.size())
      throw SyntaxError(name, line_no, 1, "expected " + std::to_string(cols.size()) + " fields");
    std::vector<double> v;
    for (std::size_t i = 1; i < fields.size(); ++i)
      v.push_back(detail::parse_double(fields[i], name, line_no, columns[i]));
    DiagnosticRecord r;
    r.step = static_cast<long>(detail::parse_int(fields[0], name, line_no, 1));
    std::size_t p = 0;
    r.time = v[p++];
    for (Norms* n : {&r.lorentz, &r.gauss_e, &r.ampere, &r.gauss_h, &r.faraday}) {
      n->l2 = v[p++];
      n->linf = v[p++];
    }
    for (Norms& n : r.dalembert) {
      n.l2 = v[p++];
      n.linf = v[p++];
    }
    r.energy = v[p++];
    out.push_back(r);
  }
  return out;
}

std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path) {
  return parse_diagnostics_csv(read_text_file(path), path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("short write to " + path);
}

}  // namespace a4
