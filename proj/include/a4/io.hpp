#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "a4/diagnostics.hpp"
#include "a4/error.hpp"
#include "a4/field.hpp"

namespace a4 {

// A4PT snapshot: a 47-byte little-endian header
//   "A4PT" | u32 version | u32 nx, ny, nz | f64 h, dt, time | u8 component count (4) | u16 0x00FF
// followed by phi, Ax, Ay, Az as f64, component-major, x fastest.

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderSize = 47;

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::uint32_t nx = 0, ny = 0, nz = 0;
  double h = 0.0, dt = 0.0, time = 0.0;
  std::uint8_t component_count = 4;
  friend bool operator==(const SnapshotHeader&, const SnapshotHeader&) = default;
};

/// Malformed snapshot content. The reason distinguishes the failure modes.
class SnapshotFormatError : public IoError {
 public:
  enum class Reason { bad_magic, version_mismatch, bad_header, truncated };
  SnapshotFormatError(Reason r, const std::string& what) : IoError(what), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

std::vector<unsigned char> encode_snapshot(const FourPotentialField& f);
/// The grid is rebuilt from the header; origin and boundary are not stored.
FourPotentialField decode_snapshot(const std::vector<unsigned char>& bytes, const Vec3& origin = {},
                                   Boundary boundary = Boundary::periodic);
SnapshotHeader decode_snapshot_header(const std::vector<unsigned char>& bytes);

void write_snapshot(const FourPotentialField& f, const std::string& path);
FourPotentialField read_snapshot(const std::string& path, const Vec3& origin = {},
                                 Boundary boundary = Boundary::periodic);

/// Column names of the diagnostics CSV, in order.
std::vector<std::string> diagnostics_columns();
/// Header row plus one row per record; reals printed with 17 significant digits.
std::string format_diagnostics_csv(const std::vector<DiagnosticRecord>& records);
void write_diagnostics_csv(const std::vector<DiagnosticRecord>& records, const std::string& path);
std::vector<DiagnosticRecord> parse_diagnostics_csv(const std::string& text, const std::string& name = "<csv>");
std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path);

/// Whole-file helpers raising IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace a4
