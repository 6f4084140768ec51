#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "calmks/calming.hpp"
#include "calmks/field.hpp"

namespace calmks {

/// I/O failure; the message always names the offending path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what);
};

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& text);
/// Whole-string decimal integer; throws std::invalid_argument otherwise.
int parse_int(const std::string& text);

/// Ordered key=value lines. Blank lines and lines starting with '#' are
/// skipped on read; whitespace around keys and values is trimmed.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const KeyValues& entries);
/// Last value for `key`, or nullptr.
const std::string* find_value(const KeyValues& entries, const std::string& key);

inline constexpr int kSnapshotLayoutVersion = 1;

struct SnapshotMeta {
  int layout_version = kSnapshotLayoutVersion;
  int n = 0;
  Shape shape = Shape::Vector;
  CalmingType kind = CalmingType::Identity;
  double epsilon = 0.0;
  double lambda = 0.0;
  double t = 0.0;
  double dt = 0.0;
};

/// Snapshot = `<stem>.bin` (raw little-endian float64, row-major with x as the
/// slow index, components concatenated) + `<stem>.meta` (key=value sidecar).
/// Returns the payload path.
std::filesystem::path write_snapshot(const std::filesystem::path& stem, const PhysicalField& field,
                                     const SnapshotMeta& meta);
/// Accepts the payload path, the sidecar path, or the bare stem.
std::pair<PhysicalField, SnapshotMeta> load_snapshot(const std::filesystem::path& path);

}  // namespace calmks
