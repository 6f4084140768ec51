#include "calmks/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "calmks/config.hpp"

namespace calmks {

namespace fs = std::filesystem;

IoError::IoError(const fs::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw IoError(path, "line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw IoError(path, "line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(t.substr(eq + 1)));
  }
  return out;
}

void write_key_values(const fs::path& path, const KeyValues& entries) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  if (!out) throw IoError(path, "write failed");
}

const std::string* find_value(const KeyValues& entries, const std::string& key) {
  const std::string* found = nullptr;
  for (const auto& [k, v] : entries) {
    if (k == key) found = &v;
  }
  return found;
}

namespace {

fs::path snapshot_stem(const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".bin" || ext == ".meta") return fs::path(path).replace_extension();
  return path;
}

fs::path with_suffix(const fs::path& stem, const char* suffix) {
  return fs::path(stem.string() + suffix);
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

const std::string& require(const KeyValues& kv, const std::string& key, const fs::path& path) {
  const std::string* v = find_value(kv, key);
  if (!v) throw IoError(path, "missing key '" + key + "'");
  return *v;
}

}  // namespace

fs::path write_snapshot(const fs::path& stem_in, const PhysicalField& field,
                        const SnapshotMeta& meta) {
  const fs::path stem = snapshot_stem(stem_in);
  const fs::path payload = with_suffix(stem, ".bin");
  const fs::path sidecar = with_suffix(stem, ".meta");
  {
    std::ofstream out(payload, std::ios::binary);
    if (!out) throw IoError(payload, "cannot open for writing");
    std::vector<std::uint64_t> words(field.data().size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      words[i] = to_little_endian(std::bit_cast<std::uint64_t>(field.data()[i]));
    }
    out.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (!out) throw IoError(payload, "write failed");
  }
  write_key_values(sidecar, {
                                {"layout_version", std::to_string(meta.layout_version)},
                                {"n", std::to_string(field.n())},
                                {"components", std::to_string(field.components())},
                                {"form", std::string(to_string(field.shape()))},
                                {"kind", std::string(to_string(meta.kind))},
                                {"epsilon", format_double(meta.epsilon)},
                                {"lambda", format_double(meta.lambda)},
                                {"t", format_double(meta.t)},
                                {"dt", format_double(meta.dt)},
                                {"dtype", "float64"},
                                {"byte_order", "little"},
                                {"order", "row-major-x-slow"},
                                {"payload", payload.filename().string()},
                            });
  return payload;
}

std::pair<PhysicalField, SnapshotMeta> load_snapshot(const fs::path& path) {
  const fs::path stem = snapshot_stem(path);
  const fs::path sidecar = with_suffix(stem, ".meta");
  const fs::path payload = with_suffix(stem, ".bin");
  const KeyValues kv = read_key_values(sidecar);

  SnapshotMeta meta;
  try {
    meta.layout_version = parse_int(require(kv, "layout_version", sidecar));
    meta.n = parse_int(require(kv, "n", sidecar));
    meta.shape = parse_shape(require(kv, "form", sidecar));
    meta.kind = parse_calming_type(require(kv, "kind", sidecar));
    meta.epsilon = parse_double(require(kv, "epsilon", sidecar));
    meta.lambda = parse_double(require(kv, "lambda", sidecar));
    meta.t = parse_double(require(kv, "t", sidecar));
    meta.dt = parse_double(require(kv, "dt", sidecar));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(sidecar, std::string("malformed metadata: ") + e.what());
  }
  if (meta.layout_version != kSnapshotLayoutVersion) {
    throw IoError(sidecar, "unsupported layout version " + std::to_string(meta.layout_version));
  }
  if (const auto* comps = find_value(kv, "components");
      comps && *comps != std::to_string(component_count(meta.shape))) {
    throw IoError(sidecar, "component count disagrees with form");
  }
  std::optional<Grid> grid;
  try {
    grid.emplace(meta.n);
  } catch (const std::invalid_argument& e) {
    throw IoError(sidecar, e.what());
  }
  PhysicalField field(*grid, meta.shape);

  std::ifstream in(payload, std::ios::binary);
  if (!in) throw IoError(payload, "cannot open for reading");
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  const std::size_t expected = field.data().size() * sizeof(double);
  if (bytes != expected) {
    throw IoError(payload, "payload holds " + std::to_string(bytes) + " bytes, metadata implies " +
                               std::to_string(expected));
  }
  in.seekg(0);
  std::vector<std::uint64_t> words(field.data().size());
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(expected));
  if (!in) throw IoError(payload, "read failed");
  for (std::size_t i = 0; i < words.size(); ++i) {
    field.data()[i] = std::bit_cast<double>(to_little_endian(words[i]));
  }
  return {std::move(field), meta};
}

}  // namespace calmks
