#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "calmks/cli.hpp"
#include "calmks/experiments.hpp"
#include "calmks/io.hpp"

using namespace calmks;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> words{"calmks"};
  words.insert(words.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& w : words) argv.push_back(w.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

double printed_value(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  const auto start = pos + key.size() + 3;
  return parse_double(text.substr(start, text.find_first_of(" \n", start) - start));
}

}  // namespace

TEST_CASE("simulate") {
  TempDir dir("calmks_test_cli_sim");

  SUBCASE("T = 0 writes only the initial snapshot") {
    const auto r = run({"simulate", "--T", "0", "--n", "32", "--output-dir", dir / "out"});
    CHECK(r.code == kExitOk);
    const fs::path out = dir / "out";
    CHECK(fs::exists(out / "snapshots" / "snap_00000.bin"));
    CHECK(fs::exists(out / "snapshots" / "snap_00000.meta"));
    CHECK_FALSE(fs::exists(out / "snapshots" / "snap_00001.bin"));
    CHECK(count_lines(out / "norms.csv") == 2);
    CHECK(fs::exists(out / "manifest.cfg"));
  }
  SUBCASE("snapshots at every mark, norms every step") {
    const auto r = run({"simulate", "--form", "vector", "--kind", "type3", "--epsilon", "0.1", "--lambda", "4.1",
                        "--n", "32", "--T", "0.02", "--dt", "0.001", "--snapshot-every", "0.01", "--init",
                        "grad-sines", "--output-dir", dir / "out"});
    CHECK(r.code == kExitOk);
    const fs::path snaps = dir.path / "out" / "snapshots";
    for (int i = 0; i < 3; ++i) {
      const auto [field, meta] = load_snapshot(snaps / ("snap_0000" + std::to_string(i)));
      CHECK(meta.t == doctest::Approx(0.01 * i).epsilon(1e-12));
      CHECK(meta.kind == CalmingType::Type3);
      CHECK(meta.epsilon == 0.1);
      CHECK(meta.n == 32);
    }
    CHECK_FALSE(fs::exists(snaps / "snap_00003.bin"));
    CHECK(count_lines(dir.path / "out" / "norms.csv") == 22);
    CHECK(slurp(dir.path / "out" / "norms.csv").starts_with("t,l2,linf,h2\n"));
  }
  SUBCASE("rerunning from the manifest reproduces every output") {
    REQUIRE(run({"simulate", "--kind", "type1", "--epsilon", "0.05", "--n", "32", "--T", "0.01", "--snapshot-every",
                 "0.005", "--output-dir", dir / "a"}).code == kExitOk);
    REQUIRE(run({"simulate", "--config", dir / "a/manifest.cfg", "--output-dir", dir / "b"}).code == kExitOk);
    const fs::path a = dir.path / "a", b = dir.path / "b";
    CHECK(slurp(a / "norms.csv") == slurp(b / "norms.csv"));
    int files = 0;
    for (const auto& e : fs::directory_iterator(a / "snapshots")) {
      CHECK(slurp(e.path()) == slurp(b / "snapshots" / e.path().filename()));
      ++files;
    }
    CHECK(files == 6);
  }
  SUBCASE("flags override the config file") {
    std::ofstream(dir.path / "run.cfg") << "# short run\nn = 16\nT = 0\nkind = type2\nepsilon = 0.3\n";
    REQUIRE(run({"simulate", "--config", dir / "run.cfg", "--n", "32", "--output-dir", dir / "out"}).code == kExitOk);
    const auto kv = read_key_values(dir.path / "out" / "manifest.cfg");
    CHECK(*find_value(kv, "n") == "32");
    CHECK(*find_value(kv, "kind") == "type2");
    CHECK(*find_value(kv, "epsilon") == "0.3");
  }
  SUBCASE("blow-up aborts with the time") {
    const Grid g(16);
    PhysicalField bad(g, Shape::Vector);
    bad.at(1, 2, 2) = std::numeric_limits<double>::infinity();
    SnapshotMeta meta;
    meta.n = 16;
    write_snapshot(dir.path / "bad", bad, meta);
    const auto r = run({"simulate", "--n", "16", "--T", "0.01", "--init", "custom", "--init-file", dir / "bad",
                        "--output-dir", dir / "out"});
    CHECK(r.code == kExitRunFailed);
    CHECK(r.err.find("aborted at t=") != std::string::npos);
  }
}

TEST_CASE("configuration errors stop before any output") {
  TempDir dir("calmks_test_cli_bad");
  const std::string out = dir / "out";
  CHECK(run({"simulate", "--config", dir / "missing.cfg", "--output-dir", out}).code == kExitIo);
  CHECK(run({"simulate", "--dt", "-1", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--T", "0.1", "--dt", "0.5", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--n", "33", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--kind", "type5", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--kind", "type1", "--epsilon", "0", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--form", "scalar", "--init", "high-osc", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--init", "custom", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"simulate", "--lambda", "nan", "--output-dir", out}).code == kExitUsage);
  std::ofstream(dir.path / "unknown.cfg") << "colour = blue\n";
  CHECK(run({"simulate", "--config", dir / "unknown.cfg", "--output-dir", out}).code == kExitUsage);
  std::ofstream(dir.path / "badint.cfg") << "n = 12.5\n";
  CHECK(run({"simulate", "--config", dir / "badint.cfg", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"converge", "--kind", "type1", "--eps-list", "0.1", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"converge", "--kind", "type1", "--eps-list", "0.1,0.05,-0.01", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"converge", "--kind", "identity", "--output-dir", out}).code == kExitUsage);
  CHECK(run({"converge", "--kind", "type2", "--jobs", "0", "--output-dir", out}).code == kExitUsage);
  CHECK_FALSE(fs::exists(out));

  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"simulate", "--no-such-flag"}).code == kExitUsage);
  CHECK(run({"norms"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("converge") {
  TempDir dir("calmks_test_cli_conv");
  const auto r = run({"converge", "--kind", "type2", "--n", "32", "--T", "0.05", "--eps-list", "0.1,0.05,0.02",
                      "--jobs", "2", "--output-dir", dir / "out"});
  CHECK(r.code == kExitOk);
  const double slope = printed_value(r.out, "slope linf_l2");
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
  CHECK(r.out.find("slope linf_linf = ") != std::string::npos);
  CHECK(r.out.find("slope l2_h2 = ") != std::string::npos);
  const auto rows = read_error_csv(dir.path / "out" / "errors.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].epsilon == 0.1);
  CHECK(rows[2].epsilon == 0.02);
  CHECK(rows[0].err_linf_l2 > rows[2].err_linf_l2);
  const auto kv = read_key_values(dir.path / "out" / "manifest.cfg");
  CHECK(*find_value(kv, "eps_list") == "0.1,0.05,0.02");
  CHECK(*find_value(kv, "jobs") == "2");
}

TEST_CASE("norms") {
  TempDir dir("calmks_test_cli_norms");
  REQUIRE(run({"simulate", "--T", "0", "--n", "64", "--output-dir", dir / "gs"}).code == kExitOk);
  const auto r = run({"norms", dir / "gs/snapshots/snap_00000.bin"});
  CHECK(r.code == kExitOk);
  CHECK(printed_value(r.out, "l2") == doctest::Approx(2 * std::sqrt(2.0) * std::numbers::pi).epsilon(1e-8));
  CHECK(printed_value(r.out, "linf") == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(printed_value(r.out, "h2") > printed_value(r.out, "l2"));

  SnapshotMeta meta;
  meta.n = 16;
  write_snapshot(dir.path / "zero", PhysicalField(Grid(16), Shape::Vector), meta);
  const auto z = run({"norms", dir / "zero.meta"});
  CHECK(z.code == kExitOk);
  CHECK(printed_value(z.out, "l2") == 0.0);
  CHECK(printed_value(z.out, "linf") == 0.0);
  CHECK(printed_value(z.out, "h2") == 0.0);

  fs::resize_file(dir.path / "zero.bin", 1000);
  const auto t = run({"norms", dir / "zero"});
  CHECK(t.code == kExitIo);
  CHECK(t.err.find("zero.bin") != std::string::npos);
  CHECK(run({"norms", dir / "nothing"}).code == kExitIo);
}
