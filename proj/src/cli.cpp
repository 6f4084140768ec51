#include "calmks/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "calmks/config.hpp"
#include "calmks/experiments.hpp"
#include "calmks/io.hpp"
#include "calmks/spectral.hpp"
#include "calmks/timestepper.hpp"

namespace calmks {

namespace fs = std::filesystem;

namespace {

/// Values gathered from flags; unset members fall back to the config file,
/// then to RunConfig defaults.
struct Overrides {
  std::optional<std::string> form, kind, init, init_file, output_dir, eps_list;
  std::optional<double> epsilon, lambda, dt, T, snapshot_every, cfl;
  std::optional<int> n, jobs;
};

struct Resolved {
  RunConfig config;
  CalmingType kind = CalmingType::Identity;
  double epsilon = 0.1;
  std::vector<double> eps_list = default_epsilon_sweep();
  int jobs = 1;
};

void add_run_options(CLI::App& cmd, Overrides& o, std::string& config_file) {
  cmd.add_option("--config", config_file, "key=value config file");
  cmd.add_option("--form", o.form, "vector | scalar");
  cmd.add_option("--kind", o.kind, "identity | type1 | type2 | type3");
  cmd.add_option("--epsilon", o.epsilon, "calming parameter");
  cmd.add_option("--lambda", o.lambda, "instability coefficient");
  cmd.add_option("--n", o.n, "modes per dimension");
  cmd.add_option("--dt", o.dt, "time step");
  cmd.add_option("--T", o.T, "final time");
  cmd.add_option("--snapshot-every", o.snapshot_every, "snapshot spacing in time units");
  cmd.add_option("--init", o.init, "grad-sines | high-osc | custom");
  cmd.add_option("--init-file", o.init_file, "snapshot used by --init custom");
  cmd.add_option("--output-dir", o.output_dir, "directory for all outputs");
  cmd.add_option("--cfl", o.cfl, "Courant number of the advective CFL monitor");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(parse_double(item.substr(b, e - b + 1)));
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

/// Applies file values, then flags. Throws on unknown keys or bad values.
Resolved resolve(const std::string& config_file, const Overrides& o) {
  Overrides merged;
  if (!config_file.empty()) {
    for (const auto& [key, value] : read_key_values(config_file)) {
      if (key == "form") merged.form = value;
      else if (key == "kind") merged.kind = value;
      else if (key == "epsilon") merged.epsilon = parse_double(value);
      else if (key == "lambda") merged.lambda = parse_double(value);
      else if (key == "n") merged.n = parse_int(value);
      else if (key == "dt") merged.dt = parse_double(value);
      else if (key == "T") merged.T = parse_double(value);
      else if (key == "snapshot_every") merged.snapshot_every = parse_double(value);
      else if (key == "init") merged.init = value;
      else if (key == "init_file") merged.init_file = value;
      else if (key == "output_dir") merged.output_dir = value;
      else if (key == "cfl") merged.cfl = parse_double(value);
      else if (key == "eps_list") merged.eps_list = value;
      else if (key == "jobs") merged.jobs = parse_int(value);
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(merged.form, o.form);
  take(merged.kind, o.kind);
  take(merged.epsilon, o.epsilon);
  take(merged.lambda, o.lambda);
  take(merged.n, o.n);
  take(merged.dt, o.dt);
  take(merged.T, o.T);
  take(merged.snapshot_every, o.snapshot_every);
  take(merged.init, o.init);
  take(merged.init_file, o.init_file);
  take(merged.output_dir, o.output_dir);
  take(merged.cfl, o.cfl);
  take(merged.eps_list, o.eps_list);
  take(merged.jobs, o.jobs);

  Resolved r;
  RunConfig& c = r.config;
  if (merged.form) c.form.shape = parse_shape(*merged.form);
  if (merged.kind) r.kind = parse_calming_type(*merged.kind);
  if (merged.epsilon) r.epsilon = *merged.epsilon;
  if (merged.lambda) c.form.lambda = *merged.lambda;
  if (merged.n) c.n = *merged.n;
  if (merged.dt) c.dt = *merged.dt;
  if (merged.T) c.T = *merged.T;
  if (merged.snapshot_every) c.snapshot_every = *merged.snapshot_every;
  if (merged.init) c.initial = parse_initial_preset(*merged.init);
  if (merged.init_file) {
    c.initial_file = *merged.init_file;
    if (!merged.init) c.initial = InitialPreset::Custom;
  }
  if (merged.output_dir) c.output_dir = *merged.output_dir;
  if (merged.cfl) c.cfl = *merged.cfl;
  if (merged.eps_list) r.eps_list = parse_list(*merged.eps_list);
  if (merged.jobs) r.jobs = *merged.jobs;
  c.form.calming = CalmingKind::make(r.kind, r.epsilon);
  c.validate();
  if (r.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  return r;
}

KeyValues manifest(const Resolved& r, bool with_sweep) {
  const RunConfig& c = r.config;
  KeyValues kv = {
      {"form", std::string(to_string(c.form.shape))},
      {"kind", std::string(to_string(r.kind))},
      {"epsilon", format_double(r.epsilon)},
      {"lambda", format_double(c.form.lambda)},
      {"n", std::to_string(c.n)},
      {"dt", format_double(c.dt)},
      {"T", format_double(c.T)},
      {"snapshot_every", format_double(c.snapshot_every)},
      {"init", std::string(to_string(c.initial))},
      {"output_dir", c.output_dir},
      {"cfl", format_double(c.cfl)},
  };
  if (c.initial == InitialPreset::Custom) {
    kv.emplace_back("init_file", fs::absolute(c.initial_file).string());
  }
  if (with_sweep) {
    kv.emplace_back("eps_list", format_list(r.eps_list));
    kv.emplace_back("jobs", std::to_string(r.jobs));
  }
  return kv;
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu", index);
  return buf;
}

int cmd_simulate(const Resolved& r, std::ostream& out, std::ostream& err) {
  const RunConfig& c = r.config;
  const SpectralField initial = make_initial(c);
  Trajectory traj;
  try {
    traj = evolve(c, initial);
  } catch (const BlowUpError& e) {
    err << "error: " << e.what() << "\n";
    err << "aborted at t=" << format_double(e.time()) << "\n";
    return kExitRunFailed;
  }

  const fs::path dir = c.output_dir;
  fs::create_directories(dir / "snapshots");
  write_key_values(dir / "manifest.cfg", manifest(r, false));
  {
    const fs::path p = dir / "norms.csv";
    std::ofstream csv(p);
    if (!csv) throw IoError(p, "cannot open for writing");
    csv << "t,l2,linf,h2\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      csv << format_double(traj.times[i]) << ',' << format_double(traj.l2[i]) << ','
          << format_double(traj.linf[i]) << ',' << format_double(traj.h2[i]) << '\n';
    }
    if (!csv) throw IoError(p, "write failed");
  }
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& snap = traj.snapshots[i];
    SnapshotMeta meta;
    meta.n = c.n;
    meta.shape = c.form.shape;
    meta.kind = c.form.calming.type;
    meta.epsilon = c.form.calming.epsilon;
    meta.lambda = c.form.lambda;
    meta.t = snap.t;
    meta.dt = c.dt;
    write_snapshot(dir / "snapshots" / snapshot_name(i), snap.field, meta);
  }
  if (!traj.cfl_violations.empty()) {
    err << "warning: dt=" << format_double(c.dt) << " exceeded the advective CFL limit on "
        << traj.cfl_violations.size() << " steps (first at t="
        << format_double(traj.cfl_violations.front())
        << ", smallest limit " << format_double(traj.min_cfl_limit) << ")\n";
  }
  out << "simulated to t=" << format_double(traj.times.back()) << " in "
      << traj.times.size() - 1 << " steps; " << traj.snapshots.size() << " snapshots written to "
      << dir.string() << "\n";
  return kExitOk;
}

int cmd_converge(const Resolved& r, std::ostream& out, std::ostream& err) {
  if (r.kind == CalmingType::Identity) {
    err << "error: converge needs --kind type1, type2 or type3\n";
    return kExitUsage;
  }
  if (r.eps_list.size() < 3) {
    err << "error: --eps-list needs at least three values\n";
    return kExitUsage;
  }
  for (double e : r.eps_list) {
    if (!(e > 0.0)) {
      err << "error: every epsilon must be positive\n";
      return kExitUsage;
    }
  }
  ConvergenceReport report;
  try {
    report = convergence_study(r.config, r.kind, r.eps_list, r.jobs);
  } catch (const RunFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitRunFailed;
  }
  const fs::path dir = r.config.output_dir;
  fs::create_directories(dir);
  write_key_values(dir / "manifest.cfg", manifest(r, true));
  write_error_csv(dir / "errors.csv", report);

  auto line = [&](const char* name, const SlopeFit& f) {
    out << "slope " << name << " = " << std::fixed << std::setprecision(4) << f.slope
        << " (residual " << std::scientific << std::setprecision(2) << f.residual << ")\n"
        << std::defaultfloat;
  };
  line("linf_l2", report.linf_l2);
  line("linf_linf", report.linf_linf);
  line("l2_h2", report.l2_h2);
  if (!report.complete()) {
    for (const auto& s : report.series) {
      if (s.failed) err << "error: " << s.failure << "\n";
    }
    return kExitRunFailed;
  }
  return kExitOk;
}

int cmd_norms(const fs::path& path, std::ostream& out) {
  auto [field, meta] = load_snapshot(path);
  const Grid grid(meta.n);
  const SpectralTransform transform(grid);
  const SpectralField spec = transform.forward(field);
  out << "l2 = " << format_double(l2_norm(spec, grid)) << "\n";
  out << "linf = " << format_double(linf_norm(field)) << "\n";
  out << "h2 = " << format_double(hs_norm(spec, 2.0, grid)) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral solver for the calmed 2D Kuramoto-Sivashinsky equation",
               "calmks"};
  app.require_subcommand(1);

  Overrides sim_o, conv_o;
  std::string sim_cfg, conv_cfg;
  auto* sim = app.add_subcommand("simulate", "evolve one configuration, writing snapshots and norms");
  add_run_options(*sim, sim_o, sim_cfg);

  auto* conv = app.add_subcommand("converge", "epsilon sweep against the uncalmed reference");
  add_run_options(*conv, conv_o, conv_cfg);
  conv->add_option("--eps-list", conv_o.eps_list, "comma-separated epsilon values");
  conv->add_option("--jobs", conv_o.jobs, "worker threads for the sweep");

  std::string snapshot_path;
  auto* norms = app.add_subcommand("norms", "print L2, Linf and H2 norms of a snapshot");
  norms->add_option("snapshot", snapshot_path, "snapshot payload or metadata path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*norms) return cmd_norms(snapshot_path, out);
    const bool simulate = static_cast<bool>(*sim);
    Resolved r;
    try {
      r = simulate ? resolve(sim_cfg, sim_o) : resolve(conv_cfg, conv_o);
    } catch (const IoError& e) {
      err << "error: " << e.what() << "\n";
      return kExitIo;
    } catch (const std::exception& e) {
      err << "error: invalid configuration: " << e.what() << "\n";
      return kExitUsage;
    }
    return simulate ? cmd_simulate(r, out, err) : cmd_converge(r, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace calmks
