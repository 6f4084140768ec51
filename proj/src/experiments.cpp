#include "calmks/experiments.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "calmks/dynamics.hpp"
#include "calmks/io.hpp"
#include "calmks/spectral.hpp"
#include "calmks/timestepper.hpp"

namespace calmks {

SpectralField make_initial(InitialPreset preset, const Grid& grid, Shape shape,
                           const std::filesystem::path& custom_file) {
  const SpectralTransform transform(grid);
  if (preset == InitialPreset::Custom) {
    if (custom_file.empty()) throw std::invalid_argument("custom initial data needs a file");
    auto [field, meta] = load_snapshot(custom_file);
    if (meta.n != grid.n() || meta.shape != shape) {
      throw IoError(custom_file, "snapshot size or form does not match the run configuration");
    }
    return transform.forward(field);
  }
  if (preset == InitialPreset::HighOsc && shape == Shape::Scalar) {
    throw std::invalid_argument("the high-osc preset is vector-valued");
  }

  PhysicalField f(grid, shape);
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double x = grid.coordinate(i);
    for (int j = 0; j < n; ++j) {
      const double y = grid.coordinate(j);
      if (shape == Shape::Scalar) {
        f.at(0, i, j) = std::sin(x + y) + std::sin(x) + std::sin(y);
      } else if (preset == InitialPreset::GradSines) {
        f.at(0, i, j) = std::cos(x + y) + std::cos(x);
        f.at(1, i, j) = std::cos(x + y) + std::cos(y);
      } else {
        f.at(0, i, j) = 4.0 * (std::cos(x + y) + std::sin(3.0 * x));
        f.at(1, i, j) = 4.0 * (std::cos(x + y) + std::cos(4.0 * y));
      }
    }
  }
  return transform.forward(f);
}

SpectralField make_initial(const RunConfig& config) {
  return make_initial(config.initial, Grid(config.n), config.form.shape, config.initial_file);
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  const double m = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("log-log fit needs strictly positive coordinates");
    }
    sx += std::log10(x);
    sy += std::log10(y);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log10(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log10(y) - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("log-log fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : points) {
    const double r = std::log10(y) - (fit.intercept + fit.slope * std::log10(x));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

bool ConvergenceReport::complete() const {
  return std::none_of(series.begin(), series.end(), [](const ErrorSeries& s) { return s.failed; });
}

std::vector<double> default_epsilon_sweep() {
  std::vector<double> eps(7);
  for (int i = 0; i < 7; ++i) eps[i] = std::pow(10.0, -1.0 - i / 3.0);
  return eps;
}

namespace {

/// A calmed run advanced in lockstep with the shared reference.
struct CalmedRun {
  CalmedRun(const SpectralTransform& transform, const LinearSymbol& symbol,
            const EquationForm& form, const SpectralField& initial, double dt)
      : term(transform, form),
        stepper(
            transform.grid(), symbol,
            [this](const SpectralField& in, SpectralField& out) { term.evaluate(in, out); }, dt,
            form.shape),
        state{initial, 0.0},
        diff(initial),
        diff_phys(transform.grid(), form.shape) {
    series.epsilon = form.calming.epsilon;
  }

  NonlinearTerm term;
  IfRk4Stepper stepper;
  StepperState state;
  SpectralField diff;
  PhysicalField diff_phys;
  ErrorSeries series;
  double last_h2_sq = 0.0;
  double h2_integral = 0.0;
};

void accumulate(CalmedRun& run, const SpectralField& reference, const SpectralTransform& transform,
                double h, bool first) {
  const Grid& grid = transform.grid();
  std::copy(run.state.state.data().begin(), run.state.state.data().end(), run.diff.data().begin());
  run.diff -= reference;
  transform.inverse(run.diff, run.diff_phys);
  const double l2 = l2_norm(run.diff, grid);
  const double linf = linf_norm(run.diff_phys);
  const double h2 = hs_norm(run.diff, 2.0, grid);
  const double h2_sq = h2 * h2;
  auto& s = run.series;
  s.err_linf_l2 = std::max(s.err_linf_l2, l2);
  s.err_linf_linf = std::max(s.err_linf_linf, linf);
  if (!first) run.h2_integral += 0.5 * h * (run.last_h2_sq + h2_sq);
  run.last_h2_sq = h2_sq;
  s.err_l2_h2 = std::sqrt(run.h2_integral);
}

std::string describe(const CalmingKind& kind) {
  std::ostringstream os;
  os << "calmed run (" << to_string(kind.type) << ", epsilon=" << kind.epsilon << ")";
  return os.str();
}

std::vector<ErrorSeries> run_sweep(const RunConfig& config, std::span<const CalmingKind> kinds,
                                   int jobs) {
  RunConfig ref_config = config;
  ref_config.form.calming = CalmingKind::identity();
  ref_config.validate();
  for (const auto& k : kinds) {
    if (k.type == CalmingType::Identity) {
      throw std::invalid_argument("comparison runs need a calmed (non-identity) kind");
    }
    EquationForm f = config.form;
    f.calming = k;
    f.validate();
  }

  const Grid grid(config.n);
  const SpectralTransform transform(grid);
  const LinearSymbol symbol(grid, config.form.lambda);
  const SpectralField initial = make_initial(ref_config);

  NonlinearTerm ref_term(transform, ref_config.form);
  IfRk4Stepper ref_stepper(
      grid, symbol,
      [&ref_term](const SpectralField& in, SpectralField& out) { ref_term.evaluate(in, out); },
      config.dt, config.form.shape);
  StepperState reference{initial, 0.0};

  std::vector<std::unique_ptr<CalmedRun>> runs;
  for (const auto& k : kinds) {
    EquationForm f = config.form;
    f.calming = k;
    runs.push_back(std::make_unique<CalmedRun>(transform, symbol, f, initial, config.dt));
  }
  for (auto& r : runs) accumulate(*r, reference.state, transform, 0.0, true);

  const auto schedule = step_schedule(config.T, config.dt, std::max(config.T, config.dt));
  std::string ref_failure;
  std::size_t step_index = 0;

  auto advance_reference = [&]() noexcept {
    if (!ref_failure.empty() || step_index >= schedule.size()) return;
    try {
      ref_stepper.step(reference, schedule[step_index].h);
      reference.t = schedule[step_index].t_after;
    } catch (const BlowUpError& e) {
      ref_failure = std::string("reference run: ") + e.what();
    }
  };

  auto advance_calmed = [&](CalmedRun& run, std::size_t k) {
    if (run.series.failed) return;
    const auto& st = schedule[k];
    try {
      run.stepper.step(run.state, st.h);
      run.state.t = st.t_after;
      accumulate(run, reference.state, transform, st.h, false);
    } catch (const BlowUpError& e) {
      run.series.failed = true;
      run.series.failure = describe(run.term.form().calming) + ": " + e.what();
    }
  };

  const int workers = std::clamp(jobs, 1, std::max<int>(1, static_cast<int>(runs.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      step_index = k;
      advance_reference();
      if (!ref_failure.empty()) break;
      for (auto& r : runs) advance_calmed(*r, k);
    }
  } else {
    std::size_t phase = 0;
    auto on_phase = [&]() noexcept {
      step_index = phase++;
      advance_reference();
    };
    std::barrier sync(workers, on_phase);
    auto worker = [&](int w) {
      for (std::size_t k = 0; k < schedule.size(); ++k) {
        sync.arrive_and_wait();
        if (!ref_failure.empty()) break;
        for (std::size_t r = w; r < runs.size(); r += workers) advance_calmed(*runs[r], k);
      }
    };
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
  }
  if (!ref_failure.empty()) throw RunFailure(ref_failure);

  std::vector<ErrorSeries> out;
  for (auto& r : runs) out.push_back(r->series);
  return out;
}

SlopeFit fit_norm(const std::vector<ErrorSeries>& series, double ErrorSeries::*member) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : series) {
    if (!s.failed) pts.emplace_back(s.epsilon, s.*member);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    return fit_loglog_slope(pts);
  } catch (const std::invalid_argument&) {
    return {nan, nan, nan};
  }
}

}  // namespace

ErrorSeries run_pair(const RunConfig& config, const CalmingKind& kind) {
  const CalmingKind kinds[] = {kind};
  auto series = run_sweep(config, kinds, 1);
  if (series[0].failed) throw RunFailure(series[0].failure);
  return series[0];
}

ConvergenceReport convergence_study(const RunConfig& config, CalmingType kind,
                                    std::span<const double> eps_list, int jobs) {
  if (eps_list.size() < 3) {
    throw std::invalid_argument("a convergence study needs at least three epsilon values");
  }
  std::vector<CalmingKind> kinds;
  for (double e : eps_list) {
    kinds.push_back(CalmingKind::make(kind, e));
    if (kind == CalmingType::Identity) throw std::invalid_argument("convergence study needs a calmed kind");
  }
  ConvergenceReport report;
  report.kind = kind;
  report.series = run_sweep(config, kinds, jobs);
  report.linf_l2 = fit_norm(report.series, &ErrorSeries::err_linf_l2);
  report.linf_linf = fit_norm(report.series, &ErrorSeries::err_linf_linf);
  report.l2_h2 = fit_norm(report.series, &ErrorSeries::err_l2_h2);
  return report;
}

void write_error_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << "epsilon,err_linf_l2,err_linf_linf,err_l2_h2\n";
  for (const auto& s : report.series) {
    if (s.failed) continue;
    out << format_double(s.epsilon) << ',' << format_double(s.err_linf_l2) << ','
        << format_double(s.err_linf_linf) << ',' << format_double(s.err_l2_h2) << '\n';
  }
  if (!out) throw IoError(path, "write failed");
}

std::vector<ErrorSeries> read_error_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != "epsilon,err_linf_l2,err_linf_linf,err_l2_h2") {
    throw IoError(path, "unexpected CSV header");
  }
  std::vector<ErrorSeries> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw IoError(path, "line " + std::to_string(lineno) + ": expected 4 columns");
    try {
      ErrorSeries s;
      s.epsilon = parse_double(cells[0]);
      s.err_linf_l2 = parse_double(cells[1]);
      s.err_linf_linf = parse_double(cells[2]);
      s.err_l2_h2 = parse_double(cells[3]);
      rows.push_back(s);
    } catch (const std::invalid_argument& e) {
      throw IoError(path, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace calmks
