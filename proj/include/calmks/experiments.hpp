#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "calmks/calming.hpp"
#include "calmks/config.hpp"
#include "calmks/field.hpp"
#include "calmks/grid.hpp"

namespace calmks {

/// Initial data on the grid, transformed to spectral space.
///   grad-sines, vector: (cos(x+y) + cos x, cos(x+y) + cos y)
///   grad-sines, scalar: sin(x+y) + sin x + sin y   (its gradient is the above)
///   high-osc,   vector: 4 (cos(x+y) + sin 3x, cos(x+y) + cos 4y)
///   custom:             physical values loaded from a snapshot file
SpectralField make_initial(InitialPreset preset, const Grid& grid, Shape shape,
                           const std::filesystem::path& custom_file = {});
SpectralField make_initial(const RunConfig& config);

/// Error norms of w = u_eps - u over [0, T].
struct ErrorSeries {
  double epsilon = 0.0;
  double err_linf_l2 = 0.0;    // max_t ||w||_L2
  double err_linf_linf = 0.0;  // max_t max_x |w|
  double err_l2_h2 = 0.0;      // (int_0^T ||w||_H2^2 dt)^(1/2), trapezoid in time
  bool failed = false;
  std::string failure;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS of the log10 residuals.
  double residual = 0.0;
};

/// Ordinary least squares of log10 y against log10 x. Needs >= 2 points with
/// positive coordinates and some spread in x.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

struct ConvergenceReport {
  CalmingType kind = CalmingType::Type1;
  std::vector<ErrorSeries> series;
  SlopeFit linf_l2;
  SlopeFit linf_linf;
  SlopeFit l2_h2;

  bool complete() const;
};

/// Seven log-spaced values from 1e-1 down to 1e-3.
std::vector<double> default_epsilon_sweep();

/// Raised when the shared reference run fails; calmed-run failures are
/// recorded per series instead.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evolves the uncalmed reference and the calmed system from the same initial
/// data on the same grid and time steps, accumulating the error norms every
/// step. Throws RunFailure naming whichever run failed.
ErrorSeries run_pair(const RunConfig& config, const CalmingKind& kind);

/// One calmed run per epsilon against a single shared reference trajectory.
/// Calmed runs are advanced in lockstep with the reference; `jobs` > 1 spreads
/// them over worker threads without changing any result bit.
ConvergenceReport convergence_study(const RunConfig& config, CalmingType kind,
                                    std::span<const double> eps_list, int jobs = 1);

/// CSV header epsilon,err_linf_l2,err_linf_linf,err_l2_h2; failed rows skipped.
void write_error_csv(const std::filesystem::path& path, const ConvergenceReport& report);
std::vector<ErrorSeries> read_error_csv(const std::filesystem::path& path);

}  // namespace calmks
