#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "calmks/config.hpp"
#include "calmks/dynamics.hpp"
#include "calmks/field.hpp"

namespace calmks {

/// Raised when a step produces non-finite values.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, double norm);
  double time() const { return t_; }
  double norm() const { return norm_; }

 private:
  double t_;
  double norm_;
};

/// Writes N(state) into out. An empty function means the nonlinear term is off.
using NonlinearFn = std::function<void(const SpectralField&, SpectralField&)>;

struct StepperState {
  SpectralField state;
  double t = 0.0;
};

/// Integrating-factor RK4: classical RK4 on v = exp(-tL) u_hat, written so
/// that only exp(L dt/2) and exp(L dt) are ever needed:
///
///   a  = E2 (u + dt/2 N(u))
///   b  = E2 u + dt/2 N(a)
///   c  = E u + dt E2 N(b)
///   u' = E u + dt/6 (E N(u) + 2 E2 (N(a) + N(b)) + N(c))
class IfRk4Stepper {
 public:
  IfRk4Stepper(const Grid& grid, const LinearSymbol& symbol, NonlinearFn nonlinear, double dt,
               Shape shape);

  double dt() const { return dt_; }
  /// Recomputes the exponential factors.
  void set_dt(double dt);

  std::span<const double> exp_half() const { return exp_half_; }
  std::span<const double> exp_full() const { return exp_full_; }

  /// Advances by dt. Throws BlowUpError on non-finite output; `s` is then
  /// left holding the offending state.
  void step(StepperState& s);
  /// Advances by h (h may differ from dt; factors for h are cached separately).
  void step(StepperState& s, double h);

 private:
  void fill_factors(double h, std::vector<double>& half, std::vector<double>& full) const;
  void eval(const SpectralField& in, SpectralField& out);

  Grid grid_;
  std::vector<double> symbol_;
  NonlinearFn nonlinear_;
  double dt_ = 0.0;
  std::vector<double> exp_half_, exp_full_;
  double alt_h_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> alt_half_, alt_full_;
  SpectralField n1_, n2_, n3_, n4_, stage_;
};

/// Largest stable advective step cfl * dx / max|scale * eta(u)| for a
/// two-component advecting velocity; +infinity when the velocity vanishes.
double advective_cfl_limit(const PhysicalField& velocity, const CalmingKind& kind,
                           const Grid& grid, double cfl, double scale = 1.0);

/// One step of a fixed-dt march. Steps are clipped so that every mark
/// (multiples of `mark_every`, and T) is hit exactly.
struct ScheduledStep {
  double h;
  double t_after;
  bool at_mark;
};
std::vector<ScheduledStep> step_schedule(double T, double dt, double mark_every);

struct Snapshot {
  double t;
  PhysicalField field;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> linf;
  std::vector<double> h2;
  std::vector<Snapshot> snapshots;
  /// Times of steps whose dt exceeded the advective CFL limit.
  std::vector<double> cfl_violations;
  double min_cfl_limit = std::numeric_limits<double>::infinity();
};

/// Fixed-dt march of `initial` to config.T. Records norms every step and
/// physical snapshots every config.snapshot_every time units (plus t = 0 and
/// t = T). Throws BlowUpError if the state becomes non-finite.
Trajectory evolve(const RunConfig& config, const SpectralField& initial);

/// Gradient of a scalar field as a two-component physical field.
PhysicalField gradient(const SpectralField& phi, const SpectralTransform& transform);

}  // namespace calmks
