#include "calmks/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace calmks {

namespace {

std::string blowup_message(double t, double norm) {
  std::ostringstream os;
  os << "solution blew up at t = " << t << " (L2 norm " << norm << ")";
  return os.str();
}

}  // namespace

BlowUpError::BlowUpError(double t, double norm)
    : std::runtime_error(blowup_message(t, norm)), t_(t), norm_(norm) {}

IfRk4Stepper::IfRk4Stepper(const Grid& grid, const LinearSymbol& symbol, NonlinearFn nonlinear,
                           double dt, Shape shape)
    : grid_(grid),
      symbol_(symbol.values().begin(), symbol.values().end()),
      nonlinear_(std::move(nonlinear)),
      n1_(grid, shape),
      n2_(grid, shape),
      n3_(grid, shape),
      n4_(grid, shape),
      stage_(grid, shape) {
  if (symbol_.size() != grid.spectral_size()) {
    throw std::invalid_argument("linear symbol does not match grid");
  }
  set_dt(dt);
}

void IfRk4Stepper::fill_factors(double h, std::vector<double>& half,
                                std::vector<double>& full) const {
  half.resize(symbol_.size());
  full.resize(symbol_.size());
  for (std::size_t i = 0; i < symbol_.size(); ++i) {
    half[i] = std::exp(0.5 * h * symbol_[i]);
    full[i] = std::exp(h * symbol_[i]);
  }
}

void IfRk4Stepper::set_dt(double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and nonzero");
  dt_ = dt;
  fill_factors(dt, exp_half_, exp_full_);
}

void IfRk4Stepper::eval(const SpectralField& in, SpectralField& out) {
  if (nonlinear_) {
    nonlinear_(in, out);
  } else {
    out.set_zero();
  }
}

void IfRk4Stepper::step(StepperState& s) { step(s, dt_); }

void IfRk4Stepper::step(StepperState& s, double h) {
  const std::vector<double>* e2 = &exp_half_;
  const std::vector<double>* e1 = &exp_full_;
  if (h != dt_) {
    if (h != alt_h_) {
      fill_factors(h, alt_half_, alt_full_);
      alt_h_ = h;
    }
    e2 = &alt_half_;
    e1 = &alt_full_;
  }
  const auto& E2 = *e2;
  const auto& E = *e1;
  SpectralField& u = s.state;
  const int comps = u.components();
  const std::size_t modes = symbol_.size();

  eval(u, n1_);
  for (int c = 0; c < comps; ++c) {
    auto uc = u.component(c);
    auto nc = n1_.component(c);
    auto a = stage_.component(c);
    for (std::size_t i = 0; i < modes; ++i) a[i] = E2[i] * (uc[i] + 0.5 * h * nc[i]);
  }
  eval(stage_, n2_);
  for (int c = 0; c < comps; ++c) {
    auto uc = u.component(c);
    auto nc = n2_.component(c);
    auto b = stage_.component(c);
    for (std::size_t i = 0; i < modes; ++i) b[i] = E2[i] * uc[i] + 0.5 * h * nc[i];
  }
  eval(stage_, n3_);
  for (int c = 0; c < comps; ++c) {
    auto uc = u.component(c);
    auto nc = n3_.component(c);
    auto cc = stage_.component(c);
    for (std::size_t i = 0; i < modes; ++i) cc[i] = E[i] * uc[i] + h * E2[i] * nc[i];
  }
  eval(stage_, n4_);
  const double w = h / 6.0;
  for (int c = 0; c < comps; ++c) {
    auto uc = u.component(c);
    auto k1 = n1_.component(c);
    auto k2 = n2_.component(c);
    auto k3 = n3_.component(c);
    auto k4 = n4_.component(c);
    for (std::size_t i = 0; i < modes; ++i) {
      uc[i] = E[i] * uc[i] + w * (E[i] * k1[i] + 2.0 * E2[i] * (k2[i] + k3[i]) + k4[i]);
    }
  }
  s.t += h;
  if (!all_finite(u)) throw BlowUpError(s.t, l2_norm(u, grid_));
}

double advective_cfl_limit(const PhysicalField& velocity, const CalmingKind& kind,
                           const Grid& grid, double cfl, double scale) {
  if (velocity.components() != 2) {
    throw std::invalid_argument("advective CFL limit needs a two-component velocity");
  }
  if (velocity.n() != grid.n()) throw std::invalid_argument("velocity size does not match grid");
  const auto u = velocity.component(0);
  const auto v = velocity.component(1);
  double vmax = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec2 w = apply_calming(kind, {u[i], v[i]});
    vmax = std::max(vmax, std::hypot(w[0], w[1]));
  }
  vmax *= std::abs(scale);
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * grid.dx() / vmax;
}

std::vector<ScheduledStep> step_schedule(double T, double dt, double mark_every) {
  std::vector<ScheduledStep> steps;
  if (!(T > 0.0)) return steps;
  if (!(dt > 0.0) || !(mark_every > 0.0)) throw std::invalid_argument("dt and mark spacing must be positive");
  const double tol = 1e-9 * dt;
  steps.reserve(static_cast<std::size_t>(std::ceil(T / dt)) + static_cast<std::size_t>(T / mark_every) + 2);
  double t = 0.0;
  for (long k = 1; T - t > tol; ++k) {
    const double mark = std::min(static_cast<double>(k) * mark_every, T);
    const double span = mark - t;
    if (span <= tol) continue;
    const long m = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
    for (long j = 0; j + 1 < m; ++j) steps.push_back({dt, t + static_cast<double>(j + 1) * dt, false});
    double last = span - static_cast<double>(m - 1) * dt;
    if (std::abs(last - dt) <= tol) last = dt;
    steps.push_back({last, mark, true});
    t = mark;
  }
  return steps;
}

PhysicalField gradient(const SpectralField& phi, const SpectralTransform& transform) {
  const Grid& g = transform.grid();
  PhysicalField grad(g, Shape::Vector);
  AlignedVector<Complex> scratch(g.spectral_size());
  const SpectralField dx = spectral_derivative(phi, Axis::X, 1, g);
  const SpectralField dy = spectral_derivative(phi, Axis::Y, 1, g);
  transform.inverse_component(dx.component(0), grad.component(0), scratch);
  transform.inverse_component(dy.component(0), grad.component(1), scratch);
  return grad;
}

Trajectory evolve(const RunConfig& config, const SpectralField& initial) {
  config.validate();
  const Grid grid(config.n);
  if (initial.n() != grid.n() || initial.shape() != config.form.shape) {
    throw std::invalid_argument("initial field does not match the configured grid and form");
  }
  const SpectralTransform transform(grid);
  const LinearSymbol symbol(grid, config.form.lambda);
  NonlinearTerm term(transform, config.form);
  IfRk4Stepper stepper(
      grid, symbol, [&term](const SpectralField& in, SpectralField& out) { term.evaluate(in, out); },
      config.dt, config.form.shape);

  Trajectory traj;
  PhysicalField phys(grid, config.form.shape);
  const bool scalar = config.form.shape == Shape::Scalar;

  auto record = [&](const StepperState& s, bool snapshot) {
    transform.inverse(s.state, phys);
    traj.times.push_back(s.t);
    traj.l2.push_back(l2_norm(s.state, grid));
    traj.linf.push_back(linf_norm(phys));
    traj.h2.push_back(hs_norm(s.state, 2.0, grid));
    const double limit = scalar ? advective_cfl_limit(gradient(s.state, transform),
                                                      config.form.calming, grid, config.cfl, 0.5)
                                : advective_cfl_limit(phys, config.form.calming, grid, config.cfl);
    traj.min_cfl_limit = std::min(traj.min_cfl_limit, limit);
    if (config.dt > limit) traj.cfl_violations.push_back(s.t);
    if (snapshot) traj.snapshots.push_back({s.t, phys});
  };

  StepperState s{initial, 0.0};
  record(s, true);
  const auto schedule = step_schedule(config.T, config.dt, config.snapshot_every);
  for (const auto& st : schedule) {
    stepper.step(s, st.h);
    s.t = st.t_after;
    record(s, st.at_mark);
  }
  return traj;
}

}  // namespace calmks
