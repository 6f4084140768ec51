#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "calmks/experiments.hpp"
#include "calmks/timestepper.hpp"
#include "oracles.hpp"

using namespace calmks;

namespace {

EquationForm scalar_form(CalmingType t, double eps = 0.1, double lambda = 4.1) {
  return {Shape::Scalar, CalmingKind::make(t, eps), lambda};
}

// March `u0` to T with fixed step dt using the full scalar or vector equation.
SpectralField march(const Grid& g, const EquationForm& form, SpectralField u0, double dt, int steps) {
  const SpectralTransform tr(g);
  NonlinearTerm term(tr, form);
  IfRk4Stepper stepper(g, linear_symbol(g, form.lambda),
                       [&term](const SpectralField& in, SpectralField& out) { term.evaluate(in, out); },
                       dt, form.shape);
  StepperState s{std::move(u0), 0.0};
  for (int i = 0; i < steps; ++i) stepper.step(s);
  return s.state;
}

double observed_order(CalmingType type) {
  const Grid g(64);
  const auto form = scalar_form(type);
  const auto phi0 = make_initial(InitialPreset::GradSines, g, Shape::Scalar);
  const auto a = march(g, form, phi0, 4e-4, 25);
  const auto b = march(g, form, phi0, 2e-4, 50);
  const auto c = march(g, form, phi0, 1e-4, 100);
  return std::log2(l2_norm(a - b, g) / l2_norm(b - c, g));
}

}  // namespace

TEST_CASE("exponential factors") {
  const Grid g(64);
  const auto L = linear_symbol(g, 4.1);
  IfRk4Stepper st(g, L, {}, 4.2943e-4, Shape::Vector);
  auto check = [&] {
    for (std::size_t i = 0; i < L.values().size(); ++i) {
      const double h = st.exp_half()[i];
      const double f = st.exp_full()[i];
      if (f == 0.0) {
        CHECK(h * h < 1e-300);
      } else {
        CHECK(std::abs(h * h - f) <= 1e-14 * f);
      }
    }
  };
  check();
  st.set_dt(1e-3);
  CHECK(st.exp_full()[1] == doctest::Approx(std::exp(3.1e-3)).epsilon(1e-15));
  check();
  CHECK_THROWS_AS(st.set_dt(0.0), std::invalid_argument);
}

TEST_CASE("linear evolution is exact") {
  const Grid g(32);
  const SpectralTransform tr(g);
  std::mt19937_64 rng(5);
  const oracle::RandomTrig a(rng, 10), b(rng, 10);
  const auto u0 = dealias(tr.forward(oracle::sample(g, {a, b})), g);
  const auto L = linear_symbol(g, 4.1);
  const double dt = 1e-3;
  const int m = 50;

  IfRk4Stepper st(g, L, {}, dt, Shape::Vector);
  StepperState s{u0, 0.0};
  st.step(s);
  SpectralField one = u0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < one.modes(); ++i) one.component(c)[i] *= std::exp(L[i] * dt);
  CHECK(max_coefficient(s.state - one) <= 1e-13 * max_coefficient(one));

  for (int i = 1; i < m; ++i) st.step(s);
  SpectralField want = u0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < want.modes(); ++i) want.component(c)[i] *= std::exp(L[i] * m * dt);
  CHECK(max_coefficient(s.state - want) <= 1e-12 * max_coefficient(want));
  CHECK(s.t == doctest::Approx(m * dt).epsilon(1e-14));
}

TEST_CASE("heat-like scalar decay") {
  const Grid g(32);
  const SpectralTransform tr(g);
  const auto phi0 = tr.forward(oracle::sample(g, {[](double x, double) { return std::cos(x); }}));
  const double dt = 0.01;
  IfRk4Stepper st(g, linear_symbol(g, 0.0), {}, dt, Shape::Scalar);
  StepperState s{phi0, 0.0};
  st.step(s);
  const auto got = tr.inverse(s.state);
  const auto want = oracle::sample(g, {[&](double x, double) { return std::exp(-dt) * std::cos(x); }});
  CHECK(oracle::max_abs_diff(got.data(), want.data()) < 1e-15);
}

TEST_CASE("temporal self-convergence is fourth order") {
  for (auto type : {CalmingType::Identity, CalmingType::Type2, CalmingType::Type3}) {
    CAPTURE(to_string(type));
    CHECK(observed_order(type) >= 3.5);
  }
}

// eta_1 is only Lipschitz at the origin, and grid values of grad phi pass
// near zero, so the right-hand side is not smooth enough for fourth order.
TEST_CASE("Type1 self-convergence is at least second order") {
  const double p = observed_order(CalmingType::Type1);
  MESSAGE("Type1 observed order " << p);
  CHECK(p >= 1.8);
}

TEST_CASE("off-schedule steps use their own factors") {
  const Grid g(32);
  const auto form = scalar_form(CalmingType::Type2);
  const auto phi0 = make_initial(InitialPreset::GradSines, g, Shape::Scalar);
  const SpectralTransform tr(g);
  NonlinearTerm term(tr, form);
  NonlinearFn nl = [&term](const SpectralField& in, SpectralField& out) { term.evaluate(in, out); };
  const auto L = linear_symbol(g, form.lambda);

  IfRk4Stepper a(g, L, nl, 1e-3, Shape::Scalar), b(g, L, nl, 3e-4, Shape::Scalar);
  StepperState sa{phi0, 0.0}, sb{phi0, 0.0};
  a.step(sa, 3e-4);
  b.step(sb);
  CHECK(sa.state == sb.state);
  a.step(sa);  // back to the primary step
  b.set_dt(1e-3);
  b.step(sb);
  CHECK(sa.state == sb.state);
}

TEST_CASE("blow-up is reported with time and norm") {
  const Grid g(16);
  SpectralField u(g, Shape::Scalar);
  u.at(0, 1, 0) = std::numeric_limits<double>::quiet_NaN();
  IfRk4Stepper st(g, linear_symbol(g, 4.1), {}, 1e-3, Shape::Scalar);
  StepperState s{u, 0.25};
  try {
    st.step(s);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.time() == doctest::Approx(0.25 + 1e-3));
    CHECK(!std::isfinite(e.norm()));
  }
}

TEST_CASE("advective CFL limit") {
  const Grid g(128);
  PhysicalField u(g, Shape::Vector);
  for (std::size_t i = 0; i < u.points(); ++i) {
    u.component(0)[i] = 3.0;
    u.component(1)[i] = 4.0;
  }
  CHECK(advective_cfl_limit(u, CalmingKind::identity(), g, 1.0) ==
        doctest::Approx(g.dx() / 5).epsilon(1e-14));
  CHECK(g.dx() / 5 == doctest::Approx(9.817e-3).epsilon(1e-4));
  CHECK(advective_cfl_limit(u, CalmingKind::identity(), g, 0.5) ==
        doctest::Approx(g.dx() / 10).epsilon(1e-14));

  CHECK(std::isinf(advective_cfl_limit(PhysicalField(g, Shape::Vector), CalmingKind::identity(), g, 1.0)));

  // |eta_1| < 1/eps for every input, so the limit never drops below cfl dx eps.
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> mag(0.0, 6.0);
  for (std::size_t i = 0; i < u.points(); ++i) {
    u.component(0)[i] = mag(rng);
    u.component(1)[i] = -mag(rng);
  }
  const auto type1 = CalmingKind::make(CalmingType::Type1, 0.1);
  CHECK(advective_cfl_limit(u, type1, g, 1.0) >= g.dx() / 10);
}

TEST_CASE("step schedule hits every mark") {
  SUBCASE("marks are multiples of dt") {
    const auto s = step_schedule(0.1, 0.01, 0.05);
    REQUIRE(s.size() == 10);
    CHECK(s[4].at_mark);
    CHECK(s[4].t_after == 0.05);
    CHECK(s.back().t_after == 0.1);
    CHECK(s.back().at_mark);
    int marks = 0;
    for (const auto& st : s) marks += st.at_mark;
    CHECK(marks == 2);
  }
  SUBCASE("paper step with clipped marks") {
    const double dt = kDefaultDt;
    const auto s = step_schedule(1.0, dt, 0.1);
    double t = 0.0;
    int marks = 0;
    for (const auto& st : s) {
      CHECK(st.h > 0.0);
      CHECK(st.h <= dt * (1 + 1e-12));
      t += st.h;
      CHECK(t == doctest::Approx(st.t_after).epsilon(1e-12));
      if (st.at_mark) {
        ++marks;
        CHECK(std::remainder(st.t_after, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
      }
    }
    CHECK(marks == 10);
    CHECK(s.back().t_after == 1.0);
  }
  SUBCASE("mark spacing beyond T") {
    const auto s = step_schedule(0.05, 0.01, 1.0);
    CHECK(s.size() == 5);
    CHECK(s.back().at_mark);
    CHECK(s.back().t_after == 0.05);
  }
  CHECK(step_schedule(0.0, 0.01, 0.1).empty());
  CHECK_THROWS_AS(step_schedule(1.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(step_schedule(1.0, 0.01, 0.0), std::invalid_argument);
}

TEST_CASE("evolve") {
  RunConfig cfg;
  cfg.n = 32;
  cfg.form = {Shape::Vector, CalmingKind::make(CalmingType::Type3, 0.1), 4.1};
  const Grid g(cfg.n);
  const auto u0 = make_initial(InitialPreset::GradSines, g, Shape::Vector);

  SUBCASE("T = 0 keeps only the initial state") {
    cfg.T = 0.0;
    const auto tr = evolve(cfg, u0);
    CHECK(tr.times.size() == 1);
    REQUIRE(tr.snapshots.size() == 1);
    CHECK(tr.snapshots[0].t == 0.0);
    CHECK(tr.l2[0] == doctest::Approx(2 * std::sqrt(2.0) * std::numbers::pi).epsilon(1e-14));
    CHECK(tr.h2[0] > tr.l2[0]);
  }
  SUBCASE("repeat runs are bit-identical") {
    cfg.T = 0.05;
    cfg.snapshot_every = 0.01;
    const auto a = evolve(cfg, u0);
    const auto b = evolve(cfg, u0);
    CHECK(a.l2 == b.l2);
    CHECK(a.linf == b.linf);
    CHECK(a.h2 == b.h2);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    CHECK(a.snapshots.size() == 6);
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
      CHECK(a.snapshots[i].field == b.snapshots[i].field);
      CHECK(a.snapshots[i].t == doctest::Approx(0.01 * i).epsilon(1e-12));
    }
    CHECK(a.times.back() == 0.05);
  }
  SUBCASE("strongly damped small data decays monotonically") {
    cfg.form.lambda = 0.5;
    cfg.T = 0.5;
    SpectralField small = u0;
    small *= 0.01;
    const auto tr = evolve(cfg, small);
    for (std::size_t i = tr.l2.size() / 10; i + 1 < tr.l2.size(); ++i) CHECK(tr.l2[i + 1] < tr.l2[i]);
  }
  SUBCASE("CFL violations are recorded, not fatal") {
    cfg.form = {Shape::Vector, CalmingKind::identity(), 4.1};
    cfg.T = 0.01;
    cfg.dt = 0.005;
    cfg.cfl = 1e-3;
    const auto tr = evolve(cfg, u0);
    CHECK(tr.cfl_violations.size() == tr.times.size());
    CHECK(tr.min_cfl_limit < cfg.dt);
  }
  SUBCASE("scalar form") {
    cfg.form.shape = Shape::Scalar;
    cfg.T = 0.01;
    const auto tr = evolve(cfg, make_initial(InitialPreset::GradSines, g, Shape::Scalar));
    CHECK(tr.cfl_violations.empty());
    CHECK(std::isfinite(tr.min_cfl_limit));
  }
  SUBCASE("mismatched initial data") {
    cfg.T = 0.01;
    CHECK_THROWS_AS(evolve(cfg, SpectralField(g, Shape::Scalar)), std::invalid_argument);
  }
}

TEST_CASE("Type3 to T = 2 stays bounded") {
  RunConfig cfg;
  cfg.form = {Shape::Vector, CalmingKind::make(CalmingType::Type3, 0.1), 4.1};
  cfg.T = 2.0;
  cfg.snapshot_every = 1.0;
  const Grid g(cfg.n);
  const auto tr = evolve(cfg, make_initial(InitialPreset::GradSines, g, Shape::Vector));
  CHECK(tr.times.back() == 2.0);
  double peak = 0.0;
  for (double v : tr.l2) peak = std::max(peak, v);
  MESSAGE("peak L2 " << peak << ", final L2 " << tr.l2.back());
  CHECK(std::isfinite(peak));
  CHECK(peak < 1e3);
}
