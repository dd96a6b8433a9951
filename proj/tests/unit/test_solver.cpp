#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plap/eigensolver.hpp"
#include "plap/error.hpp"
#include "plap/solver.hpp"

namespace plap {
namespace {

constexpr double kPi = std::numbers::pi;

Field sine(const Grid& g, double c) {
  return Field::sample(g, [c](double x) { return c * std::sin(kPi * x); });
}

const SourceTerm kCubic = SourceTerm::power_sum({{1.0, 3.0}});

TEST(Step, ZeroDtIsIdentity) {
  const Grid g = Grid::line(1.0, 49);
  const Field u = sine(g, 2.0);
  const Field v = step(u, kCubic, PExponent(3.0), 0.0);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(v[k], u[k]);
}

TEST(Step, ZeroIsEquilibrium) {
  const Grid g = Grid::line(1.0, 49);
  for (double p : {2.0, 3.0}) {
    const Field v = step(Field(g), kCubic, PExponent(p), 0.1);
    for (double x : v.values()) EXPECT_EQ(x, 0.0);
  }
}

TEST(Step, HeatDecayFactor) {
  const Grid g = Grid::line(1.0, 199);
  const double h = g.h();
  const Field u = sine(g, 1.0);
  for (double dt : {1e-6, 5e-6}) {
    const double ratio = sup_norm(step(u, SourceTerm::zero(), PExponent(2.0), dt)) / sup_norm(u);
    const double tol = dt * dt * std::pow(kPi, 4) + dt * std::pow(kPi, 4) * h * h / 6;
    EXPECT_NEAR(ratio, std::exp(-kPi * kPi * dt), tol);
  }
}

TEST(Step, SemiImplicitMatchesBackwardEuler) {
  const Grid g = Grid::line(1.0, 99);
  const double h = g.h();
  const double lam_h = 4.0 / (h * h) * std::pow(std::sin(kPi * h / 2), 2);
  const Field u = sine(g, 1.0);
  const double dt = 0.01;
  const Field v = step(u, SourceTerm::zero(), PExponent(2.0), dt, Scheme::SemiImplicitP2);
  EXPECT_NEAR(sup_norm(v) / sup_norm(u), 1.0 / (1.0 + dt * lam_h), 1e-12);
  EXPECT_THROW(step(u, SourceTerm::zero(), PExponent(3.0), dt, Scheme::SemiImplicitP2),
               InvalidArgument);
}

TEST(Step, ClipsNegatives) {
  const Grid g = Grid::line(1.0, 9);
  Field spike(g);
  spike[4] = 1.0;
  const Field v = step(spike, SourceTerm::zero(), PExponent(2.0), 0.1);
  for (double x : v.values()) EXPECT_GE(x, 0.0);
}

TEST(Step, OverflowMarksBlownUp) {
  const Grid g = Grid::line(1.0, 9);
  const Field v = step(sine(g, 1e120), kCubic, PExponent(2.0), 1.0);
  EXPECT_TRUE(v.blown_up());
  EXPECT_THROW(step(v, kCubic, PExponent(2.0), 1.0), InvalidArgument);
  EXPECT_THROW(step(sine(g, 1.0), kCubic, PExponent(2.0), -1.0), InvalidArgument);
}

TEST(AdaptiveDt, DiffusionCap) {
  SolverConfig c;
  c.safety = 0.5;
  const Grid g1 = Grid::line(1.0, 99);
  EXPECT_DOUBLE_EQ(adaptive_dt(sine(g1, 1e-3), SourceTerm::zero(), PExponent(2.0), c),
                   0.5 * 1e-4 / 2.0);
  const Grid g2 = Grid::rectangle(1.0, 1.0, 49);
  const Field u2 = Field::sample(g2, [](double x, double y) { return x * y * (1 - x) * (1 - y); });
  EXPECT_DOUBLE_EQ(adaptive_dt(u2, SourceTerm::zero(), PExponent(2.0), c), 0.5 * 4e-4 / 4.0);
}

TEST(AdaptiveDt, ZeroFieldUsesDtMax) {
  SolverConfig c;
  c.safety = 0.25;
  c.dt_max = 0.1;
  EXPECT_DOUBLE_EQ(adaptive_dt(Field(Grid::line(1.0, 9)), kCubic, PExponent(3.0), c), 0.025);
}

TEST(AdaptiveDt, ReactionCapDominates) {
  SolverConfig c;
  c.safety = 0.5;
  // h = 0.1: diffusion cap 0.005, reaction cap 100 / 100^3 = 1e-4.
  const Grid g = Grid::line(1.0, 9);
  Field u(g);
  u[4] = 100.0;
  u[3] = u[5] = 99.0;
  const double dmax = max_face_diffusivity(u, PExponent(2.0));
  EXPECT_EQ(dmax, 1.0);
  EXPECT_DOUBLE_EQ(adaptive_dt(u, kCubic, PExponent(2.0), c), 0.5 * 1e-4);
  c.scheme = Scheme::SemiImplicitP2;
  EXPECT_DOUBLE_EQ(adaptive_dt(u, kCubic, PExponent(2.0), c), 0.5 * 1e-4);
}

TEST(Run, HeatDecayMatchesAnalytic) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.T_max = 1.0;
  const auto tr = run(sine(g, 1.0), SourceTerm::zero(), PExponent(2.0), c);
  EXPECT_EQ(tr.outcome, Outcome::Completed);
  EXPECT_EQ(tr.final().t, 1.0);
  EXPECT_NEAR(tr.final().supnorm, std::exp(-kPi * kPi), 0.02 * std::exp(-kPi * kPi));
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_EQ(tr.events[0].tag, EventTag::Horizon);
}

TEST(Run, SemiImplicitHeatDecay) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.scheme = Scheme::SemiImplicitP2;
  c.dt_init = 1e-5;
  c.dt_max = 1e-4;
  c.safety = 1.0;
  const auto tr = run(sine(g, 1.0), SourceTerm::zero(), PExponent(2.0), c);
  EXPECT_NEAR(tr.final().supnorm, std::exp(-kPi * kPi), 0.02 * std::exp(-kPi * kPi));
}

TEST(Run, ZeroInitialDataStaysZero) {
  const auto tr = run(Field(Grid::line(1.0, 19)), kCubic, PExponent(2.0), {});
  EXPECT_EQ(tr.outcome, Outcome::Decayed);
  ASSERT_EQ(tr.snapshots.size(), 1u);
  for (double x : tr.final().u.values()) EXPECT_EQ(x, 0.0);
}

TEST(Run, SubcriticalLinearSourceDecays) {
  const Grid g = Grid::line(1.0, 99);
  const auto eig = first_eigenpair(g, PExponent(2.0));
  SolverConfig c;
  c.T_max = 10.0;
  const auto tr = run(eig.phi, SourceTerm::eigen_scaled(0.5, 2.0, eig.lambda),
                      PExponent(2.0), c);
  EXPECT_EQ(tr.outcome, Outcome::Decayed);
  EXPECT_LE(tr.final().supnorm, 1e-10);
}

TEST(Run, CubicBlowUp) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  const auto tr = run(sine(g, 6.0), kCubic, PExponent(2.0), c);
  ASSERT_EQ(tr.outcome, Outcome::BlownUp);
  EXPECT_FALSE(tr.T_num_low_confidence);
  EXPECT_GE(tr.T_num, tr.final().t);
  // Pure ODE blow-up time from the peak value; diffusion delays it.
  EXPECT_GT(tr.T_num, 1.0 / (2 * 36.0));
  EXPECT_LT(tr.T_num, 0.025);
  for (std::size_t k = 1; k < tr.snapshots.size(); ++k) {
    EXPECT_GT(tr.snapshots[k].t, tr.snapshots[k - 1].t);
    EXPECT_GE(tr.snapshots[k].cumulative_ut2, tr.snapshots[k - 1].cumulative_ut2);
    EXPECT_GE(tr.snapshots[k].cumulative_u2, tr.snapshots[k - 1].cumulative_u2);
  }
  for (const auto& s : tr.snapshots)
    for (double x : s.u.values()) ASSERT_GE(x, 0.0);
}

TEST(Run, LargerDataBlowsUpSooner) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  double prev = INFINITY;
  for (double amp : {6.0, 8.0, 12.0}) {
    const auto tr = run(sine(g, amp), kCubic, PExponent(2.0), c);
    ASSERT_EQ(tr.outcome, Outcome::BlownUp);
    EXPECT_LT(tr.T_num, prev);
    prev = tr.T_num;
  }
}

TEST(Run, QuarticBlowUpForP3) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  const auto tr = run(sine(g, 10.0), SourceTerm::power_sum({{1.0, 4.0}}), PExponent(3.0), c);
  ASSERT_EQ(tr.outcome, Outcome::BlownUp);
  EXPECT_FALSE(tr.T_num_low_confidence);
  // Diffusion delays blow-up past the ODE time of the peak value.
  EXPECT_GT(tr.T_num, 1.0 / (3 * 1000.0));
  EXPECT_LT(tr.T_num, 1e-3);
}

TEST(Run, UnderflowIsReportedWithGrowth) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  c.dt_min = 1e-9;
  c.dt_init = 1e-6;
  const auto tr = run(sine(g, 6.0), kCubic, PExponent(2.0), c);
  EXPECT_EQ(tr.outcome, Outcome::DtUnderflow);
  EXPECT_TRUE(tr.superlinear_growth);
  EXPECT_TRUE(std::isnan(tr.T_num));
}

TEST(Run, Deterministic) {
  const Grid g = Grid::line(1.0, 49);
  SolverConfig c;
  c.safety = 0.1;
  const auto a = run(sine(g, 6.0), kCubic, PExponent(2.0), c);
  const auto b = run(sine(g, 6.0), kCubic, PExponent(2.0), c);
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  EXPECT_EQ(a.T_num, b.T_num);
  for (std::size_t k = 0; k < a.snapshots.size(); ++k)
    EXPECT_EQ(a.snapshots[k].u.values()[10], b.snapshots[k].u.values()[10]);
}

TEST(Run, RejectsBadInput) {
  const Grid g = Grid::line(1.0, 9);
  SolverConfig c;
  Field neg = sine(g, 1.0);
  neg[0] = -1.0;
  EXPECT_THROW(run(neg, kCubic, PExponent(2.0), c), InvalidArgument);
  c.U_blow = 0.5;
  EXPECT_THROW(run(sine(g, 1.0), kCubic, PExponent(2.0), c), InvalidArgument);
  SolverConfig bad;
  bad.dt_min = bad.dt_init;
  EXPECT_THROW(run(sine(g, 1.0), kCubic, PExponent(2.0), bad), InvalidArgument);
  bad = {};
  bad.safety = 0.0;
  EXPECT_THROW(validate(bad), InvalidArgument);
  bad = {};
  bad.scheme = Scheme::SemiImplicitP2;
  EXPECT_THROW(run(sine(g, 1.0), kCubic, PExponent(3.0), bad), InvalidArgument);
  EXPECT_THROW(parse_scheme("rk4"), ConfigError);
  EXPECT_EQ(parse_scheme("semi-implicit-p2"), Scheme::SemiImplicitP2);
}

Trajectory synthetic(const std::vector<double>& t, const std::vector<double>& sup) {
  Trajectory tr;
  const Grid g = Grid::line(1.0, 3);
  for (std::size_t k = 0; k < t.size(); ++k) {
    tr.snapshots.push_back({t[k], 0.0, Field(g), sup[k], 0.0, 0.0});
  }
  tr.outcome = Outcome::BlownUp;
  return tr;
}

TEST(ExtrapolateTnum, ReciprocalSeries) {
  std::vector<double> t, s;
  for (int k = 0; k < 10; ++k) {
    t.push_back(1.9 + 0.01 * k);
    s.push_back(1.0 / (2.0 - t.back()));
  }
  const auto fit = extrapolate_Tnum(synthetic(t, s));
  EXPECT_FALSE(fit.low_confidence);
  EXPECT_NEAR(fit.T, 2.0, 1e-3);
}

TEST(ExtrapolateTnum, BoundedSeriesFallsBack) {
  std::vector<double> t, s;
  for (int k = 0; k < 50; ++k) {
    t.push_back(0.1 * k);
    s.push_back(2.0 - std::exp(-t.back()));
  }
  const auto fit = extrapolate_Tnum(synthetic(t, s));
  EXPECT_TRUE(fit.low_confidence);
  EXPECT_EQ(fit.T, t.back());
}

TEST(ExtrapolateTnum, TooFewSamples) {
  const auto fit = extrapolate_Tnum(synthetic({0.0, 0.5, 0.9}, {1.0, 2.0, 10.0}));
  EXPECT_TRUE(fit.low_confidence);
  EXPECT_EQ(fit.T, 0.9);
}

TEST(ExtrapolateTnum, QuadraticOdeBlowUp) {
  // u' = u^2, u(0) = 10 blows up at t = 0.1; classical RK4 with dt = 0.01/u.
  std::vector<double> t{0.0}, s{10.0};
  double u = 10.0, time = 0.0, next_log = std::log(10.0) + 0.1;
  while (u < 1e6) {
    const double dt = 0.01 / u;
    const double k1 = u * u, k2 = std::pow(u + 0.5 * dt * k1, 2),
                 k3 = std::pow(u + 0.5 * dt * k2, 2), k4 = std::pow(u + dt * k3, 2);
    u += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    time += dt;
    if (std::log(u) >= next_log || u >= 1e6) {
      t.push_back(time);
      s.push_back(u);
      next_log = std::log(u) + 0.1;
    }
  }
  const auto fit = extrapolate_Tnum(synthetic(t, s), 1.0);
  EXPECT_FALSE(fit.low_confidence);
  EXPECT_NEAR(fit.T, 0.1, 1e-3);
}

}  // namespace
}  // namespace plap
