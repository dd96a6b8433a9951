#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plap/eigensolver.hpp"
#include "plap/error.hpp"
#include "plap/functionals.hpp"
#include "plap/solver.hpp"

namespace plap {
namespace {

constexpr double kPi = std::numbers::pi;
const SourceTerm kCubic = SourceTerm::power_sum({{1.0, 3.0}});

Field sine(const Grid& g, double c) {
  return Field::sample(g, [c](double x) { return c * std::sin(kPi * x); });
}

// J(0) for u0 = c sin(pi x), p = 2, f = u^3 on (0, 1):
// -(1/2)(c^2 pi^2 / 2) + (1/4)(3 c^4 / 8) - gamma.
double j0_closed_form(double c, double gamma) {
  return -c * c * kPi * kPi / 4 + 3 * std::pow(c, 4) / 32 - gamma;
}

ConditionParams cubic_params(double gamma) {
  ConditionParams prm;
  prm.p = 2.0;
  prm.alpha = 4.0;
  prm.gamma = gamma;
  prm.lambda1p = kPi * kPi;
  return prm;
}

TEST(EvalJ, ZeroFieldKeepsGammaTerm) {
  EXPECT_DOUBLE_EQ(eval_J(Field(Grid::line(1.0, 19)), kCubic, PExponent(2.0), 1.0), -1.0);
  EXPECT_DOUBLE_EQ(eval_J(Field(Grid::line(2.0, 19)), kCubic, PExponent(3.0), 0.5), -1.0);
}

TEST(EvalJ, SineCubicClosedForm) {
  const Grid g = Grid::line(1.0, 999);
  for (double c : {4.0, 6.0}) {
    const double expect = j0_closed_form(c, 0.01);
    EXPECT_NEAR(eval_J(sine(g, c), kCubic, PExponent(2.0), 0.01), expect,
                1e-4 * std::abs(expect) + 1e-3);
  }
  EXPECT_LT(eval_J(sine(g, 4.0), kCubic, PExponent(2.0), 0.01), 0.0);
  EXPECT_GT(eval_J(sine(g, 6.0), kCubic, PExponent(2.0), 0.01), 0.0);
}

TEST(EvalJ, EigenfunctionConstruction) {
  for (double p : {2.0, 3.0}) {
    const Grid g = Grid::line(1.0, 499);
    EigenOptions opt;
    opt.normalization = Normalization::PowerMass;
    const auto eig = first_eigenpair(g, PExponent(p), opt);
    const auto f = SourceTerm::eigen_scaled(p, p, eig.lambda);
    const double lower = eig.lambda * (1 - 1 / p) - 1.0;
    EXPECT_GT(lower, 0.0);
    EXPECT_GE(eval_J(eig.phi, f, PExponent(p), 1.0), lower - 1e-6);
  }
}

TEST(ChooseM, PlugInArithmetic) {
  const Grid g = Grid::line(1.0, 999);
  const Field u0 = sine(g, 6.0);
  const auto b = choose_M(u0, kCubic, PExponent(2.0), cubic_params(0.01));
  const double j0 = j0_closed_form(6.0, 0.01);
  EXPECT_NEAR(b.J0, j0, 1e-3);
  EXPECT_NEAR(b.u0_l2sq, 18.0, 1e-10);
  EXPECT_DOUBLE_EQ(b.sigma, std::sqrt(2.0) - 1.0);
  const double m = 2.0 * (1 + std::sqrt(2.0)) * 18.0 * 18.0 / (8.0 * j0);
  EXPECT_NEAR(b.M, m, 1e-4 * m);
  EXPECT_NEAR(b.Tstar_upper, m / ((std::sqrt(2.0) - 1) * 18.0), 1e-4);
  EXPECT_DOUBLE_EQ(b.M_alt, b.M);
}

TEST(ChooseM, RejectsFailedHypotheses) {
  const Grid g = Grid::line(1.0, 199);
  EXPECT_THROW(choose_M(sine(g, 4.0), kCubic, PExponent(2.0), cubic_params(0.01)),
               EvaluationError);
  auto prm = cubic_params(0.0);
  prm.alpha = 2.0;
  EXPECT_THROW(choose_M(sine(g, 6.0), kCubic, PExponent(2.0), prm), InvalidArgument);
}

TEST(ChooseM, MonotoneInGammaAndJ0) {
  const Grid g = Grid::line(1.0, 199);
  const Field u0 = sine(g, 6.0);
  const auto a = choose_M(u0, kCubic, PExponent(2.0), cubic_params(0.01));
  const auto b = choose_M(u0, kCubic, PExponent(2.0), cubic_params(0.02));
  EXPECT_LT(b.J0, a.J0);
  EXPECT_GT(b.Tstar_upper, a.Tstar_upper);
  // gamma just below J(0) with gamma = 0: J(0) -> 0+ sends M up.
  const double j = choose_M(u0, kCubic, PExponent(2.0), cubic_params(0.0)).J0;
  const auto c = choose_M(u0, kCubic, PExponent(2.0), cubic_params(j * (1 - 1e-6)));
  EXPECT_GT(c.M, 1e5 * a.M);
}

TEST(ChooseM, ReportsBothVariantsForP3) {
  const Grid g = Grid::line(1.0, 199);
  ConditionParams prm;
  prm.p = 3.0;
  prm.alpha = 5.0;
  prm.lambda1p = 28.0;
  const auto b = choose_M(sine(g, 10.0), SourceTerm::power_sum({{1.0, 4.0}}),
                          PExponent(3.0), prm);
  EXPECT_NEAR(b.M_alt / b.M, (5.0 / 2.0) / (5.0 / 3.0), 1e-12);
  EXPECT_NEAR(b.Tstar_upper_alt / b.Tstar_upper, 1.5, 1e-12);
}

TEST(Concavity, SingleSnapshotSeries) {
  const Grid g = Grid::line(1.0, 199);
  Trajectory tr;
  const Field u0 = sine(g, 2.0);
  tr.snapshots.push_back({0.0, 0.0, u0, sup_norm(u0), 0.0, 0.0});
  const auto s = eval_concavity_series(tr, kCubic, PExponent(2.0), cubic_params(0.0), 3.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].I, 3.0);
  EXPECT_DOUBLE_EQ(s[0].Iprime, integrate_power(u0, 2.0));
  const double i2 = 2 * (-gradient_energy(u0, PExponent(2.0)) +
                         integrate_power(u0, 4.0));
  EXPECT_NEAR(s[0].Idoubleprime, i2, 1e-12 * std::abs(i2));
}

TEST(Concavity, PureDiffusionHasNonpositiveIdoubleprime) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.T_max = 0.2;
  const auto tr = run(sine(g, 1.0), SourceTerm::zero(), PExponent(2.0), c);
  for (const auto& r :
       eval_concavity_series(tr, SourceTerm::zero(), PExponent(2.0), cubic_params(0.0), 1.0))
    EXPECT_LE(r.Idoubleprime, 0.0);
}

TEST(Concavity, PositiveOnBlowUpRun) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  const Field u0 = sine(g, 6.0);
  const auto tr = run(u0, kCubic, PExponent(2.0), c);
  ASSERT_EQ(tr.outcome, Outcome::BlownUp);
  const auto prm = cubic_params(0.01);
  const auto b = choose_M(u0, kCubic, PExponent(2.0), prm);
  for (const auto& r : eval_concavity_series(tr, kCubic, PExponent(2.0), prm, b.M))
    EXPECT_GT(r.H, 0.0) << r.t;
  EXPECT_LE(tr.T_num, b.Tstar_upper);
}

TEST(Concavity, RejectsNonMonotoneTimes) {
  const Grid g = Grid::line(1.0, 9);
  Trajectory tr;
  tr.snapshots.push_back({0.0, 0.0, sine(g, 1.0), 1.0, 0.0, 0.0});
  tr.snapshots.push_back({0.0, 0.0, sine(g, 1.0), 1.0, 0.0, 0.0});
  EXPECT_THROW(eval_concavity_series(tr, kCubic, PExponent(2.0), cubic_params(0.0), 1.0),
               InvalidArgument);
  EXPECT_THROW(energy_identity_residual(tr, kCubic, PExponent(2.0), 0.0), InvalidArgument);
}

TEST(EnergyIdentity, DecayRunP2) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.T_max = 1.0;
  const auto tr = run(sine(g, 1.0), SourceTerm::zero(), PExponent(2.0), c);
  const auto res = energy_identity_residual(tr, SourceTerm::zero(), PExponent(2.0), 0.0);
  EXPECT_EQ(res.front(), 0.0);
  const double j0 = eval_J(tr.initial().u, SourceTerm::zero(), PExponent(2.0), 0.0);
  for (std::size_t k = 0; k < res.size(); ++k)
    EXPECT_LE(std::abs(res[k]), 1e-3 * (std::abs(j0) + tr.snapshots[k].cumulative_ut2));
  const auto e = eval_energy_series(tr, SourceTerm::zero(), PExponent(2.0), 0.0);
  for (std::size_t k = 1; k < e.size(); ++k) EXPECT_GE(e[k].J, e[k - 1].J - 1e-12);
}

TEST(EnergyIdentity, SlackNonnegativeForP3Quartic) {
  const Grid g = Grid::line(1.0, 99);
  SolverConfig c;
  c.safety = 0.05;
  const auto f = SourceTerm::power_sum({{1.0, 4.0}});
  const auto tr = run(sine(g, 10.0), f, PExponent(3.0), c);
  const auto slack = energy_identity_residual(tr, f, PExponent(3.0), 0.0);
  const double j0 = eval_J(tr.initial().u, f, PExponent(3.0), 0.0);
  for (std::size_t k = 0; k < slack.size(); ++k)
    EXPECT_GE(slack[k], -1e-3 * (std::abs(j0) + tr.snapshots[k].cumulative_ut2));
  ConditionParams prm;
  prm.p = 3.0;
  prm.alpha = 5.0;
  prm.lambda1p = 28.0;
  for (double s : idoubleprime_slack(tr, f, PExponent(3.0), prm)) EXPECT_GE(s, 0.0);
}

}  // namespace
}  // namespace plap
