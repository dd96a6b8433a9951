#include "plap/functionals.hpp"

#include <cmath>
#include <limits>

#include "plap/error.hpp"

namespace plap {

namespace {

double integral_uf(const Field& u, const SourceTerm& source) {
  return integrate_composed(u, [&](double x) { return x * source.f(x); });
}

double integral_F(const Field& u, const SourceTerm& source) {
  return integrate_composed(u, [&](double x) { return source.F(x); });
}

void require_increasing(const Trajectory& tr) {
  for (std::size_t k = 1; k < tr.snapshots.size(); ++k)
    if (!(tr.snapshots[k].t > tr.snapshots[k - 1].t))
      throw InvalidArgument("trajectory timestamps must be strictly increasing");
}

}  // namespace

double eval_J(const Field& u, const SourceTerm& source, PExponent p, double gamma) {
  return -gradient_energy(u, p) / p.value() + integral_F(u, source) -
         gamma * u.grid().measure();
}

std::vector<EnergyRecord> eval_energy_series(const Trajectory& tr,
                                             const SourceTerm& source, PExponent p,
                                             double gamma) {
  require_increasing(tr);
  std::vector<EnergyRecord> out;
  out.reserve(tr.snapshots.size());
  for (const auto& s : tr.snapshots) {
    EnergyRecord r;
    r.t = s.t;
    r.gradE = gradient_energy(s.u, p);
    r.Fint = integral_F(s.u, source);
    r.J = -r.gradE / p.value() + r.Fint - gamma * s.u.grid().measure();
    r.cumulative_ut2 = s.cumulative_ut2;
    out.push_back(r);
  }
  return out;
}

BlowupBound choose_M(const Field& u0, const SourceTerm& source, PExponent p,
                     const ConditionParams& params) {
  const double a = params.alpha;
  if (!(a > 2.0)) throw InvalidArgument("choose_M: alpha must exceed 2");
  BlowupBound b;
  b.J0 = eval_J(u0, source, p, params.gamma);
  if (!(b.J0 > 0.0))
    throw EvaluationError("choose_M: J(0) <= 0, the blow-up hypothesis fails");
  b.u0_l2sq = integrate_power(u0, 2.0);
  b.sigma = std::sqrt(a / 2.0) - 1.0;
  const double common = (1.0 + std::sqrt(a / 2.0)) * b.u0_l2sq * b.u0_l2sq / (2.0 * a * b.J0);
  b.M = a / (a - 2.0) * common;
  b.Tstar_upper = b.M / (b.sigma * b.u0_l2sq);
  if (a > p.value()) {
    b.M_alt = a / (a - p.value()) * common;
    b.Tstar_upper_alt = b.M_alt / (b.sigma * b.u0_l2sq);
  } else {
    b.M_alt = b.Tstar_upper_alt = std::numeric_limits<double>::infinity();
  }
  return b;
}

std::vector<ConcavityRecord> eval_concavity_series(const Trajectory& tr,
                                                   const SourceTerm& source,
                                                   PExponent p,
                                                   const ConditionParams& params,
                                                   double M) {
  require_increasing(tr);
  const double sigma = std::sqrt(params.alpha / 2.0) - 1.0;
  std::vector<ConcavityRecord> out;
  out.reserve(tr.snapshots.size());
  for (const auto& s : tr.snapshots) {
    ConcavityRecord r;
    r.t = s.t;
    r.sigma = sigma;
    r.I = s.cumulative_u2 + M;
    r.Iprime = integrate_power(s.u, 2.0);
    r.Idoubleprime = 2.0 * (-gradient_energy(s.u, p) + integral_uf(s.u, source));
    r.H = r.Idoubleprime * r.I - (1.0 + sigma) * r.Iprime * r.Iprime;
    out.push_back(r);
  }
  return out;
}

std::vector<double> energy_identity_residual(const Trajectory& tr,
                                             const SourceTerm& source, PExponent p,
                                             double gamma) {
  const auto e = eval_energy_series(tr, source, p, gamma);
  std::vector<double> out;
  out.reserve(e.size());
  for (const auto& r : e) out.push_back(r.J - e.front().J - r.cumulative_ut2);
  return out;
}

std::vector<double> idoubleprime_slack(const Trajectory& tr, const SourceTerm& source,
                                       PExponent p, const ConditionParams& params) {
  require_increasing(tr);
  const double j0 = eval_J(tr.initial().u, source, p, params.gamma);
  std::vector<double> out;
  out.reserve(tr.snapshots.size());
  for (const auto& s : tr.snapshots) {
    const double i2 = 2.0 * (-gradient_energy(s.u, p) + integral_uf(s.u, source));
    out.push_back(i2 - 2.0 * params.alpha * (j0 + s.cumulative_ut2));
  }
  return out;
}

}  // namespace plap
