#pragma once

#include <vector>

#include "plap/conditions.hpp"
#include "plap/plap_operator.hpp"
#include "plap/sources.hpp"
#include "plap/trajectory.hpp"

namespace plap {

struct EnergyRecord {
  double t = 0.0;
  /// Discrete int |grad u|^p.
  double gradE = 0.0;
  /// int F(u).
  double Fint = 0.0;
  /// -gradE/p + Fint - gamma |Omega|.
  double J = 0.0;
  double cumulative_ut2 = 0.0;
};

struct ConcavityRecord {
  double t = 0.0;
  /// int_0^t int u^2 + M.
  double I = 0.0;
  /// int u^2.
  double Iprime = 0.0;
  /// 2 int (-|grad u|^p + u f(u)).
  double Idoubleprime = 0.0;
  /// Idoubleprime * I - (1 + sigma) Iprime^2.
  double H = 0.0;
  double sigma = 0.0;
};

struct BlowupBound {
  double J0 = 0.0;
  double u0_l2sq = 0.0;
  double sigma = 0.0;
  /// (alpha/(alpha-2)) (1 + sqrt(alpha/2)) (int u0^2)^2 / (2 alpha J0).
  double M = 0.0;
  /// M / (sigma int u0^2).
  double Tstar_upper = 0.0;
  /// Same with alpha/(alpha-p) in place of alpha/(alpha-2); equals the
  /// above for p = 2.
  double M_alt = 0.0;
  double Tstar_upper_alt = 0.0;
};

/// J_p(u) = -gradient_energy(u)/p + int F(u) - gamma |Omega|.
double eval_J(const Field& u, const SourceTerm& source, PExponent p, double gamma);

/// Energy record of every snapshot.
std::vector<EnergyRecord> eval_energy_series(const Trajectory& trajectory,
                                             const SourceTerm& source, PExponent p,
                                             double gamma);

/// Concavity constants for u0. Throws InvalidArgument if alpha <= 2 (sigma
/// would not be positive) and EvaluationError if J(u0) <= 0.
BlowupBound choose_M(const Field& u0, const SourceTerm& source, PExponent p,
                     const ConditionParams& params);

/// Concavity quantities at every snapshot, with I'' from the spatial
/// formula. Throws InvalidArgument if timestamps are not strictly increasing.
std::vector<ConcavityRecord> eval_concavity_series(const Trajectory& trajectory,
                                                   const SourceTerm& source,
                                                   PExponent p,
                                                   const ConditionParams& params,
                                                   double M);

/// J(t) - J(0) - int_0^t int u_t^2 at every snapshot: an identity (about 0)
/// for p = 2 and a slack (>= 0) for p > 2.
std::vector<double> energy_identity_residual(const Trajectory& trajectory,
                                             const SourceTerm& source, PExponent p,
                                             double gamma);

/// I''(t) - 2 alpha (J(0) + int_0^t int u_t^2) at every snapshot; nonnegative
/// whenever params satisfy condition C.
std::vector<double> idoubleprime_slack(const Trajectory& trajectory,
                                       const SourceTerm& source, PExponent p,
                                       const ConditionParams& params);

}  // namespace plap
