#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plap/sources.hpp"

namespace plap {

/// Blow-up conditions on the nonlinearity, all of the form
///   alpha F(u) <= u f(u) + beta u^p + gamma   for u > 0.
///  A:      alpha = p + eps, beta = gamma = 0
///  B:      alpha = p + eps, beta = 0, gamma >= 0
///  C:      alpha = p + eps, 0 <= beta <= eps (lambda_1p - margin) / p
///  CPrime: alpha = p, beta = 0, gamma >= 0
enum class ConditionTag { A, B, C, CPrime };

std::string_view to_string(ConditionTag tag);
/// Accepts A, B, C, Cprime (and Ap/Bp/Cp/Cp'). Throws ConfigError otherwise.
ConditionTag parse_condition_tag(std::string_view text);

struct ConditionParams {
  double p = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda1p = 0.0;
  /// Absolute uncertainty of lambda1p; the admissible beta range is computed
  /// from lambda1p - lambda_margin.
  double lambda_margin = 0.0;

  double epsilon() const { return alpha - p; }
  /// Largest admissible beta for condition C.
  double beta_bound() const { return epsilon() * (lambda1p - lambda_margin) / p; }
};

/// Rejects parameters violating the constraints of `tag` (InvalidArgument).
void validate_params(const ConditionParams& params, ConditionTag tag);

enum class Verdict { Yes, No, GridOnly };
enum class Certificate { ExactAnalytic, GridSampled };

std::string_view to_string(Verdict v);
std::string_view to_string(Certificate c);

/// Sampled range of u, log-spaced.
struct URange {
  double lo = 1e-6;
  double hi = 1e6;
};

struct ConditionReport {
  ConditionTag condition = ConditionTag::C;
  Verdict satisfied = Verdict::No;
  /// min over samples of r(u) / scale(u), r = u f + beta u^p + gamma - alpha F.
  double residual_min = 0.0;
  double worst_u = 0.0;
  Certificate certificate = Certificate::GridSampled;
  URange u_range;
  int samples = 0;
  /// beta sits at its admissible bound and the residual touches zero.
  bool boundary_case = false;
  ConditionParams params;

  bool passes() const { return satisfied != Verdict::No; }
};

/// `samples` log-spaced points covering [lo, hi] inclusive.
std::vector<double> log_grid(URange range, int samples);

/// Checks `tag` for `source` with the given constants.
///
/// Power families (power sums, eigen-scaled) get a symbolic verdict when the
/// sign of the residual is decided term by term: all merged coefficients
/// nonnegative gives Yes/ExactAnalytic; a negative leading (u -> inf) or
/// trailing (u -> 0+) coefficient gives No/ExactAnalytic. Otherwise the
/// residual is sampled on the log grid: nonnegative everywhere gives
/// GridOnly, any negative sample gives No.
///
/// Throws InvalidArgument if the parameters violate the tag's constraints or
/// samples < 1000.
ConditionReport check_condition(const SourceTerm& source,
                                const ConditionParams& params, ConditionTag tag,
                                URange range = {}, int samples = 10000);

struct MonotoneReport {
  /// Verdict of the monotonicity test alone (GridOnly or No).
  ConditionReport report;
  Verdict check_verdict = Verdict::No;
  bool agrees = false;
};

/// Tests that G(u) = F(u)/u^alpha - (gamma/alpha) u^{-alpha}
///                   - (beta/eps) u^{-eps}
/// is nondecreasing on the log grid, and compares with check_condition on the
/// same inputs. Throws InvalidArgument if eps = alpha - p <= 0.
MonotoneReport monotone_characterization(const SourceTerm& source,
                                         const ConditionParams& params,
                                         URange range = {}, int samples = 10000);

struct HierarchyReport {
  ConditionReport a, b, c;
  bool a_satisfiable = false;
  bool b_satisfiable = false;
  bool c_satisfiable = false;
  /// A => B and B => C.
  bool chain_ok = false;
};

/// Searches the constant grids eps in {0.1 .. 5}, gamma in {0 .. 10} (beta at
/// its bound for C) for each condition and reports the implication chain.
HierarchyReport hierarchy_check(const SourceTerm& source, double p,
                                double lambda1p, URange range = {},
                                double lambda_margin = 0.0);

/// Smallest gamma on the search grid (then largest alpha) for which `tag`
/// holds; nullopt if none does.
std::optional<ConditionReport> find_admissible(const SourceTerm& source,
                                               ConditionTag tag, double p,
                                               double lambda1p,
                                               double lambda_margin = 0.0,
                                               URange range = {});

/// Growth f(u) >= mu u^{p-1+eps} on [m, u_max].
struct Growth {
  double m = 0.0;
  double mu = 0.0;
  double epsilon = 0.0;
};

/// Lower power envelope: min over u in [m, u_max] of f(u) / u^{p-1+eps},
/// from the log grid plus a golden-section refinement around the smallest
/// sample.
double growth_envelope(const SourceTerm& source, double p, double eps,
                       double m, double u_max, int samples = 10000);

/// Follows the growth lemma: requires f(u) >= lambda_lower u^{p-1} on the
/// grid with lambda_lower > lambda1p and condition C for `params`. Writes
/// F = u^alpha h(u) + (beta/eps) u^p + gamma/alpha, takes the smallest sampled
/// m > 1 with h(m) > 0 and returns the largest mu with f >= mu u^{p-1+eps}
/// on [m, u_max]. Returns nullopt when a hypothesis fails.
std::optional<Growth> extract_growth(const SourceTerm& source,
                                     const ConditionParams& params,
                                     double lambda_lower, URange range = {},
                                     int samples = 10000);

}  // namespace plap
