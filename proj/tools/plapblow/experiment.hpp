#pragma once

#include <filesystem>
#include <optional>

#include "config.hpp"
#include "plap/conditions.hpp"
#include "plap/eigensolver.hpp"
#include "plap/error.hpp"
#include "plap/sources.hpp"

namespace plapcli {

/// No admissible condition constants or a failed theorem hypothesis.
class HypothesisFailure : public plap::Error {
 public:
  using Error::Error;
};

/// A config turned into numerical objects.
struct Prepared {
  ExperimentConfig config;
  plap::Grid grid;
  plap::PExponent p;
  std::optional<plap::EigenResult> eig;
  plap::SourceTerm source;
  plap::Field u0;

  double lambda() const { return eig ? eig->lambda : 0.0; }
  /// Absolute eigenvalue uncertainty, residual * lambda.
  double lambda_margin() const { return eig ? eig->residual * eig->lambda : 0.0; }
};

plap::Grid make_grid(const GridSpec& spec);

/// First eigenpair on `grid`; throws EvaluationError if it does not converge.
plap::EigenResult solve_eigen(const plap::Grid& grid, plap::PExponent p);

/// Builds grid, eigenpair (when the source, the initial data or the
/// condition needs it), source and initial data. Relative file paths resolve
/// against base_dir.
Prepared prepare(const ExperimentConfig& config,
                 const std::filesystem::path& base_dir = {});

struct ResolvedCondition {
  plap::ConditionParams params;
  plap::ConditionReport report;
};

/// Manual constants are validated and checked; automatic mode searches the
/// smallest gamma with admissible (alpha, beta). Throws HypothesisFailure if
/// no admissible constants exist.
ResolvedCondition resolve_condition(const Prepared& prepared);

}  // namespace plapcli
