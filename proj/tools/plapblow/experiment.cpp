#include "experiment.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "plap/field_io.hpp"
#include "plap/format.hpp"

namespace plapcli {

using plap::ConfigError;

plap::Grid make_grid(const GridSpec& spec) {
  try {
    const std::array<double, 2> lengths{spec.lx, spec.ly};
    return plap::Grid::build(spec.dim, std::span<const double>(lengths.data(), spec.dim), spec.n);
  } catch (const plap::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

plap::EigenResult solve_eigen(const plap::Grid& grid, plap::PExponent p) {
  auto eig = plap::first_eigenpair(grid, p);
  if (!eig.converged)
    throw plap::EvaluationError("eigensolver did not converge (residual " +
                                plap::format_short(eig.residual) + ")");
  return eig;
}

Prepared prepare(const ExperimentConfig& config, const std::filesystem::path& base_dir) {
  const plap::Grid grid = make_grid(config.grid);
  const plap::PExponent p(config.p);
  const bool eigen_init = config.init.kind == InitSpec::Kind::Eigen;
  const bool needs_eig = plap::source_needs_lambda(config.f) || eigen_init ||
                         config.cond.automatic || config.cond.tag == plap::ConditionTag::C;
  std::optional<plap::EigenResult> eig;
  if (needs_eig) eig = solve_eigen(grid, p);

  plap::SourceTerm source = plap::parse_source(
      config.f, config.p, eig ? std::optional<double>(eig->lambda) : std::nullopt, base_dir);

  plap::Field u0(grid);
  const auto& init = config.init;
  switch (init.kind) {
    case InitSpec::Kind::Sine: {
      const double pi = std::numbers::pi;
      const double c = init.c, lx = grid.length(0), ly = grid.length(1);
      if (grid.dim() == 1)
        u0 = plap::Field::sample(grid, [&](double x) { return c * std::sin(pi * x / lx); });
      else
        u0 = plap::Field::sample(grid, [&](double x, double y) {
          return c * std::sin(pi * x / lx) * std::sin(pi * y / ly);
        });
      break;
    }
    case InitSpec::Kind::Eigen: {
      const auto norm = init.mass_norm ? plap::Normalization::PowerMass
                                       : plap::Normalization::SupNorm;
      u0 = plap::normalize(eig->phi, p, norm).scaled(init.c);
      break;
    }
    case InitSpec::Kind::File: {
      std::filesystem::path path(init.path);
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      u0 = plap::read_field_csv(path);
      if (!(u0.grid() == grid)) throw ConfigError("init file grid does not match grid.*");
      for (double v : u0.values())
        if (v < 0.0) throw ConfigError("init file has negative values");
      break;
    }
  }
  return Prepared{config, grid, p, std::move(eig), std::move(source), std::move(u0)};
}

ResolvedCondition resolve_condition(const Prepared& pr) {
  const auto& cond = pr.config.cond;
  if (cond.automatic) {
    const auto rep = plap::find_admissible(pr.source, cond.tag, pr.config.p, pr.lambda(),
                                           pr.lambda_margin());
    if (!rep)
      throw HypothesisFailure("no admissible constants for " +
                              std::string(plap::to_string(cond.tag)) + " on the search grid");
    return {rep->params, *rep};
  }
  plap::ConditionParams prm;
  prm.p = pr.config.p;
  prm.alpha = cond.alpha;
  prm.gamma = cond.gamma;
  prm.lambda1p = pr.lambda();
  prm.lambda_margin = pr.lambda_margin();
  prm.beta = cond.beta_max ? std::max(0.0, prm.beta_bound()) : cond.beta;
  try {
    return {prm, plap::check_condition(pr.source, prm, cond.tag)};
  } catch (const plap::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace plapcli
