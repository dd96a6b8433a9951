#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "plap/conditions.hpp"
#include "plap/solver.hpp"

namespace plapcli {

struct GridSpec {
  int dim = 1;
  double lx = 1.0;
  double ly = 1.0;
  int n = 99;
};

struct InitSpec {
  enum class Kind { Sine, Eigen, File };
  Kind kind = Kind::Sine;
  double c = 1.0;
  /// Eigen only: int phi^p = |Omega| instead of sup phi = 1.
  bool mass_norm = false;
  std::string path;
};

struct CondSpec {
  plap::ConditionTag tag = plap::ConditionTag::C;
  /// Search gamma and (alpha, beta) instead of using the values below.
  bool automatic = false;
  double alpha = 0.0;
  double beta = 0.0;
  /// beta at the admissible bound (alpha - p)(lambda - margin)/p.
  bool beta_max = false;
  double gamma = 0.0;
};

/// One experiment, read from flat "key = value" text:
///
///   grid.dim = 1            grid.L = 1 (2D: 1x2)      grid.n = 99
///   p = 2                   f = powersum: 1*u^3
///   cond.tag = C            cond.mode = manual|auto
///   cond.alpha = 4          cond.beta = 0|max         cond.gamma = 0.01
///   init = sine: c=6 | eigen: c=1[, norm=mass] | file: u0.csv
///   solver.scheme, solver.dt_init, solver.dt_min, solver.dt_max,
///   solver.safety, solver.U_blow, solver.T_max, solver.sample_interval
///   output = <dir>
///
/// '#' starts a comment. grid.n, p, f and init are required.
struct ExperimentConfig {
  GridSpec grid;
  double p = 2.0;
  std::string f;
  CondSpec cond;
  InitSpec init;
  plap::SolverConfig solver;
  std::string output;
};

/// Throws plap::ConfigError on unknown or duplicate keys, malformed values or
/// missing required keys.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: fixed key order, floats with 17 significant digits.
std::string emit_config(const ExperimentConfig& config);

/// Sets one key from its textual value, as a config line would. Also accepts
/// init.c (amplitude in the init spec) and f.c (eigscaled multiplier).
void set_key(ExperimentConfig& config, std::string_view key, std::string_view value);

/// FNV-1a 64 of the canonical text without the output key, as 16 hex
/// digits.
std::string config_hash(const ExperimentConfig& config);

/// "dim:L:n", e.g. 1:1:999 or 2:1x1:99.
GridSpec parse_domain(std::string_view text);

/// Canonical form of a source spec string.
std::string normalize_source_spec(std::string_view spec);

double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);
std::string trim(std::string_view s);

}  // namespace plapcli
