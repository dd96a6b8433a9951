#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace plapcli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,
  kNotSatisfied = 1,
  kGridOnly = 2,
  kConfigError = 2,
  kNumericalFailure = 3,
};

struct EigArgs {
  GridSpec grid;
  double p = 2.0;
};
int cmd_eig(const EigArgs& args, std::ostream& out);

struct CheckArgs {
  std::string f;
  double p = 2.0;
  std::string cond = "C";
  double alpha = 0.0;
  double beta = 0.0;
  bool beta_max = false;
  double gamma = 0.0;
  bool automatic = false;
  std::optional<double> lambda;
  std::optional<GridSpec> domain;
  double u_min = 1e-6;
  double u_max = 1e6;
  int samples = 10000;
};
int cmd_check(const CheckArgs& args, std::ostream& out);

/// Output root: explicit flag, then the config's output key, then PLAP_OUT,
/// then ./plap_runs.
std::filesystem::path output_root(const ExperimentConfig& config,
                                  const std::optional<std::filesystem::path>& flag);

/// Runs the experiment into <root>/run-<hash>/ (config.cfg, run.csv,
/// events.csv, summary.csv, u0.csv, final.csv) and prints the directory.
int cmd_simulate(const std::filesystem::path& config_path,
                 const std::optional<std::filesystem::path>& out_root, std::ostream& out);

/// Prints J0,u0_l2sq,sigma,M,Tstar_upper,M_alt,Tstar_upper_alt for the
/// configured initial data.
int cmd_bound(const std::filesystem::path& config_path, std::ostream& out);

/// Runs the experiment and prints t,supnorm,J,I,Iprime,Idoubleprime,H,residual
/// per snapshot.
int cmd_report(const std::filesystem::path& config_path, std::ostream& out,
               std::ostream& err);

struct SweepArgs {
  std::filesystem::path config;
  std::vector<std::string> axes;
  int jobs = 0;
  std::size_t max_runs = 10000;
  bool simulate = true;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out);

/// Entry point shared by main() and the tests. Maps library errors to exit
/// codes and prints diagnostics on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plapcli
