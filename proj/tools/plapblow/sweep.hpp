#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace plapcli {

/// One sweep axis: a config key (set_key syntax) and its values.
struct Axis {
  std::string key;
  std::vector<std::string> values;
};

/// "key=v1,v2,..." or "key=a..b" (integers a to b inclusive). An empty value
/// list is rejected.
Axis parse_axis(std::string_view text);

/// Numeric columns are NaN when not computed.
struct SweepRow {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::vector<std::string> values;
  std::string verdict;
  double alpha = kNaN, beta = kNaN, gamma = kNaN;
  double J0 = kNaN;
  double Tstar_upper = kNaN;
  std::string outcome;
  double T_num = kNaN;
  double min_H = kNaN;
  std::string error;
};

struct SweepOptions {
  /// Worker threads; 0 means hardware concurrency.
  int jobs = 0;
  std::size_t max_runs = 10000;
  bool simulate = true;
};

/// Cartesian product of the axes over `base`, rows in lexicographic order of
/// the axis value indices (first axis slowest). Runs execute on a bounded
/// worker pool; a failing run fills its error column and the sweep
/// continues. Throws ConfigError if the product exceeds max_runs or an axis
/// key is not a config key.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<Axis>& axes,
                                const SweepOptions& options,
                                const std::filesystem::path& base_dir = {});

void write_sweep_csv(std::ostream& os, const std::vector<Axis>& axes,
                     const std::vector<SweepRow>& rows);

}  // namespace plapcli
