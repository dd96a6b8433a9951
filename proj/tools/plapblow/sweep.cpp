#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "experiment.hpp"
#include "plap/format.hpp"
#include "plap/functionals.hpp"
#include "plap/solver.hpp"

namespace plapcli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

SweepRow evaluate(const ExperimentConfig& cfg, const std::filesystem::path& base_dir,
                  bool simulate) {
  SweepRow row;
  const Prepared pr = prepare(cfg, base_dir);

  std::optional<ResolvedCondition> rc;
  try {
    rc = resolve_condition(pr);
    row.verdict = std::string(plap::to_string(rc->report.satisfied));
    row.alpha = rc->params.alpha;
    row.beta = rc->params.beta;
    row.gamma = rc->params.gamma;
  } catch (const HypothesisFailure&) {
    row.verdict = "none";
  }
  const double gamma = rc ? rc->params.gamma : cfg.cond.gamma;
  row.J0 = plap::eval_J(pr.u0, pr.source, pr.p, gamma);

  std::optional<plap::BlowupBound> bound;
  if (rc && row.J0 > 0.0 && rc->params.alpha > 2.0) {
    bound = plap::choose_M(pr.u0, pr.source, pr.p, rc->params);
    row.Tstar_upper = bound->Tstar_upper;
  }
  if (simulate) {
    const auto tr = plap::run(pr.u0, pr.source, pr.p, cfg.solver);
    row.outcome = std::string(plap::to_string(tr.outcome));
    row.T_num = tr.T_num;
    if (bound) {
      double h = std::numeric_limits<double>::infinity();
      for (const auto& r : plap::eval_concavity_series(tr, pr.source, pr.p, rc->params, bound->M))
        h = std::min(h, r.H);
      row.min_H = h;
    }
  }
  return row;
}

}  // namespace

Axis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw plap::ConfigError("axis must be key=values");
  Axis axis{trim(text.substr(0, eq)), {}};
  const std::string list = trim(text.substr(eq + 1));
  const auto dots = list.find("..");
  if (dots != std::string::npos) {
    const int a = parse_int(list.substr(0, dots), "axis range");
    const int b = parse_int(list.substr(dots + 2), "axis range");
    if (b < a) throw plap::ConfigError("axis range must be ascending");
    for (int v = a; v <= b; ++v) axis.values.push_back(std::to_string(v));
  } else {
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw plap::ConfigError("axis '" + axis.key + "' has an empty value");
      axis.values.push_back(item);
    }
  }
  if (axis.key.empty() || axis.values.empty())
    throw plap::ConfigError("axis needs a key and at least one value");
  return axis;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<Axis>& axes,
                                const SweepOptions& options,
                                const std::filesystem::path& base_dir) {
  std::size_t total = 1;
  for (const auto& a : axes) {
    total *= a.values.size();
    if (total > options.max_runs)
      throw plap::ConfigError("sweep exceeds the run cap of " + std::to_string(options.max_runs));
  }
  // Configs are built up front so bad keys fail the whole sweep early.
  std::vector<ExperimentConfig> configs(total, base);
  std::vector<std::vector<std::string>> values(total);
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t rem = r;
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rem % axes[a].values.size();
      rem /= axes[a].values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      values[r].push_back(axes[a].values[idx[a]]);
      set_key(configs[r], axes[a].key, axes[a].values[idx[a]]);
    }
  }

  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < total; r = next++) {
      try {
        rows[r] = evaluate(configs[r], base_dir, options.simulate);
      } catch (const std::exception& e) {
        rows[r] = SweepRow{};
        rows[r].error = e.what();
      }
      rows[r].values = values[r];
    }
  };
  int jobs = options.jobs > 0 ? options.jobs
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<Axis>& axes,
                     const std::vector<SweepRow>& rows) {
  for (const auto& a : axes) os << csv_field(a.key) << ',';
  os << "verdict,alpha,beta,gamma,J0,Tstar_upper,outcome,T_num,min_H,error\n";
  using plap::format_double;
  for (const auto& r : rows) {
    for (const auto& v : r.values) os << csv_field(v) << ',';
    os << r.verdict << ',' << format_double(r.alpha) << ',' << format_double(r.beta) << ','
       << format_double(r.gamma) << ',' << format_double(r.J0) << ','
       << format_double(r.Tstar_upper) << ',' << r.outcome << ',' << format_double(r.T_num)
       << ',' << format_double(r.min_H) << ',' << csv_field(r.error) << '\n';
  }
}

}  // namespace plapcli
