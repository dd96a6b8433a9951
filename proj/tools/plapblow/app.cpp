#include <CLI11.hpp>
#include <ostream>

#include "commands.hpp"
#include "experiment.hpp"

namespace plapcli {

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const HypothesisFailure& e) {
    err << "plapblow: " << e.what() << '\n';
    return kNotSatisfied;
  } catch (const plap::ConfigError& e) {
    err << "plapblow: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const plap::InvalidArgument& e) {
    err << "plapblow: invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "plapblow: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-Laplacian blow-up experiments", "plapblow"};
  app.require_subcommand(1);

  EigArgs eig;
  std::string eig_domain;
  double eig_L = 1.0;
  auto* c_eig = app.add_subcommand("eig", "first Dirichlet eigenpair");
  c_eig->add_option("--dim", eig.grid.dim, "1 or 2")->check(CLI::IsMember({1, 2}));
  c_eig->add_option("--L", eig_L, "side length");
  c_eig->add_option("--n", eig.grid.n, "interior nodes per axis");
  c_eig->add_option("--p", eig.p, "exponent p >= 2");
  c_eig->add_option("--domain", eig_domain, "dim:L:n (overrides --dim/--L/--n)");

  CheckArgs chk;
  std::string chk_domain, chk_beta;
  double chk_lambda = 0.0;
  auto* c_check = app.add_subcommand("check", "check a blow-up condition");
  c_check->add_option("--f", chk.f, "source spec")->required();
  c_check->add_option("--p", chk.p, "exponent p >= 2");
  c_check->add_option("--cond", chk.cond, "A, B, C or Cprime");
  c_check->add_option("--alpha", chk.alpha);
  c_check->add_option("--beta", chk_beta, "value or max");
  c_check->add_option("--gamma", chk.gamma);
  c_check->add_flag("--auto", chk.automatic, "search admissible constants");
  auto* o_lambda = c_check->add_option("--lambda", chk_lambda, "first eigenvalue");
  auto* o_domain = c_check->add_option("--domain", chk_domain, "dim:L:n for the eigensolve");
  o_lambda->excludes(o_domain);
  c_check->add_option("--u-min", chk.u_min);
  c_check->add_option("--u-max", chk.u_max);
  c_check->add_option("--samples", chk.samples);

  std::string config_path;
  std::string out_root;
  auto* c_sim = app.add_subcommand("simulate", "run one experiment");
  c_sim->add_option("--config", config_path)->required();
  c_sim->add_option("--out", out_root, "output root (default PLAP_OUT or ./plap_runs)");

  auto* c_bound = app.add_subcommand("bound", "concavity constants and blow-up time bound");
  c_bound->add_option("--config", config_path)->required();

  auto* c_report = app.add_subcommand("report", "per-snapshot functional series");
  c_report->add_option("--config", config_path)->required();

  SweepArgs sw;
  std::string sweep_config;
  bool no_sim = false;
  auto* c_sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
  c_sweep->add_option("--config", sweep_config)->required();
  c_sweep->add_option("--axis", sw.axes, "key=v1,v2,... or key=a..b");
  c_sweep->add_option("--jobs", sw.jobs, "worker threads (0 = all cores)");
  c_sweep->add_option("--max-runs", sw.max_runs);
  c_sweep->add_flag("--no-simulate", no_sim, "conditions and bounds only");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  return guarded(err, [&]() -> int {
    if (*c_eig) {
      if (!eig_domain.empty()) {
        eig.grid = parse_domain(eig_domain);
      } else {
        eig.grid.lx = eig.grid.ly = eig_L;
      }
      return cmd_eig(eig, out);
    }
    if (*c_check) {
      if (*o_lambda) chk.lambda = chk_lambda;
      if (*o_domain) chk.domain = parse_domain(chk_domain);
      if (chk_beta == "max")
        chk.beta_max = true;
      else if (!chk_beta.empty())
        chk.beta = parse_double(chk_beta, "--beta");
      return cmd_check(chk, out);
    }
    if (*c_sim)
      return cmd_simulate(config_path,
                          out_root.empty() ? std::nullopt
                                           : std::optional<std::filesystem::path>(out_root),
                          out);
    if (*c_bound) return cmd_bound(config_path, out);
    if (*c_report) return cmd_report(config_path, out, err);
    sw.config = sweep_config;
    sw.simulate = !no_sim;
    return cmd_sweep(sw, out);
  });
}

}  // namespace plapcli
