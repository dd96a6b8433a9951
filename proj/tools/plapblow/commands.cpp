#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "experiment.hpp"
#include "plap/field_io.hpp"
#include "plap/format.hpp"
#include "plap/functionals.hpp"
#include "plap/solver.hpp"
#include "sweep.hpp"

namespace plapcli {

namespace fs = std::filesystem;
using plap::format_double;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw plap::Error("cannot write " + path.string());
  return os;
}

}  // namespace

int cmd_eig(const EigArgs& args, std::ostream& out) {
  const plap::Grid grid = make_grid(args.grid);
  const auto res = plap::first_eigenpair(grid, plap::PExponent(args.p));
  out << "lambda,p,n,residual,iterations\n"
      << format_double(res.lambda) << ',' << format_double(args.p) << ',' << args.grid.n << ','
      << format_double(res.residual) << ',' << res.iterations << '\n';
  return res.converged ? kOk : kNumericalFailure;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const plap::ConditionTag tag = plap::parse_condition_tag(a.cond);
  const plap::PExponent p(a.p);
  double lambda = 0.0, margin = 0.0;
  if (a.lambda) {
    lambda = *a.lambda;
  } else if (a.domain) {
    const auto eig = solve_eigen(make_grid(*a.domain), p);
    lambda = eig.lambda;
    margin = eig.residual * eig.lambda;
  }
  const bool needs_lambda = tag == plap::ConditionTag::C || plap::source_needs_lambda(a.f);
  if (needs_lambda && !(lambda > 0.0))
    throw plap::ConfigError("check: this condition needs --lambda or --domain");

  const auto source = plap::parse_source(
      a.f, a.p, lambda > 0.0 ? std::optional<double>(lambda) : std::nullopt);
  const plap::URange range{a.u_min, a.u_max};

  plap::ConditionReport rep;
  if (a.automatic) {
    const auto found = plap::find_admissible(source, tag, a.p, lambda, margin, range);
    if (!found)
      throw HypothesisFailure("no admissible constants for " +
                              std::string(plap::to_string(tag)) + " on the search grid");
    rep = *found;
  } else {
    plap::ConditionParams prm;
    prm.p = a.p;
    prm.alpha = a.alpha;
    prm.gamma = a.gamma;
    prm.lambda1p = lambda;
    prm.lambda_margin = margin;
    prm.beta = a.beta_max ? std::max(0.0, prm.beta_bound()) : a.beta;
    rep = plap::check_condition(source, prm, tag, range, a.samples);
  }

  out << "condition,satisfied,certificate,residual_min,worst_u,u_min,u_max,samples,"
         "p,alpha,beta,gamma,lambda1p,boundary_case\n"
      << plap::to_string(rep.condition) << ',' << plap::to_string(rep.satisfied) << ','
      << plap::to_string(rep.certificate) << ',' << format_double(rep.residual_min) << ','
      << format_double(rep.worst_u) << ',' << format_double(rep.u_range.lo) << ','
      << format_double(rep.u_range.hi) << ',' << rep.samples << ','
      << format_double(rep.params.p) << ',' << format_double(rep.params.alpha) << ','
      << format_double(rep.params.beta) << ',' << format_double(rep.params.gamma) << ','
      << format_double(rep.params.lambda1p) << ',' << (rep.boundary_case ? 1 : 0) << '\n';
  switch (rep.satisfied) {
    case plap::Verdict::Yes: return kOk;
    case plap::Verdict::No: return kNotSatisfied;
    case plap::Verdict::GridOnly: return kGridOnly;
  }
  return kNotSatisfied;
}

fs::path output_root(const ExperimentConfig& config, const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (!config.output.empty()) return config.output;
  if (const char* env = std::getenv("PLAP_OUT"); env && *env) return env;
  return "plap_runs";
}

int cmd_simulate(const fs::path& config_path, const std::optional<fs::path>& out_root,
                 std::ostream& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const Prepared pr = prepare(cfg, config_path.parent_path());
  const auto tr = plap::run(pr.u0, pr.source, pr.p, cfg.solver);

  const fs::path dir = output_root(cfg, out_root) / ("run-" + config_hash(cfg));
  fs::create_directories(dir);
  open_out(dir / "config.cfg") << emit_config(cfg);
  {
    auto os = open_out(dir / "run.csv");
    os << "t,dt,supnorm,cumulative_ut2,cumulative_u2\n";
    for (const auto& s : tr.snapshots)
      os << format_double(s.t) << ',' << format_double(s.dt) << ',' << format_double(s.supnorm)
         << ',' << format_double(s.cumulative_ut2) << ',' << format_double(s.cumulative_u2)
         << '\n';
  }
  {
    auto os = open_out(dir / "events.csv");
    os << "t,event\n";
    for (const auto& e : tr.events) os << format_double(e.t) << ',' << plap::to_string(e.tag) << '\n';
  }
  {
    auto os = open_out(dir / "summary.csv");
    os << "outcome,T_num,T_num_low_confidence,superlinear_growth,steps,clipped_steps,max_clip,"
          "final_t,final_supnorm\n"
       << plap::to_string(tr.outcome) << ',' << format_double(tr.T_num) << ','
       << (tr.T_num_low_confidence ? 1 : 0) << ',' << (tr.superlinear_growth ? 1 : 0) << ','
       << tr.steps << ',' << tr.clipped_steps << ',' << format_double(tr.max_clip) << ','
       << format_double(tr.final().t) << ',' << format_double(tr.final().supnorm) << '\n';
  }
  plap::write_field_csv(dir / "u0.csv", tr.initial().u);
  plap::write_field_csv(dir / "final.csv", tr.final().u);
  out << dir.string() << '\n';
  return kOk;
}

int cmd_bound(const fs::path& config_path, std::ostream& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const Prepared pr = prepare(cfg, config_path.parent_path());
  const auto rc = resolve_condition(pr);
  if (!rc.report.passes())
    throw HypothesisFailure(std::string(plap::to_string(rc.report.condition)) +
                            " does not hold for the configured constants");
  plap::BlowupBound b;
  try {
    b = plap::choose_M(pr.u0, pr.source, pr.p, rc.params);
  } catch (const plap::EvaluationError& e) {
    throw HypothesisFailure(e.what());
  }
  out << "J0,u0_l2sq,sigma,M,Tstar_upper,M_alt,Tstar_upper_alt\n"
      << format_double(b.J0) << ',' << format_double(b.u0_l2sq) << ','
      << format_double(b.sigma) << ',' << format_double(b.M) << ','
      << format_double(b.Tstar_upper) << ',' << format_double(b.M_alt) << ','
      << format_double(b.Tstar_upper_alt) << '\n';
  return kOk;
}

int cmd_report(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = load_config(config_path);
  const Prepared pr = prepare(cfg, config_path.parent_path());
  const auto rc = resolve_condition(pr);
  const auto tr = plap::run(pr.u0, pr.source, pr.p, cfg.solver);

  double M = std::numeric_limits<double>::quiet_NaN();
  try {
    if (rc.params.alpha > 2.0) M = plap::choose_M(pr.u0, pr.source, pr.p, rc.params).M;
  } catch (const plap::EvaluationError& e) {
    err << "note: " << e.what() << "; I and H are not defined\n";
  }
  const auto energy = plap::eval_energy_series(tr, pr.source, pr.p, rc.params.gamma);
  const auto conc = plap::eval_concavity_series(tr, pr.source, pr.p, rc.params,
                                                std::isnan(M) ? 0.0 : M);
  out << "t,supnorm,J,I,Iprime,Idoubleprime,H,residual\n";
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const double I = std::isnan(M) ? M : conc[k].I;
    const double H = std::isnan(M) ? M : conc[k].H;
    out << format_double(tr.snapshots[k].t) << ',' << format_double(tr.snapshots[k].supnorm)
        << ',' << format_double(energy[k].J) << ',' << format_double(I) << ','
        << format_double(conc[k].Iprime) << ',' << format_double(conc[k].Idoubleprime) << ','
        << format_double(H) << ','
        << format_double(energy[k].J - energy.front().J - energy[k].cumulative_ut2) << '\n';
  }
  return kOk;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const ExperimentConfig base = load_config(args.config);
  std::vector<Axis> axes;
  for (const auto& a : args.axes) axes.push_back(parse_axis(a));
  SweepOptions opt;
  opt.jobs = args.jobs;
  opt.max_runs = args.max_runs;
  opt.simulate = args.simulate;
  const auto rows = run_sweep(base, axes, opt, args.config.parent_path());
  write_sweep_csv(out, axes, rows);
  return kOk;
}

}  // namespace plapcli
