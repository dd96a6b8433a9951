#include "plap/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "plap/error.hpp"
#include "stiffness.hpp"

namespace plap {

namespace {

constexpr double kDecayFactor = 1e-10;
constexpr double kGuard = 1e-300;

struct ClipStats {
  bool clipped = false;
  double max_clip = 0.0;
};

// Backward-Euler diffusion for p = 2. The sparsity pattern is analysed once;
// the numeric factorization is redone whenever dt changes.
class ImplicitDiffusion {
 public:
  explicit ImplicitDiffusion(const Grid& grid)
      : stiffness_(detail::assemble_stiffness(Field(grid), [](double) { return 1.0; })) {
    identity_.resize(stiffness_.rows(), stiffness_.cols());
    identity_.setIdentity();
    solver_.analyzePattern(stiffness_ + identity_);
  }

  Eigen::VectorXd solve(double dt, const Eigen::VectorXd& rhs) {
    if (dt != dt_) {
      solver_.factorize(identity_ + dt * stiffness_);
      if (solver_.info() != Eigen::Success)
        throw EvaluationError("semi-implicit step: factorization failed");
      dt_ = dt;
    }
    return solver_.solve(rhs);
  }

 private:
  detail::SparseMatrix stiffness_, identity_;
  Eigen::SimplicialLDLT<detail::SparseMatrix> solver_;
  double dt_ = -1.0;
};

Field step_impl(const Field& u, const SourceTerm& source, PExponent p, double dt,
                Scheme scheme, ImplicitDiffusion* implicit, ClipStats& clip) {
  if (!(dt >= 0.0)) throw InvalidArgument("step: dt must be nonnegative");
  if (u.blown_up()) throw InvalidArgument("step: input field is blown up");
  if (dt == 0.0) return u;

  const auto v = u.values();
  Field next(u.grid());
  auto out = next.values();

  if (scheme == Scheme::Explicit) {
    const Field lap = apply_plap(u, p);
    const auto l = lap.values();
    for (std::size_t k = 0; k < v.size(); ++k)
      out[k] = v[k] + dt * (l[k] + source.f(v[k]));
  } else {
    if (!p.is_linear())
      throw InvalidArgument("semi-implicit scheme is only available for p = 2");
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) rhs[k] = v[k] + dt * source.f(v[k]);
    if (!rhs.allFinite()) {
      next.mark_blown_up();
      return next;
    }
    std::optional<ImplicitDiffusion> local;
    if (!implicit) implicit = &local.emplace(u.grid());
    const Eigen::VectorXd x = implicit->solve(dt, rhs);
    std::copy(x.data(), x.data() + x.size(), out.begin());
  }

  for (double& x : out) {
    if (!std::isfinite(x)) {
      next.mark_blown_up();
      return next;
    }
    if (x < 0.0) {
      clip.clipped = true;
      clip.max_clip = std::max(clip.max_clip, -x);
      x = 0.0;
    }
  }
  return next;
}

double l2_squared(const Field& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x;
  return s * u.grid().interior_weight();
}

double diff_l2_squared(const Field& a, const Field& b) {
  double s = 0.0;
  const auto x = a.values(), y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return s * a.grid().interior_weight();
}

// Growth rates d log(sup)/dt over the last three recorded intervals are
// positive and increasing.
bool superlinear(const std::vector<Snapshot>& s) {
  if (s.size() < 4) return false;
  double prev = 0.0;
  for (std::size_t k = s.size() - 3; k < s.size(); ++k) {
    const double dt = s[k].t - s[k - 1].t;
    if (!(dt > 0.0) || !(s[k - 1].supnorm > 0.0)) return false;
    const double rate = std::log(s[k].supnorm / s[k - 1].supnorm) / dt;
    if (!(rate > 0.0) || rate < prev) return false;
    prev = rate;
  }
  return true;
}

}  // namespace

std::string_view to_string(EventTag tag) {
  switch (tag) {
    case EventTag::BlowUp: return "blowup";
    case EventTag::Decayed: return "decayed";
    case EventTag::Horizon: return "horizon";
    case EventTag::DtUnderflow: return "dt_underflow";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::BlownUp: return "BlownUp";
    case Outcome::Completed: return "Completed";
    case Outcome::Decayed: return "Decayed";
    case Outcome::DtUnderflow: return "DtUnderflow";
  }
  return "?";
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Explicit ? "explicit" : "semi-implicit-p2";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "explicit") return Scheme::Explicit;
  if (text == "semi-implicit-p2") return Scheme::SemiImplicitP2;
  throw ConfigError("unknown scheme '" + std::string(text) +
                    "' (expected explicit or semi-implicit-p2)");
}

void validate(const SolverConfig& c) {
  if (!(c.dt_min > 0.0) || !(c.dt_min < c.dt_init) || !(c.dt_init <= c.dt_max))
    throw InvalidArgument("solver: need 0 < dt_min < dt_init <= dt_max");
  if (!(c.safety > 0.0) || !(c.safety <= 1.0))
    throw InvalidArgument("solver: safety must lie in (0, 1]");
  if (!(c.T_max > 0.0) || !std::isfinite(c.T_max))
    throw InvalidArgument("solver: T_max must be positive and finite");
  if (!(c.sample_interval > 0.0))
    throw InvalidArgument("solver: sample_interval must be positive");
  if (!(c.U_blow > 0.0)) throw InvalidArgument("solver: U_blow must be positive");
}

Field step(const Field& u, const SourceTerm& source, PExponent p, double dt,
           Scheme scheme) {
  ClipStats clip;
  return step_impl(u, source, p, dt, scheme, nullptr, clip);
}

double adaptive_dt(const Field& u, const SourceTerm& source, PExponent p,
                   const SolverConfig& config) {
  const Grid& g = u.grid();
  double cap = config.dt_max;
  if (config.scheme == Scheme::Explicit) {
    const double dmax = max_face_diffusivity(u, p);
    if (dmax > 0.0) {
      const double h = g.h();
      cap = std::min(cap, h * h / (2.0 * g.dim() * (p.value() - 1.0) * dmax));
    }
  }
  const double sup = sup_norm(u);
  if (sup > 0.0) cap = std::min(cap, sup / (std::abs(source.f(sup)) + kGuard));
  return config.safety * cap;
}

Trajectory run(const Field& u0, const SourceTerm& source, PExponent p,
               const SolverConfig& config) {
  validate(config);
  for (double x : u0.values())
    if (!std::isfinite(x) || x < 0.0)
      throw InvalidArgument("run: initial data must be finite and nonnegative");
  const double sup0 = sup_norm(u0);
  if (!(config.U_blow > sup0))
    throw InvalidArgument("run: U_blow must exceed the initial sup-norm");
  if (config.scheme == Scheme::SemiImplicitP2 && !p.is_linear())
    throw InvalidArgument("semi-implicit scheme is only available for p = 2");

  std::optional<ImplicitDiffusion> implicit;
  if (config.scheme == Scheme::SemiImplicitP2) implicit.emplace(u0.grid());

  Trajectory tr;
  Snapshot cur{0.0, 0.0, u0, sup0, 0.0, 0.0};
  double iprime = l2_squared(u0);
  tr.snapshots.push_back(cur);

  // Near blow-up dt can drop below the resolution of t; time is summed with
  // Kahan compensation and a snapshot is only added once t has advanced.
  double t_comp = 0.0;
  auto advance = [&](double dt) {
    const double y = dt - t_comp;
    const double t = cur.t + y;
    t_comp = (t - cur.t) - y;
    cur.t = t;
  };
  auto finish = [&](EventTag tag, Outcome outcome) {
    if (tr.snapshots.back().t < cur.t)
      tr.snapshots.push_back(cur);
    else if (tr.snapshots.size() > 1)
      tr.snapshots.back() = cur;
    tr.events.push_back({cur.t, tag});
    tr.outcome = outcome;
  };

  if (sup0 == 0.0) {
    finish(EventTag::Decayed, Outcome::Decayed);
    return tr;
  }

  const double decay_level = kDecayFactor * sup0;
  const double log_step = 1.0 / config.sample_interval;
  double last_log = std::log(sup0);
  double last_iprime = iprime;

  while (true) {
    if (cur.t >= config.T_max) {
      finish(EventTag::Horizon, Outcome::Completed);
      break;
    }
    double dt = adaptive_dt(cur.u, source, p, config);
    if (tr.steps == 0) dt = std::min(dt, config.dt_init);
    if (dt < config.dt_min) {
      finish(EventTag::DtUnderflow, Outcome::DtUnderflow);
      tr.superlinear_growth = superlinear(tr.snapshots);
      break;
    }
    bool last = false;
    if (cur.t + dt >= config.T_max) {
      dt = config.T_max - cur.t;
      last = true;
    }

    ClipStats clip;
    Field next = step_impl(cur.u, source, p, dt, config.scheme,
                           implicit ? &*implicit : nullptr, clip);
    if (next.blown_up()) {
      finish(EventTag::BlowUp, Outcome::BlownUp);
      break;
    }
    if (clip.clipped) {
      ++tr.clipped_steps;
      tr.max_clip = std::max(tr.max_clip, clip.max_clip);
    }
    const double next_iprime = l2_squared(next);
    cur.cumulative_ut2 += diff_l2_squared(next, cur.u) / dt;
    cur.cumulative_u2 += 0.5 * dt * (iprime + next_iprime);
    if (last)
      cur.t = config.T_max;
    else
      advance(dt);
    cur.dt = dt;
    cur.u = std::move(next);
    cur.supnorm = sup_norm(cur.u);
    iprime = next_iprime;
    ++tr.steps;

    if (cur.supnorm >= config.U_blow) {
      finish(EventTag::BlowUp, Outcome::BlownUp);
      break;
    }
    if (cur.supnorm <= decay_level) {
      finish(EventTag::Decayed, Outcome::Decayed);
      break;
    }
    const double lg = std::log(cur.supnorm);
    if ((std::abs(lg - last_log) >= log_step ||
         std::abs(iprime - last_iprime) > 0.01 * last_iprime) &&
        cur.t > tr.snapshots.back().t) {
      tr.snapshots.push_back(cur);
      last_log = lg;
      last_iprime = iprime;
    }
  }

  if (tr.outcome == Outcome::BlownUp) {
    const auto q = source.leading_exponent();
    const double kappa = q && *q > 1.0 ? *q - 1.0 : 1.0;
    const TnumFit fit = extrapolate_Tnum(tr, kappa);
    tr.T_num = fit.T;
    tr.T_num_low_confidence = fit.low_confidence;
  }
  return tr;
}

}  // namespace plap
