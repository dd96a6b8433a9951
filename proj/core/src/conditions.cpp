#include "plap/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "plap/error.hpp"
#include "plap/format.hpp"

namespace plap {

namespace {

constexpr double kRelTol = 1e-12;

const double kEpsGrid[] = {0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
const double kGammaGrid[] = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0};

struct Monomial {
  double exponent;
  double coeff;
  double magnitude;  // sum of |contributions|, for the zero test
};

// Residual u f + beta u^p + gamma - alpha F as merged monomials.
std::vector<Monomial> residual_monomials(const SourceTerm& source,
                                         const ConditionParams& prm) {
  std::vector<Monomial> out;
  auto add = [&out](double e, double c) {
    for (auto& m : out)
      if (std::abs(m.exponent - e) <= 1e-12 * std::max(1.0, std::abs(e))) {
        m.coeff += c;
        m.magnitude += std::abs(c);
        return;
      }
    out.push_back({e, c, std::abs(c)});
  };
  for (const auto& t : source.power_terms()) {
    const double e = t.exponent + 1.0;
    add(e, t.coeff);
    add(e, -prm.alpha * t.coeff / e);
  }
  if (prm.beta != 0.0) add(prm.p, prm.beta);
  if (prm.gamma != 0.0) add(0.0, prm.gamma);
  std::sort(out.begin(), out.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponent < b.exponent; });
  // The u^p coefficient is only known up to the eigenvalue uncertainty
  // carried by a beta at its bound; differences inside that band are ties.
  const double band = std::max(0.0, prm.epsilon()) * prm.lambda_margin / prm.p;
  std::erase_if(out, [&](const Monomial& m) {
    double tol = kRelTol * m.magnitude;
    if (std::abs(m.exponent - prm.p) <= 1e-12 * prm.p) tol += band * (1.0 + kRelTol);
    return std::abs(m.coeff) <= tol;
  });
  return out;
}

struct GridScan {
  double min_rel = std::numeric_limits<double>::infinity();
  double worst_u = 0.0;
};

GridScan scan_residual(const SourceTerm& source, const ConditionParams& prm,
                       const std::vector<double>& us) {
  GridScan s;
  for (double u : us) {
    const double uf = u * source.f(u);
    const double bu = prm.beta * std::pow(u, prm.p);
    const double aF = prm.alpha * source.F(u);
    const double r = uf + bu + prm.gamma - aF;
    const double scale = std::abs(uf) + bu + prm.gamma + std::abs(aF);
    const double rel = scale > 0.0 ? r / scale : 0.0;
    if (rel < s.min_rel) {
      s.min_rel = rel;
      s.worst_u = u;
    }
  }
  return s;
}

void require_range(URange range, int samples) {
  if (!(range.lo > 0.0) || !(range.hi > range.lo))
    throw InvalidArgument("u range must satisfy 0 < lo < hi");
  if (samples < 1000)
    throw InvalidArgument("condition checks need at least 1000 samples");
}

ConditionParams with(double p, double alpha, double beta, double gamma,
                     double lambda, double margin) {
  ConditionParams prm;
  prm.p = p;
  prm.alpha = alpha;
  prm.beta = beta;
  prm.gamma = gamma;
  prm.lambda1p = lambda;
  prm.lambda_margin = margin;
  return prm;
}

ConditionParams candidate(ConditionTag tag, double p, double eps, double gamma,
                          double lambda, double margin) {
  switch (tag) {
    case ConditionTag::A:
      return with(p, p + eps, 0.0, 0.0, lambda, margin);
    case ConditionTag::B:
      return with(p, p + eps, 0.0, gamma, lambda, margin);
    case ConditionTag::C: {
      ConditionParams prm = with(p, p + eps, 0.0, gamma, lambda, margin);
      prm.beta = std::max(0.0, prm.beta_bound());
      return prm;
    }
    case ConditionTag::CPrime:
      return with(p, p, 0.0, gamma, lambda, margin);
  }
  return {};
}

// Best report over a parameter search: the first passing one, otherwise the
// one with the largest residual_min.
struct Search {
  std::optional<ConditionReport> best;
  bool found = false;

  void offer(const ConditionReport& r) {
    if (found) return;
    if (r.passes()) {
      best = r;
      found = true;
    } else if (!best || r.residual_min > best->residual_min) {
      best = r;
    }
  }
};

}  // namespace

std::string_view to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::A: return "A_p";
    case ConditionTag::B: return "B_p";
    case ConditionTag::C: return "C_p";
    case ConditionTag::CPrime: return "C_p'";
  }
  return "?";
}

ConditionTag parse_condition_tag(std::string_view t) {
  if (t == "A" || t == "Ap" || t == "A_p") return ConditionTag::A;
  if (t == "B" || t == "Bp" || t == "B_p") return ConditionTag::B;
  if (t == "C" || t == "Cp" || t == "C_p") return ConditionTag::C;
  if (t == "Cprime" || t == "Cp'" || t == "C_p'" || t == "C'")
    return ConditionTag::CPrime;
  throw ConfigError("unknown condition '" + std::string(t) +
                    "' (expected A, B, C or Cprime)");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::GridOnly: return "grid-only";
  }
  return "?";
}

std::string_view to_string(Certificate c) {
  return c == Certificate::ExactAnalytic ? "exact-analytic" : "grid-sampled";
}

void validate_params(const ConditionParams& prm, ConditionTag tag) {
  auto fail = [&](const std::string& why) {
    throw InvalidArgument(std::string(to_string(tag)) + ": " + why);
  };
  if (!(prm.p >= 2.0)) fail("p must be >= 2");
  if (!(prm.beta >= 0.0) || !(prm.gamma >= 0.0))
    fail("beta and gamma must be nonnegative");
  if (!std::isfinite(prm.alpha) || !std::isfinite(prm.beta) ||
      !std::isfinite(prm.gamma))
    fail("constants must be finite");
  switch (tag) {
    case ConditionTag::A:
      if (!(prm.alpha > prm.p)) fail("alpha must exceed p");
      if (prm.beta != 0.0 || prm.gamma != 0.0) fail("requires beta = gamma = 0");
      break;
    case ConditionTag::B:
      if (!(prm.alpha > prm.p)) fail("alpha must exceed p");
      if (prm.beta != 0.0) fail("requires beta = 0");
      break;
    case ConditionTag::C: {
      if (!(prm.alpha > prm.p)) fail("alpha must exceed p");
      if (!(prm.lambda1p > 0.0)) fail("needs the first eigenvalue lambda_1p > 0");
      if (!(prm.lambda_margin >= 0.0) || !(prm.lambda_margin < prm.lambda1p))
        fail("lambda margin must lie in [0, lambda_1p)");
      const double bound = prm.beta_bound();
      if (prm.beta > bound * (1.0 + kRelTol))
        fail("beta = " + format_short(prm.beta) +
             " exceeds the admissible bound (alpha-p)(lambda-margin)/p = " +
             format_short(bound));
      break;
    }
    case ConditionTag::CPrime:
      if (prm.alpha != prm.p) fail("requires alpha = p");
      if (prm.beta != 0.0) fail("requires beta = 0");
      break;
  }
}

std::vector<double> log_grid(URange range, int samples) {
  std::vector<double> us(static_cast<std::size_t>(samples));
  const double a = std::log(range.lo), b = std::log(range.hi);
  for (int k = 0; k < samples; ++k)
    us[k] = std::exp(a + (b - a) * k / (samples - 1));
  us.front() = range.lo;
  us.back() = range.hi;
  return us;
}

ConditionReport check_condition(const SourceTerm& source,
                                const ConditionParams& params, ConditionTag tag,
                                URange range, int samples) {
  validate_params(params, tag);
  require_range(range, samples);

  ConditionReport rep;
  rep.condition = tag;
  rep.u_range = range;
  rep.samples = samples;
  rep.params = params;

  const GridScan scan = scan_residual(source, params, log_grid(range, samples));
  rep.residual_min = scan.min_rel;
  rep.worst_u = scan.worst_u;
  const bool grid_ok = scan.min_rel >= -kRelTol;

  if (source.is_power_family()) {
    const auto mono = residual_monomials(source, params);
    const bool all_nonneg = std::all_of(mono.begin(), mono.end(),
                                        [](const Monomial& m) { return m.coeff >= 0.0; });
    if (all_nonneg) {
      rep.satisfied = Verdict::Yes;
      rep.certificate = Certificate::ExactAnalytic;
    } else if (mono.back().coeff < 0.0 || mono.front().coeff < 0.0) {
      rep.satisfied = Verdict::No;
      rep.certificate = Certificate::ExactAnalytic;
      if (grid_ok) rep.worst_u = mono.back().coeff < 0.0 ? range.hi : range.lo;
    } else {
      rep.satisfied = grid_ok ? Verdict::GridOnly : Verdict::No;
      rep.certificate = Certificate::GridSampled;
    }
  } else {
    rep.satisfied = grid_ok ? Verdict::GridOnly : Verdict::No;
    rep.certificate = Certificate::GridSampled;
  }

  if (tag == ConditionTag::C) {
    const double bound = params.beta_bound();
    const double tie = 1e-9 + params.lambda_margin / params.lambda1p;
    rep.boundary_case = bound > 0.0 && params.beta >= bound * (1.0 - kRelTol) &&
                        std::abs(scan.min_rel) <= tie;
  }
  return rep;
}

MonotoneReport monotone_characterization(const SourceTerm& source,
                                         const ConditionParams& params,
                                         URange range, int samples) {
  const double eps = params.epsilon();
  if (!(eps > 0.0))
    throw InvalidArgument("monotone characterization needs eps = alpha - p > 0");
  require_range(range, samples);

  const ConditionTag tag = params.beta > 0.0 ? ConditionTag::C
                           : params.gamma > 0.0 ? ConditionTag::B
                                                : ConditionTag::A;
  const ConditionReport check = check_condition(source, params, tag, range, samples);

  const auto us = log_grid(range, samples);
  const double a = params.alpha;
  double prev_g = 0.0, prev_scale = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  double worst_u = us.front();
  for (std::size_t k = 0; k < us.size(); ++k) {
    const double u = us[k];
    const double t1 = source.F(u) / std::pow(u, a);
    const double t2 = params.gamma / a * std::pow(u, -a);
    const double t3 = params.beta / eps * std::pow(u, -eps);
    const double g = t1 - t2 - t3;
    const double scale = std::abs(t1) + t2 + t3;
    if (k > 0) {
      const double s = std::max(scale, prev_scale);
      const double rel = s > 0.0 ? (g - prev_g) / s : 0.0;
      if (rel < worst) {
        worst = rel;
        worst_u = u;
      }
    }
    prev_g = g;
    prev_scale = scale;
  }

  MonotoneReport out;
  out.report.condition = tag;
  out.report.u_range = range;
  out.report.samples = samples;
  out.report.params = params;
  out.report.residual_min = worst;
  out.report.worst_u = worst_u;
  out.report.certificate = Certificate::GridSampled;
  out.report.satisfied = worst >= -kRelTol ? Verdict::GridOnly : Verdict::No;
  out.check_verdict = check.satisfied;
  out.agrees = out.report.passes() == check.passes();
  return out;
}

HierarchyReport hierarchy_check(const SourceTerm& source, double p,
                                double lambda1p, URange range,
                                double lambda_margin) {
  Search a, b, c;
  for (double eps : kEpsGrid) {
    a.offer(check_condition(source, candidate(ConditionTag::A, p, eps, 0.0, lambda1p, lambda_margin),
                            ConditionTag::A, range));
    for (double gamma : kGammaGrid) {
      b.offer(check_condition(source, candidate(ConditionTag::B, p, eps, gamma, lambda1p, lambda_margin),
                              ConditionTag::B, range));
      c.offer(check_condition(source, candidate(ConditionTag::C, p, eps, gamma, lambda1p, lambda_margin),
                              ConditionTag::C, range));
    }
  }
  HierarchyReport h;
  h.a = *a.best;
  h.b = *b.best;
  h.c = *c.best;
  h.a_satisfiable = a.found;
  h.b_satisfiable = b.found;
  h.c_satisfiable = c.found;
  h.chain_ok = (!h.a_satisfiable || h.b_satisfiable) &&
               (!h.b_satisfiable || h.c_satisfiable);
  return h;
}

std::optional<ConditionReport> find_admissible(const SourceTerm& source,
                                               ConditionTag tag, double p,
                                               double lambda1p,
                                               double lambda_margin,
                                               URange range) {
  for (double gamma : kGammaGrid) {
    if (tag == ConditionTag::A && gamma != 0.0) break;
    if (tag == ConditionTag::CPrime) {
      const auto prm = candidate(tag, p, 0.0, gamma, lambda1p, lambda_margin);
      const auto rep = check_condition(source, prm, tag, range);
      if (rep.passes()) return rep;
      continue;
    }
    std::optional<ConditionReport> best;
    for (double eps : kEpsGrid) {
      const auto prm = candidate(tag, p, eps, gamma, lambda1p, lambda_margin);
      const auto rep = check_condition(source, prm, tag, range);
      if (rep.passes()) best = rep;  // grid ascends, so the last is the largest alpha
    }
    if (best) return best;
  }
  return std::nullopt;
}

double growth_envelope(const SourceTerm& source, double p, double eps, double m,
                       double u_max, int samples) {
  if (!(m > 0.0) || !(u_max > m))
    throw InvalidArgument("growth_envelope: need 0 < m < u_max");
  const auto ratio = [&](double t) {
    const double u = std::exp(t);
    return source.f(u) / std::pow(u, p - 1.0 + eps);
  };
  const auto us = log_grid({m, u_max}, samples);
  std::size_t best = 0;
  double mu = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < us.size(); ++k) {
    const double r = ratio(std::log(us[k]));
    if (r < mu) {
      mu = r;
      best = k;
    }
  }
  // Golden-section refinement between the neighbours of the best sample.
  double a = std::log(us[best > 0 ? best - 1 : 0]);
  double b = std::log(us[std::min(best + 1, us.size() - 1)]);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = ratio(c), fd = ratio(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = ratio(d);
    }
  }
  return std::min({mu, fc, fd});
}

std::optional<Growth> extract_growth(const SourceTerm& source,
                                     const ConditionParams& params,
                                     double lambda_lower, URange range,
                                     int samples) {
  if (!(lambda_lower > params.lambda1p)) return std::nullopt;
  const auto us = log_grid(range, samples);
  for (double u : us) {
    const double lower = lambda_lower * std::pow(u, params.p - 1.0);
    if (source.f(u) < lower * (1.0 - kRelTol)) return std::nullopt;
  }
  if (!check_condition(source, params, ConditionTag::C, range, samples).passes())
    return std::nullopt;

  const double eps = params.epsilon();
  const double a = params.beta / eps;
  const double b = params.gamma / params.alpha;
  double m = 0.0;
  for (double u : us) {
    if (u <= 1.0) continue;
    const double h = (source.F(u) - a * std::pow(u, params.p) - b) /
                     std::pow(u, params.alpha);
    if (h > 0.0) {
      m = u;
      break;
    }
  }
  if (m == 0.0 || !(m < range.hi)) return std::nullopt;
  Growth g;
  g.m = m;
  g.epsilon = eps;
  g.mu = growth_envelope(source, params.p, eps, m, range.hi, samples);
  if (!(g.mu > 0.0)) return std::nullopt;
  return g;
}

}  // namespace plap
