#include "plap/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <vector>

#include "stiffness.hpp"

namespace plap {

namespace {

using detail::SparseMatrix;
using detail::Triplet;
using detail::assemble_stiffness;
using detail::from_vector;
using detail::view;

constexpr double kEps = 2.220446049250313e-16;

double face_gradient_power(double g2, double exponent) {
  if (g2 == 0.0) return 0.0;
  return std::pow(g2, 0.5 * exponent);
}

Field clip_and_scale(Field u) {
  for (double& v : u.values()) v = std::max(v, 0.0);
  const double s = sup_norm(u);
  if (s > 0.0) u = u.scaled(1.0 / s);
  return u;
}

Field positive_start(const Grid& g) {
  // Product of parabolas: positive inside, zero on the boundary.
  const double lx = g.length(0), ly = g.length(1);
  if (g.dim() == 1)
    return Field::sample(g, [lx](double x) { return x * (lx - x); });
  return Field::sample(
      g, [lx, ly](double x, double y) { return x * (lx - x) * y * (ly - y); });
}

EigenResult inverse_iteration(const Grid& g, const EigenOptions& opt) {
  const PExponent p2(2.0);
  Field unit(g);
  const SparseMatrix k = assemble_stiffness(unit, [](double) { return 1.0; });
  Eigen::SimplicialLDLT<SparseMatrix> solver(k);
  if (solver.info() != Eigen::Success)
    throw Error("inverse iteration: Laplacian factorization failed");

  EigenResult res{0.0, clip_and_scale(positive_start(g)), 0.0, 0, false};
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::VectorXd next = solver.solve(view(res.phi));
    res.phi = clip_and_scale(from_vector(g, next));
    res.lambda = rayleigh_quotient(res.phi, p2);
    res.residual = eigen_residual(res.phi, res.lambda, p2);
    res.iterations = it;
    if (res.residual <= opt.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

// -Delta_p u - R u^{p-1}, the (scaled) gradient of the Rayleigh quotient.
Field quotient_gradient(const Field& u, double r, PExponent p) {
  Field out = apply_plap(u, p);
  const double e = p.value() - 1.0;
  auto o = out.values();
  const auto v = u.values();
  for (std::size_t k = 0; k < o.size(); ++k)
    o[k] = -o[k] - r * std::copysign(std::pow(std::abs(v[k]), e), v[k]);
  return out;
}

// Exact Jacobian of apply_plap. Each face flux is q = |g|^{p-2} d with
// |g|^2 = d^2 + t^2, so dq/dd = |g|^{p-4} (|g|^2 + (p-2) d^2) and
// dq/dt = (p-2) |g|^{p-4} d t. In 2D t is a four-point average along the face.
void plap_jacobian(const Field& u, double pv, std::vector<Triplet>& trips) {
  const Grid& g = u.grid();
  const int n = g.n();
  auto flat = [&](int i, int j) -> long {
    return g.is_boundary(i, j) ? -1 : static_cast<long>(g.interior_index(i, j));
  };
  auto partials = [pv](double d, double t, double& qd, double& qt) {
    const double g2 = d * d + t * t;
    if (g2 == 0.0) {
      qd = qt = 0.0;
      return;
    }
    const double s = std::pow(g2, 0.5 * (pv - 4.0));
    qd = s * (g2 + (pv - 2.0) * d * d);
    qt = (pv - 2.0) * s * d * t;
  };
  // Face between nodes l and r; o[l] += q/h, o[r] -= q/h.
  auto add = [&](long l, long r, double h, long m, double dq) {
    if (m < 0 || dq == 0.0) return;
    if (l >= 0) trips.emplace_back(l, m, dq / h);
    if (r >= 0) trips.emplace_back(r, m, -dq / h);
  };
  if (g.dim() == 1) {
    const double h = g.spacing(0);
    for (int i = 0; i <= n; ++i) {
      double qd, qt;
      partials((u.at(i + 1) - u.at(i)) / h, 0.0, qd, qt);
      const long l = flat(i, 1), r = flat(i + 1, 1);
      add(l, r, h, r, qd / h);
      add(l, r, h, l, -qd / h);
    }
    return;
  }
  const double hx = g.spacing(0), hy = g.spacing(1);
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double d = (u.at(i + 1, j) - u.at(i, j)) / hx;
      const double t = (u.at(i, j + 1) - u.at(i, j - 1) + u.at(i + 1, j + 1) -
                        u.at(i + 1, j - 1)) / (4.0 * hy);
      double qd, qt;
      partials(d, t, qd, qt);
      const long l = flat(i, j), r = flat(i + 1, j);
      add(l, r, hx, r, qd / hx);
      add(l, r, hx, l, -qd / hx);
      const double dt = qt / (4.0 * hy);
      add(l, r, hx, flat(i, j + 1), dt);
      add(l, r, hx, flat(i + 1, j + 1), dt);
      add(l, r, hx, flat(i, j - 1), -dt);
      add(l, r, hx, flat(i + 1, j - 1), -dt);
    }
  for (int j = 0; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      const double d = (u.at(i, j + 1) - u.at(i, j)) / hy;
      const double t = (u.at(i + 1, j) - u.at(i - 1, j) + u.at(i + 1, j + 1) -
                        u.at(i - 1, j + 1)) / (4.0 * hx);
      double qd, qt;
      partials(d, t, qd, qt);
      const long l = flat(i, j), r = flat(i, j + 1);
      add(l, r, hy, r, qd / hy);
      add(l, r, hy, l, -qd / hy);
      const double dt = qt / (4.0 * hx);
      add(l, r, hy, flat(i + 1, j), dt);
      add(l, r, hy, flat(i + 1, j + 1), dt);
      add(l, r, hy, flat(i - 1, j), -dt);
      add(l, r, hy, flat(i - 1, j + 1), -dt);
    }
}

// Damped Newton step on apply_plap(u) + lambda u^{p-1} = 0 with the bordering
// row <u^{p-1}, du> = 0. Accepted only if the residual drops.
bool newton_step(EigenResult& res, PExponent p) {
  const Field& u = res.phi;
  const Grid& g = u.grid();
  const double pv = p.value();
  const auto m = static_cast<Eigen::Index>(u.size());
  const auto v = u.values();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(m) * (g.dim() == 1 ? 4 : 12));
  plap_jacobian(u, pv, trips);
  const Field lap = apply_plap(u, p);
  Eigen::VectorXd rhs(m + 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double up = std::pow(v[k], pv - 1.0);
    trips.emplace_back(k, k, res.lambda * (pv - 1.0) * std::pow(v[k], pv - 2.0));
    trips.emplace_back(k, m, up);
    trips.emplace_back(m, k, up);
    rhs[k] = -(lap.values()[k] + res.lambda * up);
  }
  rhs[m] = 0.0;
  SparseMatrix jac(m + 1, m + 1);
  jac.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(jac);
  if (lu.info() != Eigen::Success) return false;
  const Eigen::VectorXd delta = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !delta.allFinite()) return false;
  const auto du = delta.head(m);
  for (double tau = 1.0; tau >= 1.0 / 64.0; tau *= 0.5) {
    Eigen::VectorXd trial = view(u) + tau * du;
    Field cand = clip_and_scale(from_vector(g, trial));
    if (sup_norm(cand) == 0.0) continue;
    const double rc = rayleigh_quotient(cand, p);
    const double cr = eigen_residual(cand, rc, p);
    if (cr < res.residual) {
      res.phi = std::move(cand);
      res.lambda = rc;
      res.residual = cr;
      return true;
    }
  }
  return false;
}

EigenResult descent(const Grid& g, PExponent p, const EigenOptions& opt) {
  EigenOptions warm = opt;
  warm.tol = std::max(opt.tol, 1e-6);
  EigenResult res = inverse_iteration(g, warm);
  res.converged = false;
  res.lambda = rayleigh_quotient(res.phi, p);
  res.residual = eigen_residual(res.phi, res.lambda, p);

  const double pv = p.value();
  const double w = g.interior_weight();
  double step = 1.0;
  int stalls = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    res.iterations = it;
    if (res.residual <= opt.tol) {
      res.converged = true;
      break;
    }
    if (newton_step(res, p)) {
      stalls = 0;
      continue;
    }
    const double r = res.lambda;
    const double mass = integrate_power(res.phi, pv);
    const Field grad = quotient_gradient(res.phi, r, p);

    // Linearized p-Laplacian (p-1)|g|^{p-2}, floored to stay definite.
    const double floor = 1e-8 * (pv - 1.0) * max_face_diffusivity(res.phi, p);
    const SparseMatrix k = assemble_stiffness(res.phi, [&](double g2) {
      return std::max((pv - 1.0) * face_gradient_power(g2, pv - 2.0), floor);
    });
    Eigen::SimplicialLDLT<SparseMatrix> solver(k);
    if (solver.info() != Eigen::Success)
      throw Error("eigen descent: preconditioner factorization failed");
    const Eigen::VectorXd dir = -solver.solve(view(grad));

    // dR[dir] = (p w / mass) <grad, dir>
    const double slope = pv * w / mass * view(grad).dot(dir);
    if (!(slope < 0.0)) break;

    bool accepted = false;
    // tau = 1 is the linearized inverse-iteration step; larger steps leave
    // the high-frequency error undamped.
    double tau = std::min(2.0 * step, 1.0);
    for (int bt = 0; bt < 60; ++bt, tau *= 0.5) {
      Eigen::VectorXd trial = view(res.phi) + tau * dir;
      Field cand = clip_and_scale(from_vector(g, trial));
      if (sup_norm(cand) == 0.0) continue;
      const double rc = rayleigh_quotient(cand, p);
      const bool armijo = rc <= r + 1e-4 * tau * slope;
      // Near the minimizer the decrease drops below the rounding level of
      // the quotient; accept flat steps that still shrink the residual.
      double cand_residual = 0.0;
      bool flat = false;
      if (!armijo && rc <= r * (1.0 + 64.0 * kEps)) {
        cand_residual = eigen_residual(cand, rc, p);
        flat = cand_residual < res.residual;
      }
      if (armijo || flat) {
        const double drop = (r - rc) / r;
        res.phi = std::move(cand);
        res.lambda = rc;
        res.residual = flat ? cand_residual : eigen_residual(res.phi, rc, p);
        step = tau;
        accepted = true;
        stalls = (!flat && drop < 1e-15) ? stalls + 1 : 0;
        break;
      }
    }
    if (!accepted || stalls > 20) break;
  }
  return res;
}

}  // namespace

double rayleigh_quotient(const Field& u, PExponent p) {
  const double mass = integrate_power(u, p.value());
  if (!(mass > 0.0))
    throw InvalidArgument("rayleigh_quotient: zero field has no quotient");
  return gradient_energy(u, p) / mass;
}

double eigen_residual(const Field& phi, double lambda, PExponent p) {
  const Field lap = apply_plap(phi, p);
  const double e = p.value() - 1.0;
  double worst = 0.0;
  const auto v = phi.values();
  const auto l = lap.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double rhs = lambda * std::copysign(std::pow(std::abs(v[k]), e), v[k]);
    worst = std::max(worst, std::abs(l[k] + rhs));
  }
  const double scale = lambda * std::pow(sup_norm(phi), e);
  return scale > 0.0 ? worst / scale : worst;
}

Field normalize(const Field& phi, PExponent p, Normalization normalization) {
  if (normalization == Normalization::SupNorm) {
    const double s = sup_norm(phi);
    return s > 0.0 ? phi.scaled(1.0 / s) : phi;
  }
  const double mass = integrate_power(phi, p.value());
  if (!(mass > 0.0)) return phi;
  return phi.scaled(std::pow(phi.grid().measure() / mass, 1.0 / p.value()));
}

EigenResult first_eigenpair(const Grid& grid, PExponent p,
                            const EigenOptions& options) {
  if (!(options.tol > 0.0))
    throw InvalidArgument("first_eigenpair: tol must be positive");
  if (options.max_iter < 1)
    throw InvalidArgument("first_eigenpair: max_iter must be >= 1");
  EigenResult res =
      p.is_linear() ? inverse_iteration(grid, options) : descent(grid, p, options);
  res.phi = normalize(res.phi, p, options.normalization);
  res.lambda = rayleigh_quotient(res.phi, p);
  res.residual = eigen_residual(res.phi, res.lambda, p);
  return res;
}

}  // namespace plap
