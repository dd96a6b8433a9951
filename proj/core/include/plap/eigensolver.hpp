#pragma once

#include "plap/grid.hpp"
#include "plap/plap_operator.hpp"

namespace plap {

/// How the returned eigenfunction is scaled.
enum class Normalization {
  SupNorm,    ///< max phi = 1 (initial data for the solver)
  PowerMass,  ///< sum_k w_k phi_k^p = |Omega|
};

struct EigenOptions {
  /// Target for the relative eigen-residual (see eigen_residual).
  double tol = 1e-8;
  int max_iter = 100000;
  Normalization normalization = Normalization::SupNorm;
};

/// First Dirichlet eigenpair of the discrete p-Laplacian.
struct EigenResult {
  double lambda = 0.0;
  Field phi;
  /// sup|apply_plap(phi) + lambda |phi|^{p-2} phi| / (lambda sup(phi)^{p-1}).
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// gradient_energy(u) / integrate_power(u, p). Throws InvalidArgument for a
/// zero field.
double rayleigh_quotient(const Field& u, PExponent p);

/// Relative residual of the eigen-equation -Delta_p phi = lambda phi^{p-1}.
double eigen_residual(const Field& phi, double lambda, PExponent p);

/// Minimizes the discrete Rayleigh quotient over positive grid functions.
///
/// p = 2: inverse power iteration on the 3-/5-point Dirichlet Laplacian.
/// p > 2: projected descent on the Rayleigh quotient, warm-started from the
/// p = 2 eigenfunction. Search directions are preconditioned with the
/// linearization of the p-Laplacian at the current iterate, negative entries
/// are clipped after every step, and an Armijo backtracking line search
/// enforces monotone decrease of the quotient.
///
/// On non-convergence within max_iter the best iterate is returned with
/// converged = false.
EigenResult first_eigenpair(const Grid& grid, PExponent p,
                            const EigenOptions& options = {});

/// Rescales phi to the requested normalization.
Field normalize(const Field& phi, PExponent p, Normalization normalization);

}  // namespace plap
