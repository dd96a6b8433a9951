#pragma once

#include "plap/grid.hpp"

namespace plap {

/// Exponent p >= 2 of the p-Laplacian div(|grad u|^{p-2} grad u).
class PExponent {
 public:
  /// Throws InvalidArgument unless p is finite and p >= 2.
  explicit PExponent(double p);
  double value() const { return p_; }
  bool is_linear() const { return p_ == 2.0; }

 private:
  double p_;
};

/// Conservative flux-form discretization of the p-Laplacian.
///
/// 1D: (q_{i+1/2} - q_{i-1/2}) / h with q = |d|^{p-2} d, d = (u_{i+1} - u_i)/h.
/// 2D: axis-wise flux divergence. The face flux magnitude uses the full face
/// gradient: the normal difference across the face and the transverse
/// derivative averaged from the four adjacent edge differences.
///
/// For p = 2 the face coefficient is skipped, so the result is exactly the
/// 3-point / 5-point Laplacian written as a difference of differences.
/// Throws InvalidArgument on non-finite input.
Field apply_plap(const Field& u, PExponent p);

/// Discrete Dirichlet energy sum_faces w_f |g_f|^{p-2} d_f^2, which is
/// sum_faces h |d_f|^p in 1D. Satisfies
/// sum_k w_k u_k (apply_plap(u))_k = -gradient_energy(u) up to rounding.
double gradient_energy(const Field& u, PExponent p);

/// sum_faces w_f |g_f(u)|^{p-2} d_f(u) d_f(v): the discrete form of
/// integral |grad u|^{p-2} grad u . grad v.
double flux_pairing(const Field& u, const Field& v, PExponent p);

/// max over faces of |g_f|^{p-2} (1 for p = 2).
double max_face_diffusivity(const Field& u, PExponent p);

/// sum_k w_k u_k v_k over interior nodes.
double weighted_dot(const Field& u, const Field& v);

}  // namespace plap
