#pragma once

#include <optional>

#include "plap/plap_operator.hpp"
#include "plap/sources.hpp"
#include "plap/trajectory.hpp"

namespace plap {

enum class Scheme { Explicit, SemiImplicitP2 };

std::string_view to_string(Scheme scheme);
/// "explicit" or "semi-implicit-p2"; throws ConfigError otherwise.
Scheme parse_scheme(std::string_view text);

struct SolverConfig {
  double dt_init = 1e-4;
  double dt_min = 1e-30;
  double dt_max = 1e-2;
  double safety = 0.5;
  double U_blow = 1e6;
  double T_max = 1.0;
  /// Snapshots per unit change of log sup-norm.
  double sample_interval = 10.0;
  Scheme scheme = Scheme::Explicit;
};

/// Throws InvalidArgument unless 0 < dt_min < dt_init <= dt_max,
/// 0 < safety <= 1, T_max > 0 and sample_interval > 0.
void validate(const SolverConfig& config);

/// One step of u_t = Delta_p u + f(u).
/// Explicit: u + dt (apply_plap(u) + f(u)), negatives clipped to 0.
/// SemiImplicitP2 (p = 2 only): (I - dt Delta_h) u' = u + dt f(u).
/// Non-finite results mark the returned field blown up. Throws
/// InvalidArgument for dt < 0 or a blown-up input.
Field step(const Field& u, const SourceTerm& source, PExponent p, double dt,
           Scheme scheme = Scheme::Explicit);

/// safety * min(h^2 / (2 dim (p-1) Dmax), u_sup / (|f(u_sup)| + 1e-300),
/// dt_max), with Dmax = max_face_diffusivity(u). The diffusion cap is dropped
/// for SemiImplicitP2 and the reaction cap for a zero field.
double adaptive_dt(const Field& u, const SourceTerm& source, PExponent p,
                   const SolverConfig& config);

/// Integrates from u0 until sup-norm >= U_blow (BlownUp), sup-norm
/// <= 1e-10 sup(u0) (Decayed), t >= T_max (Completed) or the step size falls
/// below dt_min (DtUnderflow).
///
/// Snapshots are taken at t = 0, whenever log sup-norm moved by
/// 1/sample_interval or int u^2 by 1% since the last snapshot, and at the
/// end. Throws InvalidArgument for negative or non-finite u0 or
/// U_blow <= sup(u0).
Trajectory run(const Field& u0, const SourceTerm& source, PExponent p,
               const SolverConfig& config);

struct TnumFit {
  double T = 0.0;
  bool low_confidence = true;
};

/// Fits sup^{-kappa} = C (T - t) by least squares over the snapshots in the
/// last decade of sup-norm growth and returns T. kappa = q - 1 for a leading
/// power u^q (1 for the classic 1/sup fit). Falls back to the last recorded t
/// with low_confidence set if fewer than 5 growing samples are available or
/// the fit is poor.
TnumFit extrapolate_Tnum(const Trajectory& trajectory, double kappa = 1.0);

}  // namespace plap
