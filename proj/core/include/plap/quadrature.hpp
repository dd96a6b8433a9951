#pragma once

#include <functional>

namespace plap {

/// Adaptive Simpson quadrature of f on [a, b] to a relative tolerance
/// (absolute floor `abs_tol`). Recursion depth is capped at `max_depth`.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-300, int max_depth = 50);

}  // namespace plap
