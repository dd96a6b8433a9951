#include <cmath>

#include "plap/error.hpp"
#include "plap/solver.hpp"

namespace plap {

namespace {

constexpr std::size_t kMinSamples = 5;
constexpr double kMinGrowth = 5.0;
constexpr double kMinR2 = 0.999;

}  // namespace

TnumFit extrapolate_Tnum(const Trajectory& tr, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("extrapolate_Tnum: kappa must be positive");
  TnumFit fallback;
  if (tr.snapshots.empty()) return fallback;
  const auto& s = tr.snapshots;
  fallback.T = s.back().t;

  // Terminal run of strictly growing sup-norms within the last decade.
  const double top = s.back().supnorm;
  std::size_t first = s.size() - 1;
  while (first > 0 && s[first - 1].supnorm < s[first].supnorm &&
         s[first - 1].supnorm >= 0.1 * top)
    --first;
  const std::size_t count = s.size() - first;
  if (count < kMinSamples || !(top >= kMinGrowth * s[first].supnorm)) return fallback;

  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (std::size_t k = first; k < s.size(); ++k) {
    const double t = s[k].t - s.back().t;
    const double y = std::pow(s[k].supnorm, -kappa);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    syy += y * y;
  }
  const double n = static_cast<double>(count);
  const double vt = stt - st * st / n, vy = syy - sy * sy / n, cty = sty - st * sy / n;
  if (!(vt > 0.0) || !(vy > 0.0)) return fallback;
  const double slope = cty / vt;
  const double intercept = (sy - slope * st) / n;
  const double r2 = cty * cty / (vt * vy);
  if (!(slope < 0.0) || !(r2 >= kMinR2)) return fallback;
  const double T = s.back().t - intercept / slope;
  if (!std::isfinite(T) || T < s.back().t) return fallback;
  return {T, false};
}

}  // namespace plap
