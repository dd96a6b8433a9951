#include "plap/plap_operator.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace plap {

PExponent::PExponent(double p) : p_(p) {
  if (!std::isfinite(p) || p < 2.0)
    throw InvalidArgument("p-Laplacian exponent must satisfy p >= 2, got " +
                          std::to_string(p));
}

namespace {

void require_finite(const Field& u) {
  if (!u.all_finite())
    throw InvalidArgument("p-Laplacian applied to a non-finite field");
}

// |g|^{p-2} for a face gradient of squared magnitude g2.
inline double face_coefficient(double g2, double p) {
  if (p == 2.0) return 1.0;
  if (g2 == 0.0) return 0.0;
  if (p == 3.0) return std::sqrt(g2);
  if (p == 4.0) return g2;
  return std::pow(g2, 0.5 * (p - 2.0));
}

// Visits every face once: fn(weight, coefficient, d, left, right), where
// left/right are flat interior indices (-1 for a boundary node) and d is the
// normal difference quotient. In 2D the axis of the face is implied by the
// node pair.
template <class Fn>
void for_each_face(const Field& u, double p, Fn&& fn) {
  const Grid& g = u.grid();
  const int n = g.n();
  if (g.dim() == 1) {
    const double h = g.spacing(0);
    const double w = h;
    for (int i = 0; i <= n; ++i) {
      const double d = (u.at(i + 1) - u.at(i)) / h;
      const double c = face_coefficient(d * d, p);
      const long left = i >= 1 ? i - 1 : -1;
      const long right = i + 1 <= n ? i : -1;
      fn(w, c, d, left, right);
    }
    return;
  }
  const double hx = g.spacing(0), hy = g.spacing(1);
  const double w = hx * hy;
  auto flat = [&](int i, int j) -> long {
    return g.is_boundary(i, j) ? -1 : static_cast<long>(g.interior_index(i, j));
  };
  // x-faces between (i, j) and (i+1, j).
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double d = (u.at(i + 1, j) - u.at(i, j)) / hx;
      double c = 1.0;
      if (p != 2.0) {
        const double t = (u.at(i, j + 1) - u.at(i, j - 1) + u.at(i + 1, j + 1) -
                          u.at(i + 1, j - 1)) / (4.0 * hy);
        c = face_coefficient(d * d + t * t, p);
      }
      fn(w, c, d, flat(i, j), flat(i + 1, j));
    }
  }
  // y-faces between (i, j) and (i, j+1).
  for (int j = 0; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const double d = (u.at(i, j + 1) - u.at(i, j)) / hy;
      double c = 1.0;
      if (p != 2.0) {
        const double t = (u.at(i + 1, j) - u.at(i - 1, j) + u.at(i + 1, j + 1) -
                          u.at(i - 1, j + 1)) / (4.0 * hx);
        c = face_coefficient(d * d + t * t, p);
      }
      fn(w, c, d, flat(i, j), flat(i, j + 1));
    }
  }
}

Field apply_plap_1d(const Field& u, double p) {
  const Grid& g = u.grid();
  const int n = g.n();
  const double h = g.spacing(0);
  const auto v = u.values();
  Field out(g);
  auto o = out.values();
  double q_left;
  {
    const double d = v[0] / h;
    q_left = p == 2.0 ? d : face_coefficient(d * d, p) * d;
  }
  for (int k = 0; k < n; ++k) {
    const double next = k + 1 < n ? v[k + 1] : 0.0;
    const double d = (next - v[k]) / h;
    const double q_right = p == 2.0 ? d : face_coefficient(d * d, p) * d;
    o[k] = (q_right - q_left) / h;
    q_left = q_right;
  }
  return out;
}

Field apply_plap_2d(const Field& u, double p) {
  const Grid& g = u.grid();
  const int n = g.n();
  const double hx = g.spacing(0), hy = g.spacing(1);
  Field out(g);
  auto o = out.values();

  auto x_flux = [&](int i, int j) {  // face between (i,j) and (i+1,j)
    const double d = (u.at(i + 1, j) - u.at(i, j)) / hx;
    if (p == 2.0) return d;
    const double t = (u.at(i, j + 1) - u.at(i, j - 1) + u.at(i + 1, j + 1) -
                      u.at(i + 1, j - 1)) / (4.0 * hy);
    return face_coefficient(d * d + t * t, p) * d;
  };
  auto y_flux = [&](int i, int j) {  // face between (i,j) and (i,j+1)
    const double d = (u.at(i, j + 1) - u.at(i, j)) / hy;
    if (p == 2.0) return d;
    const double t = (u.at(i + 1, j) - u.at(i - 1, j) + u.at(i + 1, j + 1) -
                      u.at(i - 1, j + 1)) / (4.0 * hx);
    return face_coefficient(d * d + t * t, p) * d;
  };

  std::vector<double> qx(static_cast<std::size_t>(n + 1));
  std::vector<double> qy_below(static_cast<std::size_t>(n + 1));
  std::vector<double> qy_above(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n; ++i) qy_below[i] = y_flux(i, 0);
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) qx[i] = x_flux(i, j);
    for (int i = 1; i <= n; ++i) qy_above[i] = y_flux(i, j);
    for (int i = 1; i <= n; ++i)
      o[g.interior_index(i, j)] =
          (qx[i] - qx[i - 1]) / hx + (qy_above[i] - qy_below[i]) / hy;
    std::swap(qy_below, qy_above);
  }
  return out;
}

}  // namespace

Field apply_plap(const Field& u, PExponent p) {
  require_finite(u);
  return u.grid().dim() == 1 ? apply_plap_1d(u, p.value())
                             : apply_plap_2d(u, p.value());
}

double gradient_energy(const Field& u, PExponent p) {
  double sum = 0.0;
  for_each_face(u, p.value(), [&](double w, double c, double d, long, long) {
    sum += w * c * d * d;
  });
  return sum;
}

double flux_pairing(const Field& u, const Field& v, PExponent p) {
  if (!(u.grid() == v.grid()))
    throw InvalidArgument("flux_pairing: fields live on different grids");
  const Grid& g = u.grid();
  const double hx = g.spacing(0);
  const double hy = g.dim() == 2 ? g.spacing(1) : 0.0;
  const auto vv = v.values();
  double sum = 0.0;
  std::size_t face = 0;
  const std::size_t x_faces =
      g.dim() == 1 ? 0 : static_cast<std::size_t>(g.n()) * (g.n() + 1);
  for_each_face(u, p.value(), [&](double w, double c, double d, long l, long r) {
    const double vl = l >= 0 ? vv[l] : 0.0;
    const double vr = r >= 0 ? vv[r] : 0.0;
    const double h = g.dim() == 1 ? hx : (face < x_faces ? hx : hy);
    sum += w * c * d * (vr - vl) / h;
    ++face;
  });
  return sum;
}

double max_face_diffusivity(const Field& u, PExponent p) {
  if (p.is_linear()) return 1.0;
  double m = 0.0;
  for_each_face(u, p.value(), [&](double, double c, double, long, long) {
    m = std::max(m, c);
  });
  return m;
}

double weighted_dot(const Field& u, const Field& v) {
  const auto a = u.values();
  const auto b = v.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s * u.grid().interior_weight();
}

}  // namespace plap
