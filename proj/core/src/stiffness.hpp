#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "plap/grid.hpp"

namespace plap::detail {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Stiffness matrix sum_f c_f (e_l - e_r)(e_l - e_r)^T / h^2 scaled so that
// for c_f = 1 it is the standard -Delta_h. Face coefficients come from
// `coefficient(g2)` evaluated on the squared face gradient.
template <class Coefficient>
SparseMatrix assemble_stiffness(const Field& u, Coefficient&& coefficient) {
  const Grid& g = u.grid();
  const int n = g.n();
  std::vector<Triplet> trips;
  trips.reserve(g.size() * (g.dim() == 1 ? 3 : 5));
  auto add_face = [&](long l, long r, double c) {
    if (l >= 0) trips.emplace_back(l, l, c);
    if (r >= 0) trips.emplace_back(r, r, c);
    if (l >= 0 && r >= 0) {
      trips.emplace_back(l, r, -c);
      trips.emplace_back(r, l, -c);
    }
  };
  auto flat = [&](int i, int j) -> long {
    return g.is_boundary(i, j) ? -1 : static_cast<long>(g.interior_index(i, j));
  };
  if (g.dim() == 1) {
    const double h = g.spacing(0);
    for (int i = 0; i <= n; ++i) {
      const double d = (u.at(i + 1) - u.at(i)) / h;
      add_face(flat(i, 1), flat(i + 1, 1), coefficient(d * d) / (h * h));
    }
  } else {
    const double hx = g.spacing(0), hy = g.spacing(1);
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const double d = (u.at(i + 1, j) - u.at(i, j)) / hx;
        const double t = (u.at(i, j + 1) - u.at(i, j - 1) + u.at(i + 1, j + 1) -
                          u.at(i + 1, j - 1)) / (4.0 * hy);
        add_face(flat(i, j), flat(i + 1, j), coefficient(d * d + t * t) / (hx * hx));
      }
    for (int j = 0; j <= n; ++j)
      for (int i = 1; i <= n; ++i) {
        const double d = (u.at(i, j + 1) - u.at(i, j)) / hy;
        const double t = (u.at(i + 1, j) - u.at(i - 1, j) + u.at(i + 1, j + 1) -
                          u.at(i - 1, j + 1)) / (4.0 * hx);
        add_face(flat(i, j), flat(i, j + 1), coefficient(d * d + t * t) / (hy * hy));
      }
  }
  const auto size = static_cast<Eigen::Index>(g.size());
  SparseMatrix k(size, size);
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

inline Eigen::Map<const Eigen::VectorXd> view(const Field& f) {
  return {f.values().data(), static_cast<Eigen::Index>(f.size())};
}

inline Field from_vector(const Grid& g, const Eigen::VectorXd& v) {
  return Field(g, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace plap::detail
