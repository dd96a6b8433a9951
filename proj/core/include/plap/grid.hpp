#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "plap/error.hpp"

namespace plap {

/// Uniform tensor grid on (0, Lx) or (0, Lx) x (0, Ly) with homogeneous
/// Dirichlet boundary.
///
/// Nodes are indexed 0..n+1 along each axis; 0 and n+1 are boundary nodes.
/// Only the n (per axis) interior nodes carry unknowns. Quadrature is the
/// composite trapezoid rule over all nodes, so interior weights are h (1D) or
/// hx*hy (2D), edge nodes carry half of that and corners a quarter.
class Grid {
 public:
  /// Throws InvalidArgument if dim is not 1 or 2, n < 3, or a length is <= 0.
  static Grid build(int dim, std::span<const double> lengths, int n);
  static Grid line(double length, int n);
  static Grid rectangle(double lx, double ly, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length(int axis) const { return axis == 0 ? lx_ : ly_; }
  double spacing(int axis) const { return axis == 0 ? hx_ : hy_; }
  /// Smallest spacing over the active axes.
  double h() const { return dim_ == 1 ? hx_ : std::min(hx_, hy_); }

  /// Number of interior unknowns, n^dim.
  std::size_t size() const;
  /// Number of nodes including the boundary, (n+2)^dim.
  std::size_t node_count() const;

  /// |Omega|.
  double measure() const { return dim_ == 1 ? lx_ : lx_ * ly_; }
  /// Quadrature weight carried by every interior node.
  double interior_weight() const { return dim_ == 1 ? hx_ : hx_ * hy_; }
  /// Trapezoid weights for all nodes, row-major over (n+2)^dim.
  std::vector<double> node_weights() const;

  /// Physical coordinate of node `index` (0..n+1) along `axis`.
  double coordinate(int axis, int index) const {
    return index * spacing(axis);
  }

  /// Flat index of interior node (i, j), both 1-based node indices in 1..n.
  std::size_t interior_index(int i, int j = 1) const {
    return dim_ == 1 ? static_cast<std::size_t>(i - 1)
                     : static_cast<std::size_t>(j - 1) * n_ + (i - 1);
  }

  /// True if node (i, j) lies on the boundary of the index box.
  bool is_boundary(int i, int j = 1) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(int dim, double lx, double ly, int n);

  int dim_ = 1;
  int n_ = 0;
  double lx_ = 1.0;
  double ly_ = 1.0;
  double hx_ = 0.0;
  double hy_ = 0.0;
};

/// Grid function holding interior values; boundary values are implicitly 0.
class Field {
 public:
  explicit Field(const Grid& grid);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples `fn` at interior nodes. `fn` takes x (1D) or (x, y) (2D).
  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  /// Value at node (i, j) with node indices in 0..n+1; boundary nodes give 0.
  double at(int i, int j = 1) const {
    if (grid_.is_boundary(i, j)) return 0.0;
    return values_[grid_.interior_index(i, j)];
  }

  bool blown_up() const { return blown_up_; }
  void mark_blown_up() { blown_up_ = true; }
  bool all_finite() const;

  Field scaled(double c) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  bool blown_up_ = false;
};

template <class Fn>
Field Field::sample(const Grid& grid, Fn&& fn) {
  Field out(grid);
  const int n = grid.n();
  if constexpr (std::is_invocable_v<Fn&, double>) {
    if (grid.dim() != 1)
      throw InvalidArgument("Field::sample: one-argument function on a 2D grid");
    for (int i = 1; i <= n; ++i)
      out.values_[grid.interior_index(i)] = fn(grid.coordinate(0, i));
  } else {
    if (grid.dim() != 2)
      throw InvalidArgument("Field::sample: two-argument function on a 1D grid");
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i)
        out.values_[grid.interior_index(i, j)] =
            fn(grid.coordinate(0, i), grid.coordinate(1, j));
  }
  return out;
}

/// Trapezoid quadrature of sum_k w_k |u_k|^k_exp. 0^k is taken as 0.
double integrate_power(const Field& field, double k);

/// Trapezoid quadrature of sum_k w_k g(u_k) over all nodes; boundary nodes
/// contribute g(0). Throws EvaluationError if g returns a non-finite value.
template <class G>
double integrate_composed(const Field& field, G&& g);

/// Trapezoid quadrature of raw values over all (n+2)^dim nodes.
double integrate_nodes(const Grid& grid, std::span<const double> node_values);

/// max_k |u_k|.
double sup_norm(const Field& field);

namespace detail {
double boundary_weight(const Grid& grid);
[[noreturn]] void throw_nonfinite(double arg);
}  // namespace detail

template <class G>
double integrate_composed(const Field& field, G&& g) {
  double sum = 0.0;
  for (double v : field.values()) {
    const double gv = g(v);
    if (!std::isfinite(gv)) detail::throw_nonfinite(v);
    sum += gv;
  }
  sum *= field.grid().interior_weight();
  const double g0 = g(0.0);
  if (!std::isfinite(g0)) detail::throw_nonfinite(0.0);
  if (g0 != 0.0) sum += g0 * detail::boundary_weight(field.grid());
  return sum;
}

}  // namespace plap
