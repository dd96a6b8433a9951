#include "plap/grid.hpp"

#include <cmath>
#include <string>

namespace plap {

Grid::Grid(int dim, double lx, double ly, int n)
    : dim_(dim), n_(n), lx_(lx), ly_(ly), hx_(lx / (n + 1)), hy_(ly / (n + 1)) {}

Grid Grid::build(int dim, std::span<const double> lengths, int n) {
  if (dim != 1 && dim != 2)
    throw InvalidArgument("grid dimension must be 1 or 2, got " +
                          std::to_string(dim));
  if (n < 3)
    throw InvalidArgument("grid needs at least 3 interior nodes per axis, got " +
                          std::to_string(n));
  if (lengths.size() != static_cast<std::size_t>(dim))
    throw InvalidArgument("expected " + std::to_string(dim) +
                          " side length(s), got " +
                          std::to_string(lengths.size()));
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l))
      throw InvalidArgument("grid side lengths must be positive and finite");
  return Grid(dim, lengths[0], dim == 2 ? lengths[1] : 1.0, n);
}

Grid Grid::line(double length, int n) {
  const double l[] = {length};
  return build(1, l, n);
}

Grid Grid::rectangle(double lx, double ly, int n) {
  const double l[] = {lx, ly};
  return build(2, l, n);
}

std::size_t Grid::size() const {
  const auto n = static_cast<std::size_t>(n_);
  return dim_ == 1 ? n : n * n;
}

std::size_t Grid::node_count() const {
  const auto m = static_cast<std::size_t>(n_ + 2);
  return dim_ == 1 ? m : m * m;
}

bool Grid::is_boundary(int i, int j) const {
  if (i <= 0 || i >= n_ + 1) return true;
  if (dim_ == 2 && (j <= 0 || j >= n_ + 1)) return true;
  return false;
}

std::vector<double> Grid::node_weights() const {
  const int m = n_ + 2;
  auto axis_weight = [m](int k, double h) {
    return (k == 0 || k == m - 1) ? 0.5 * h : h;
  };
  std::vector<double> w;
  w.reserve(node_count());
  if (dim_ == 1) {
    for (int i = 0; i < m; ++i) w.push_back(axis_weight(i, hx_));
  } else {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        w.push_back(axis_weight(i, hx_) * axis_weight(j, hy_));
  }
  return w;
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " values, grid expects " +
                          std::to_string(grid_.size()));
}

bool Field::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Field Field::scaled(double c) const {
  Field out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

double integrate_power(const Field& field, double k) {
  double sum = 0.0;
  if (k == 2.0) {
    for (double v : field.values()) sum += v * v;
  } else {
    for (double v : field.values())
      if (v != 0.0) sum += std::pow(std::abs(v), k);
  }
  return sum * field.grid().interior_weight();
}

double integrate_nodes(const Grid& grid, std::span<const double> node_values) {
  if (node_values.size() != grid.node_count())
    throw InvalidArgument("node array size does not match grid");
  const auto w = grid.node_weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) sum += w[k] * node_values[k];
  return sum;
}

double sup_norm(const Field& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

namespace detail {

double boundary_weight(const Grid& grid) {
  // Total trapezoid weight on boundary nodes = |Omega| - interior share.
  return grid.measure() -
         static_cast<double>(grid.size()) * grid.interior_weight();
}

void throw_nonfinite(double arg) {
  throw EvaluationError("integrand is not finite at u = " +
                        std::to_string(arg));
}

}  // namespace detail
}  // namespace plap
