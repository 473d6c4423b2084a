#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "muskat/evolution.hpp"
#include "muskat/grid.hpp"

namespace muskat {

enum class ConvolutionAxis { space, space_time };

struct ConvolutionParams {
  double epsilon = 1.0;
  ConvolutionAxis axis = ConvolutionAxis::space;
};

/// value + (x - y)^2 / (2 eps). Every inf-convolution path evaluates exactly this expression.
inline double quadratic_cost(double value, double x, double y, double eps) {
  return value + (x - y) * (x - y) / (2.0 * eps);
}

/// Lower envelope of the parabolas  y -> values[p] + (y - positions[p])^2 / (2 eps),
/// evaluated at sorted `queries`. `positions` must be strictly increasing.
/// O(P + Q); the minimiser chosen at each query is re-checked against its
/// envelope neighbours so the result equals the brute-force minimum bitwise.
template <typename ValuesDerived, typename PositionsDerived, typename QueriesDerived>
Vector lower_envelope(const Eigen::MatrixBase<ValuesDerived>& values,
                      const Eigen::MatrixBase<PositionsDerived>& positions,
                      const Eigen::MatrixBase<QueriesDerived>& queries, double eps) {
  const Eigen::Index n = values.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> hull(n);
  std::vector<double> bound(n + 1);
  Eigen::Index k = 0;
  hull[0] = 0;
  bound[0] = -inf;
  bound[1] = inf;
  auto crossing = [&](Eigen::Index q, Eigen::Index r) {
    const double pq = positions[q], pr = positions[r];
    return (2.0 * eps * (values[q] - values[r]) + pq * pq - pr * pr) / (2.0 * (pq - pr));
  };
  for (Eigen::Index q = 1; q < n; ++q) {
    double s = crossing(q, hull[k]);
    while (k > 0 && s < bound[k]) {
      --k;
      s = crossing(q, hull[k]);
    }
    ++k;
    hull[k] = q;
    bound[k] = s;
    bound[k + 1] = inf;
  }

  Vector out(queries.size());
  Eigen::Index h = 0;
  for (Eigen::Index i = 0; i < queries.size(); ++i) {
    const double x = queries[i];
    while (h < k && bound[h + 1] < x) ++h;
    double best = quadratic_cost(values[hull[h]], x, positions[hull[h]], eps);
    if (h > 0) best = std::min(best, quadratic_cost(values[hull[h - 1]], x, positions[hull[h - 1]], eps));
    if (h < k) best = std::min(best, quadratic_cost(values[hull[h + 1]], x, positions[hull[h + 1]], eps));
    out[i] = best;
  }
  return out;
}

/// min over nodes y and periodic images of quadratic_cost(u(y), x_i, y + nL, eps).
template <typename Derived>
Vector periodic_inf_convolution(const Eigen::MatrixBase<Derived>& u, double L, double eps) {
  const Eigen::Index n = u.size();
  const double dx = L / static_cast<double>(n);
  Vector values(3 * n), positions(3 * n), queries(n);
  for (int image = -1; image <= 1; ++image) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index p = (image + 1) * n + i;
      values[p] = u[i];
      positions[p] = static_cast<double>(i) * dx + image * L;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) queries[i] = static_cast<double>(i) * dx;
  return lower_envelope(values, positions, queries, eps);
}

GraphFunction inf_convolution(const GraphFunction& u, const ConvolutionParams& p);
GraphFunction sup_convolution(const GraphFunction& u, const ConvolutionParams& p);

/// Space-only: frame by frame. Space-time: the space pass first, then a
/// non-periodic pass over the snapshot times.
Trajectory inf_convolution(const Trajectory& u, const ConvolutionParams& p);
Trajectory sup_convolution(const Trajectory& u, const ConvolutionParams& p);

/// Phi_R(x) = |d/R|^2 / (1 + |d/R|^2), d the periodic distance to x0. Requires R >= 1.
GraphFunction bump(double R, double x0, const Grid& grid);

}  // namespace muskat
