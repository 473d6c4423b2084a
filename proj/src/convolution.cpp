#include "muskat/convolution.hpp"

namespace muskat {

namespace {

void check(const ConvolutionParams& p) {
  if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) throw InvalidArgument("convolution: epsilon must be positive");
}

}  // namespace

GraphFunction inf_convolution(const GraphFunction& u, const ConvolutionParams& p) {
  check(p);
  return GraphFunction(u.grid, periodic_inf_convolution(u.values, u.grid.L, p.epsilon));
}

GraphFunction sup_convolution(const GraphFunction& u, const ConvolutionParams& p) {
  return -inf_convolution(-u, p);
}

Trajectory inf_convolution(const Trajectory& u, const ConvolutionParams& p) {
  check(p);
  Trajectory out = u;
  out.steps.clear();
  if (u.frames.empty()) return out;
  for (auto& frame : out.frames) frame = GraphFunction(frame.grid, periodic_inf_convolution(frame.values, frame.grid.L, p.epsilon));
  if (p.axis == ConvolutionAxis::space) return out;

  const Eigen::Index T = static_cast<Eigen::Index>(u.times.size());
  for (Eigen::Index k = 1; k < T; ++k)
    if (!(u.times[k] > u.times[k - 1])) throw InvalidArgument("convolution: snapshot times must increase");
  const Vector times = Eigen::Map<const Vector>(u.times.data(), T);
  const int N = u.frames.front().grid.N;
  Vector column(T);
  for (int i = 0; i < N; ++i) {
    for (Eigen::Index k = 0; k < T; ++k) column[k] = out.frames[k].values[i];
    const Vector env = lower_envelope(column, times, times, p.epsilon);
    for (Eigen::Index k = 0; k < T; ++k) out.frames[k].values[i] = env[k];
  }
  return out;
}

Trajectory sup_convolution(const Trajectory& u, const ConvolutionParams& p) {
  Trajectory neg = u;
  for (auto& f : neg.frames) f = -f;
  Trajectory out = inf_convolution(neg, p);
  for (auto& f : out.frames) f = -f;
  return out;
}

GraphFunction bump(double R, double x0, const Grid& grid) {
  if (!(R >= 1.0)) throw InvalidArgument("bump: R must be at least 1");
  Vector v(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const double r = grid.periodic_distance(grid.x(i), x0) / R;
    v[i] = r * r / (1.0 + r * r);
  }
  return GraphFunction(grid, std::move(v));
}

}  // namespace muskat
