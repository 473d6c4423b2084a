#include "muskat/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace muskat {

BoundaryGeometry boundary_geometry(const GraphFunction& f) {
  BoundaryGeometry g;
  g.slope = centered_derivative(f.values, f.grid.dx);
  g.metric = (1.0 + g.slope.array().square()).sqrt().matrix();
  g.normal_x = (-g.slope.array() / g.metric.array()).matrix();
  g.normal_y = g.metric.cwiseInverse();
  return g;
}

const char* to_string(OperatorTag t) {
  switch (t) {
    case OperatorTag::G: return "G";
    case OperatorTag::M: return "M";
    case OperatorTag::H: return "H";
  }
  return "?";
}

Vector trace_derivative(const FlattenedField& field, int order) {
  static constexpr std::array<std::array<double, 5>, 4> weights{{
      {-1.0, 1.0, 0.0, 0.0, 0.0},
      {-3.0 / 2.0, 2.0, -1.0 / 2.0, 0.0, 0.0},
      {-11.0 / 6.0, 3.0, -3.0 / 2.0, 1.0 / 3.0, 0.0},
      {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0},
  }};
  if (order < 1 || order > 4) throw InvalidArgument("trace_derivative: order must be 1..4");
  const auto& w = weights[order - 1];
  const double ds = field.params.ds();
  Vector d = Vector::Zero(field.grid.N);
  for (int k = 0; k <= order; ++k) d += w[k] * field.values.row(k).transpose();
  return d / ds;
}

namespace {

DtnDiagnostics diagnostics_of(const FlattenedField& field) {
  DtnDiagnostics d;
  d.residual = field.residual;
  d.iterations = field.iterations;
  d.stencil_order = field.params.stencil_order;
  d.depth = field.params.A;
  const auto report = max_principle_check(field);
  d.mp_excess = std::max(report.measured.at("excess_above"), report.measured.at("excess_below"));
  d.tol_mp = field.tol_mp;
  return d;
}

}  // namespace

DtnResult dtn_from_field(const GraphFunction& f, const GraphFunction& g, const FlattenedField& field) {
  require_same_grid(f.grid, g.grid, "dtn_from_field");
  const Vector fp = centered_derivative(f.values, f.grid.dx);
  const Vector gp = centered_derivative(g.values, g.grid.dx);
  const Vector vs = trace_derivative(field, field.params.stencil_order);

  DtnResult r;
  r.tag = OperatorTag::G;
  r.values = (-fp.array() * gp.array() - (1.0 + fp.array().square()) * vs.array()).matrix();
  r.diagnostics = diagnostics_of(field);
  return r;
}

DtnResult dtn_apply(const GraphFunction& f, const GraphFunction& g, const SolverParams& params) {
  const FlattenedField field = solve_potential(f, g, params);
  return dtn_from_field(f, g, field);
}

OperatorPair muskat_and_heleshaw(const GraphFunction& f, const SolverParams& params) {
  OperatorPair out{{}, {}, solve_shifted_W(f, params)};
  DtnResult g = dtn_from_field(f, f, out.field);
  out.muskat.values = -g.values;
  out.muskat.tag = OperatorTag::M;
  out.muskat.diagnostics = g.diagnostics;
  out.heleshaw.values = (out.muskat.values.array() + 1.0).matrix();
  out.heleshaw.tag = OperatorTag::H;
  out.heleshaw.diagnostics = g.diagnostics;
  return out;
}

DtnResult muskat_operator(const GraphFunction& f, const SolverParams& params) {
  return muskat_and_heleshaw(f, params).muskat;
}

DtnResult heleshaw_operator(const GraphFunction& f, const SolverParams& params) {
  return muskat_and_heleshaw(f, params).heleshaw;
}

namespace {

double periodic_linear(const GraphFunction& f, double x) {
  const Grid& g = f.grid;
  double t = std::fmod(x, g.L);
  if (t < 0) t += g.L;
  const double r = t / g.dx;
  const int i0 = static_cast<int>(std::floor(r));
  const double w = r - i0;
  return (1.0 - w) * f.values[g.wrap(i0)] + w * f.values[g.wrap(i0 + 1)];
}

double bilinear(const FlattenedField& field, double x, double s) {
  const Grid& g = field.grid;
  const double ds = field.params.ds();
  double t = std::fmod(x, g.L);
  if (t < 0) t += g.L;
  const double r = t / g.dx;
  const int i0 = static_cast<int>(std::floor(r));
  const double wx = r - i0;
  const double q = std::clamp(s / ds, 0.0, static_cast<double>(field.params.Ny));
  const int j0 = std::min(static_cast<int>(std::floor(q)), field.params.Ny - 1);
  const double ws = q - j0;
  const int a = g.wrap(i0), b = g.wrap(i0 + 1);
  const auto& v = field.values;
  return (1.0 - ws) * ((1.0 - wx) * v(j0, a) + wx * v(j0, b)) + ws * ((1.0 - wx) * v(j0 + 1, a) + wx * v(j0 + 1, b));
}

}  // namespace

PropertyReport direct_H_consistency(const GraphFunction& f, const SolverParams& params, double c_tol) {
  const OperatorPair ops = muskat_and_heleshaw(f, params);
  const BoundaryGeometry geo = boundary_geometry(f);
  const double ds = params.ds();
  const Grid& grid = f.grid;

  // W = l + phi, with l(x, y) = -y and phi stored at depth s = f(x) - y.
  auto w_along_normal = [&](int i, double h) {
    const double x = grid.x(i) - h * geo.normal_x[i];
    const double y = f.values[i] - h * geo.normal_y[i];
    const double s = periodic_linear(f, x) - y;
    return bilinear(ops.field, x, s) - y;
  };

  double deviation = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    const double d1 = geo.metric[i] * w_along_normal(i, ds) / ds;
    const double d2 = geo.metric[i] * w_along_normal(i, 2.0 * ds) / (2.0 * ds);
    const double extrapolated = 2.0 * d1 - d2;
    deviation = std::max(deviation, std::abs(extrapolated - ops.heleshaw.values[i]));
  }

  PropertyReport r;
  r.name = "direct_H_consistency";
  r.measured["max_deviation"] = deviation;
  r.measured["C"] = deviation / (grid.dx + ds);
  r.tolerances["c_tol"] = c_tol;
  r.tolerances["bound"] = c_tol * (grid.dx + ds);
  r.inputs["N"] = std::to_string(grid.N);
  r.inputs["Ny"] = std::to_string(params.Ny);
  r.pass = deviation <= c_tol * (grid.dx + ds);
  r.digest = input_digest(r);
  return r;
}

}  // namespace muskat
