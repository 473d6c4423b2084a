#pragma once

#include "muskat/grid.hpp"
#include "muskat/harmonic.hpp"
#include "muskat/report.hpp"

namespace muskat {

/// Slope, metric factor sqrt(1 + f'^2) and outward unit normal n = (-f', 1) / metric.
/// The inward normal is -n.
struct BoundaryGeometry {
  Vector slope;
  Vector metric;
  Vector normal_x;
  Vector normal_y;
};

BoundaryGeometry boundary_geometry(const GraphFunction& f);

enum class OperatorTag { G, M, H };

const char* to_string(OperatorTag t);

struct DtnDiagnostics {
  double residual = 0.0;
  int iterations = 0;
  int stencil_order = 0;
  double depth = 0.0;
  /// max(excess above, excess below) of the underlying solve, and its envelope.
  double mp_excess = 0.0;
  double tol_mp = 0.0;
};

struct DtnResult {
  Vector values;
  OperatorTag tag = OperatorTag::G;
  DtnDiagnostics diagnostics;
};

/// One-sided derivative d/ds at s = 0 of every column, using `order` + 1 rows.
Vector trace_derivative(const FlattenedField& field, int order);

/// [G(f)g](x_i) = -f'(x_i) g'(x_i) - (1 + f'(x_i)^2) v_s(x_i, 0) for v the potential of g.
DtnResult dtn_apply(const GraphFunction& f, const GraphFunction& g, const SolverParams& params);

/// Same trace formula applied to an already-solved potential of g.
DtnResult dtn_from_field(const GraphFunction& f, const GraphFunction& g, const FlattenedField& field);

/// M(f) = -G(f) f.
DtnResult muskat_operator(const GraphFunction& f, const SolverParams& params);

/// H(f) = M(f) + 1, from the same potential solve.
DtnResult heleshaw_operator(const GraphFunction& f, const SolverParams& params);

struct OperatorPair {
  DtnResult muskat;
  DtnResult heleshaw;
  FlattenedField field;
};

/// M(f) and H(f) sharing a single solve of W_f - l.
OperatorPair muskat_and_heleshaw(const GraphFunction& f, const SolverParams& params);

/// Cross-check of H against a finite difference of W_f along the true inward
/// normal (bilinear interpolation off-grid, Richardson over h in {ds, 2ds}).
/// Passes when the max deviation is at most c_tol * (dx + ds).
PropertyReport direct_H_consistency(const GraphFunction& f, const SolverParams& params, double c_tol = 1.0);

}  // namespace muskat
