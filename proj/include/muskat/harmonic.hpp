#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "muskat/grid.hpp"
#include "muskat/report.hpp"

namespace muskat {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class LinearSolver { preconditioned_bicgstab, sparse_lu };

/// Truncated-depth discretization of the flattened strip s in [0, A].
struct SolverParams {
  double A = 0.0;
  int Ny = 0;
  double rel_tol = 1e-10;
  int max_iter = 2000;
  /// Order of the one-sided vertical difference used for boundary traces (1, 2, 3 or 4).
  int stencil_order = 4;
  LinearSolver solver = LinearSolver::preconditioned_bicgstab;

  double ds() const { return A / Ny; }
};

/// A = 2L, Ny = N, rel_tol = 1e-10.
SolverParams default_solver_params(const Grid& grid);

void validate(const SolverParams& p);

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

enum class FieldKind { potential, shifted_w };

const char* to_string(FieldKind k);

/// Harmonic field in flattened coordinates. Entry (j, i) is the value at
/// (x_i, s_j) with s = f(x) - x_{d+1} the depth below the graph.
struct FlattenedField {
  Grid grid;
  SolverParams params;
  RowMatrix values;  // (Ny + 1) x N; row 0 holds the Dirichlet data
  FieldKind kind = FieldKind::potential;
  double residual = 0.0;
  int iterations = 0;
  /// Discrete maximum-principle envelope for this solve.
  double tol_mp = 0.0;

  double s(int j) const { return j * params.ds(); }
};

/// Linear system for the interior unknowns (x_i, s_j), j = 1..Ny, with the
/// Dirichlet row s = 0 eliminated into the right-hand side and the bottom
/// Neumann condition folded in through a mirrored ghost row.
struct DiscreteSystem {
  SparseRowMatrix matrix;
  Vector rhs;
  int N = 0;
  int Ny = 0;
  double dx = 0.0;
  double ds = 0.0;
  Vector slope;      // f' per column
  Vector curvature;  // f'' per column

  Eigen::Index index(int j, int i) const { return static_cast<Eigen::Index>(j - 1) * N + i; }
  /// 1 + f'^2, the coefficient of v_ss in column i.
  double metric_sq(int i) const { return 1.0 + slope[i] * slope[i]; }
};

/// Discretizes v_xx + 2 f' v_xs + f'' v_s + (1 + f'^2) v_ss = 0 with v(., 0) = data, v_s(., A) = 0.
DiscreteSystem assemble(const GraphFunction& f, const GraphFunction& data, const SolverParams& params);

FlattenedField solve_potential(const GraphFunction& f, const GraphFunction& data, const SolverParams& params);

/// phi = W_f - l, i.e. the potential with Dirichlet data f itself.
FlattenedField solve_shifted_W(const GraphFunction& f, const SolverParams& params);

/// osc(data) * (10 rel_tol + (dx^2 + ds^2)(1 + osc(f'') ds)); the last factor widens it for rough graphs.
double max_principle_tolerance(const GraphFunction& f, const GraphFunction& data, const SolverParams& params);

/// Interior excess above max data and below min data, against field.tol_mp.
PropertyReport max_principle_check(const FlattenedField& field);

/// Process-wide record of every potential solve and its max-principle outcome.
struct SolveTally {
  std::uint64_t solves = 0;
  std::uint64_t mp_violations = 0;
  /// Largest excess / tol_mp seen (excess only counted where positive).
  double worst_ratio = 0.0;
};

SolveTally solve_tally();
void reset_solve_tally();

/// Rotate every row by z columns, matching translate() on the horizontal variable.
FlattenedField rotate_columns(const FlattenedField& field, int z);

}  // namespace muskat
