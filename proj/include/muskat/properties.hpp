#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "muskat/convolution.hpp"
#include "muskat/evolution.hpp"
#include "muskat/grid.hpp"
#include "muskat/harmonic.hpp"
#include "muskat/operators.hpp"
#include "muskat/report.hpp"

namespace muskat {

/// C^{1,gamma} / Lipschitz budget for randomized families.
struct RegularityBudget {
  double gamma = 0.5;
  double m = 1.0;
};

void validate(const RegularityBudget& b);

/// Touching-pair tolerance: 3x the worst error of the flat oracle G(0) sin(kx) = k sin(kx),
/// k in {1, 2, 4}, at the working resolution.
double calibrate_gcp_tolerance(const Grid& grid, const SolverParams& params);

/// 1e-6 + c dx^2.
double comparison_tolerance(const Grid& grid, double c = 1.0);

struct NamedFunction {
  std::string name;
  GraphFunction f;
};

/// Constant, 1 + eps sin(x) for eps in {1e-3, 0.1, 0.5}, and seeded random-Lipschitz data
/// with m in {0.5, 1, 2}.
std::vector<NamedFunction> standard_initial_data(const Grid& grid);

/// amp * (1 - cos(2 pi d / L)), d the periodic distance to x0: zero value and slope at x0.
GraphFunction touching_profile(const Grid& grid, double amp, double x0);

/// Node index of x0; throws unless x0 sits on the grid.
int node_index(const Grid& grid, double x0);

PropertyReport gcp_check(const GraphFunction& f, double bump_amp, double x0, const SolverParams& params,
                         double tol_gcp);

/// height * (1 - cos(2 pi d / L)) / 2.
GraphFunction far_field_bump(const Grid& grid, double height, double x0);

/// 0 on the ball of radius 2R around x0, 1 beyond 3R, quintic smoothstep between.
GraphFunction splitting_mask(const Grid& grid, double R, double x0);

PropertyReport splitting_check(const GraphFunction& f, const GraphFunction& h, double x0,
                               const std::vector<double>& radii, const SolverParams& params, double tol_gcp);

PropertyReport wf_bounds_check(const GraphFunction& f, const SolverParams& params);

PropertyReport invariance_check(const GraphFunction& f, double c, int z, const SolverParams& params);

PropertyReport comparison_run(const GraphFunction& f0, const GraphFunction& g0, const TimeParams& time, Flow which,
                              const SolverParams& params, double tol_cmp);

PropertyReport modulus_run(const GraphFunction& f0, const TimeParams& time, Flow which, const SolverParams& params,
                           double tol_cmp);

/// Random smooth function with ||f'||_inf and [f']_gamma both within the budget.
GraphFunction random_budget_function(const Grid& grid, const RegularityBudget& budget, std::uint64_t seed,
                                     double offset = 1.0);

/// Ratio ||H(f) - H(g)||_inf / (||f - g||_{C^{1,gamma}} + ||f - g||_inf) over n_pairs seeded pairs
/// at N and N/2; passes when both maxima are finite and within 2x of each other.
PropertyReport lipschitz_H_check(std::uint64_t seed, const RegularityBudget& budget, int n_pairs, const Grid& grid,
                                 const SolverParams& params);

/// Ratio for one pair (0 when f == g).
double lipschitz_ratio(const GraphFunction& f, const GraphFunction& g, double gamma, const SolverParams& params);

/// Fast envelope vs brute force, ordering u_eps <= u <= u^eps.
PropertyReport convolution_check(const GraphFunction& u, double epsilon);

/// max discrete |grad Phi_R| <= 1/R + dx, 0 <= Phi_R <= 1, Phi_R(x0) = 0.
PropertyReport bump_check(double R, const Grid& grid);

struct SuiteOptions {
  Grid grid;
  SolverParams solver;
  double t_end = 0.25;
  Scheme scheme = Scheme::euler;
  int gcp_pairs = 10;
  int lipschitz_pairs = 4;
  std::uint64_t seed = 1;
  double cmp_c = 1.0;
  double direct_h_c = 1.0;
};

SuiteOptions default_suite_options(const Grid& grid);

std::vector<std::string> standard_check_names();

/// Runs one named family of checks; throws InvalidArgument for an unknown name.
std::vector<PropertyReport> run_check(const std::string& name, const SuiteOptions& opts);

std::vector<PropertyReport> run_standard_suite(const SuiteOptions& opts);

}  // namespace muskat
