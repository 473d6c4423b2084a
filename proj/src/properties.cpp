#include "muskat/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace muskat {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string digest_of(const GraphFunction& f) { return digest_doubles(f.values.data(), f.values.size()); }

void finish(PropertyReport& r) { r.digest = input_digest(r); }

}  // namespace

void validate(const RegularityBudget& b) {
  if (!(b.gamma > 0.0 && b.gamma < 1.0)) throw InvalidArgument("RegularityBudget: gamma must lie in (0, 1)");
  if (!(b.m > 0.0)) throw InvalidArgument("RegularityBudget: m must be positive");
}

double calibrate_gcp_tolerance(const Grid& grid, const SolverParams& params) {
  const GraphFunction flat = sample(ConstantIC{0.0}, grid);
  const double base = 2.0 * kPi / grid.L;
  double worst = 0.0;
  for (int k : {1, 2, 4}) {
    const double wave = k * base;
    const GraphFunction g = sample(FourierIC{{{1.0, wave, 0.0}}, 0.0}, grid);
    const DtnResult r = dtn_apply(flat, g, params);
    worst = std::max(worst, (r.values - wave * g.values).cwiseAbs().maxCoeff());
  }
  return 3.0 * worst;
}

double comparison_tolerance(const Grid& grid, double c) { return 1e-6 + c * grid.dx * grid.dx; }

std::vector<NamedFunction> standard_initial_data(const Grid& grid) {
  const double k = 2.0 * kPi / grid.L;
  std::vector<NamedFunction> out;
  out.push_back({"constant_1", sample(ConstantIC{1.0}, grid)});
  for (double eps : {1e-3, 0.1, 0.5}) {
    char name[32];
    std::snprintf(name, sizeof name, "sine_%g", eps);
    out.push_back({name, sample(FourierIC{{{eps, k, 0.0}}, 1.0}, grid)});
  }
  const std::pair<double, std::uint64_t> lips[] = {{0.5, 101}, {1.0, 102}, {2.0, 103}};
  for (const auto& [m, seed] : lips) {
    char name[32];
    std::snprintf(name, sizeof name, "lipschitz_%g", m);
    out.push_back({name, sample(RandomLipschitzIC{m, seed, 1.0}, grid)});
  }
  return out;
}

GraphFunction touching_profile(const Grid& grid, double amp, double x0) {
  Vector v(grid.N);
  for (int i = 0; i < grid.N; ++i)
    v[i] = amp * (1.0 - std::cos(2.0 * kPi * grid.periodic_distance(grid.x(i), x0) / grid.L));
  return GraphFunction(grid, std::move(v));
}

int node_index(const Grid& grid, double x0) {
  const double r = x0 / grid.dx;
  const long k = std::lround(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r))) throw InvalidArgument("x0 must be a grid node");
  return grid.wrap(static_cast<int>(k));
}

PropertyReport gcp_check(const GraphFunction& f, double bump_amp, double x0, const SolverParams& params,
                         double tol_gcp) {
  if (!(bump_amp >= 0.0)) throw InvalidArgument("gcp_check: bump_amp must be non-negative");
  const int i0 = node_index(f.grid, x0);
  const GraphFunction g = f + touching_profile(f.grid, bump_amp, x0);

  const double hf = heleshaw_operator(f, params).values[i0];
  const double hg = heleshaw_operator(g, params).values[i0];
  const double diff = hg - hf;
  const double dist = (g.values - f.values).cwiseAbs().maxCoeff();
  const double c_meas = dist > 0.0 ? std::max(diff, 0.0) / dist : 0.0;

  PropertyReport r;
  r.name = "gcp_check";
  r.measured["H_f"] = hf;
  r.measured["H_g"] = hg;
  r.measured["difference"] = diff;
  r.measured["violation"] = std::max(0.0, -diff);
  r.measured["sup_distance"] = dist;
  r.measured["C_meas"] = c_meas;
  r.tolerances["tol_gcp"] = tol_gcp;
  r.inputs["f"] = digest_of(f);
  r.inputs["bump_amp"] = num(bump_amp);
  r.inputs["x0"] = num(x0);
  bool ok = diff + tol_gcp >= 0.0 && std::isfinite(c_meas);
  // Upper side of the touching-point estimate: diff <= C ||f - g|| + tol, with C measured.
  ok = ok && diff <= c_meas * dist + tol_gcp;
  r.pass = ok;
  finish(r);
  return r;
}

GraphFunction far_field_bump(const Grid& grid, double height, double x0) {
  return touching_profile(grid, 0.5 * height, x0);
}

GraphFunction splitting_mask(const Grid& grid, double R, double x0) {
  Vector v(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const double d = grid.periodic_distance(grid.x(i), x0);
    const double t = std::clamp((d - 2.0 * R) / R, 0.0, 1.0);
    v[i] = std::min(1.0, t * t * t * (t * (6.0 * t - 15.0) + 10.0));
  }
  return GraphFunction(grid, std::move(v));
}

PropertyReport splitting_check(const GraphFunction& f, const GraphFunction& h, double x0,
                               const std::vector<double>& radii, const SolverParams& params, double tol_gcp) {
  require_same_grid(f.grid, h.grid, "splitting_check");
  const Grid& grid = f.grid;
  if (radii.empty()) throw InvalidArgument("splitting_check: no radii");
  for (double R : radii)
    if (!(R > 0.0) || R > grid.L / 8 * (1.0 + 1e-12))
      throw InvalidArgument("splitting_check: radii must lie in (0, L/8]");
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());

  const Vector base = heleshaw_operator(f, params).values;
  std::vector<double> D;
  for (double R : sorted) {
    const Vector masked = splitting_mask(grid, R, x0).values.cwiseProduct(h.values);
    const Vector hr = heleshaw_operator(GraphFunction(grid, f.values + masked), params).values;
    double best = 0.0;
    for (int i = 0; i < grid.N; ++i)
      if (grid.periodic_distance(grid.x(i), x0) <= R + 1e-12 * grid.L) best = std::max(best, std::abs(hr[i] - base[i]));
    D.push_back(best);
  }

  PropertyReport r;
  r.name = "splitting_check";
  bool nonincreasing = true, strictly = true;
  for (std::size_t k = 1; k < D.size(); ++k) {
    nonincreasing = nonincreasing && D[k] <= D[k - 1];
    strictly = strictly && D[k] < D[k - 1];
  }
  const double dmax = *std::max_element(D.begin(), D.end());
  double alpha = 0.0;
  const bool degenerate = dmax <= tol_gcp;
  if (!degenerate && sorted.size() >= 2 && *std::min_element(D.begin(), D.end()) > 0.0) {
    // Least-squares slope of log D against log R.
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < D.size(); ++k) {
      mx += std::log(sorted[k]);
      my += std::log(D[k]);
    }
    mx /= D.size();
    my /= D.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < D.size(); ++k) {
      sxy += (std::log(sorted[k]) - mx) * (std::log(D[k]) - my);
      sxx += (std::log(sorted[k]) - mx) * (std::log(sorted[k]) - mx);
    }
    alpha = -sxy / sxx;
  }
  for (std::size_t k = 0; k < D.size(); ++k) {
    r.measured["D_" + std::to_string(k)] = D[k];
    r.inputs["R_" + std::to_string(k)] = num(sorted[k]);
  }
  r.measured["alpha"] = alpha;
  r.measured["nonincreasing"] = nonincreasing ? 1.0 : 0.0;
  r.measured["strictly_decreasing"] = strictly ? 1.0 : 0.0;
  r.measured["degenerate"] = degenerate ? 1.0 : 0.0;
  r.tolerances["tol_gcp"] = tol_gcp;
  r.inputs["f"] = digest_of(f);
  r.inputs["h"] = digest_of(h);
  r.inputs["x0"] = num(x0);
  r.pass = degenerate || (nonincreasing && alpha > 0.0);
  finish(r);
  return r;
}

PropertyReport wf_bounds_check(const GraphFunction& f, const SolverParams& params) {
  const FlattenedField phi = solve_shifted_W(f, params);
  const double lo = f.values.minCoeff();
  const double hi = f.values.maxCoeff();
  const double below = lo - phi.values.minCoeff();
  const double above = phi.values.maxCoeff() - hi;

  PropertyReport r;
  r.name = "wf_bounds_check";
  r.measured["excess_below_inf_f"] = below;
  r.measured["excess_above_sup_f"] = above;
  r.measured["lower_margin"] = -below;
  r.measured["upper_margin"] = -above;
  r.measured["residual"] = phi.residual;
  r.tolerances["tol_mp"] = phi.tol_mp;
  r.inputs["f"] = digest_of(f);
  r.pass = below <= phi.tol_mp && above <= phi.tol_mp;
  finish(r);
  return r;
}

PropertyReport invariance_check(const GraphFunction& f, double c, int z, const SolverParams& params) {
  const Vector h = heleshaw_operator(f, params).values;
  const Vector hc = heleshaw_operator(f + c, params).values;
  const Vector ht = heleshaw_operator(translate(f, z), params).values;
  const Vector h_shifted = translate(GraphFunction(f.grid, h), z).values;

  const double dev_const = (hc - h).cwiseAbs().maxCoeff();
  const double dev_trans = (ht - h_shifted).cwiseAbs().maxCoeff();
  PropertyReport r;
  r.name = "invariance_check";
  r.measured["constant_deviation"] = dev_const;
  r.measured["translation_deviation"] = dev_trans;
  r.tolerances["tol"] = 10.0 * params.rel_tol;
  r.inputs["f"] = digest_of(f);
  r.inputs["c"] = num(c);
  r.inputs["z"] = std::to_string(z);
  r.pass = dev_const <= 10.0 * params.rel_tol && dev_trans <= 10.0 * params.rel_tol;
  finish(r);
  return r;
}

PropertyReport comparison_run(const GraphFunction& f0, const GraphFunction& g0, const TimeParams& time, Flow which,
                              const SolverParams& params, double tol_cmp) {
  require_same_grid(f0.grid, g0.grid, "comparison_run");
  if ((f0.values - g0.values).maxCoeff() > 0.0) throw InvalidArgument("comparison_run: requires f0 <= g0");

  const Trajectory f = evolve(f0, time, which, params);
  const Trajectory g = evolve_schedule(g0, step_sizes(f), time.scheme, time.snapshot_stride, which, params);
  double worst = -std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < std::min(f.frames.size(), g.frames.size()); ++k) {
    const Vector gap = g.frames[k].values - f.frames[k].values;
    worst = std::max(worst, -gap.minCoeff());
    min_gap = std::min(min_gap, gap.minCoeff());
  }

  PropertyReport r;
  r.name = "comparison_run";
  r.measured["max_f_minus_g"] = worst;
  r.measured["min_gap"] = min_gap;
  r.measured["snapshots"] = static_cast<double>(f.frames.size());
  r.tolerances["tol_cmp"] = tol_cmp;
  r.inputs["f0"] = digest_of(f0);
  r.inputs["g0"] = digest_of(g0);
  r.inputs["flow"] = to_string(which);
  r.inputs["t_end"] = num(time.t_end);
  r.inputs["scheme"] = to_string(time.scheme);
  r.pass = worst <= tol_cmp;
  finish(r);
  return r;
}

PropertyReport modulus_run(const GraphFunction& f0, const TimeParams& time, Flow which, const SolverParams& params,
                           double tol_cmp) {
  const Trajectory traj = evolve(f0, time, which, params);
  const std::vector<double> lags = dyadic_lags(f0.grid);
  const double lip0 = lipschitz_constant(f0);
  const ModulusProfile prof0 = modulus(f0, lags);

  double lip_growth = -std::numeric_limits<double>::infinity();
  double profile_growth = -std::numeric_limits<double>::infinity();
  bool mean_monotone_up = true, mean_monotone_down = true;
  double prev_mean = f0.values.mean();
  for (const auto& frame : traj.frames) {
    lip_growth = std::max(lip_growth, lipschitz_constant(frame) - lip0);
    const ModulusProfile p = modulus(frame, lags);
    for (std::size_t k = 0; k < lags.size(); ++k) profile_growth = std::max(profile_growth, p.values[k] - prof0.values[k]);
    const double mean = frame.values.mean();
    mean_monotone_up = mean_monotone_up && mean >= prev_mean;
    mean_monotone_down = mean_monotone_down && mean <= prev_mean;
    prev_mean = mean;
  }

  PropertyReport r;
  r.name = "modulus_run";
  r.measured["lipschitz_initial"] = lip0;
  r.measured["lipschitz_final"] = lipschitz_constant(traj.final_frame());
  r.measured["lipschitz_growth"] = lip_growth;
  r.measured["profile_growth"] = profile_growth;
  r.measured["mean_drift"] = traj.final_frame().values.mean() - f0.values.mean();
  r.measured["mean_monotone"] = (mean_monotone_up || mean_monotone_down) ? 1.0 : 0.0;
  r.tolerances["tol_cmp"] = tol_cmp;
  r.inputs["f0"] = digest_of(f0);
  r.inputs["flow"] = to_string(which);
  r.inputs["t_end"] = num(time.t_end);
  r.inputs["scheme"] = to_string(time.scheme);
  r.pass = lip_growth <= tol_cmp && profile_growth <= tol_cmp;
  finish(r);
  return r;
}

namespace {

/// Random trigonometric polynomial scaled so that sum |a_k| k max(1, 2^{1-gamma} k^gamma) = target,
/// an upper bound for both ||f'||_inf and [f']_gamma.
FourierIC random_budget_descriptor(double L, double gamma, double target, UniformStream& rng, double offset) {
  const double base = 2.0 * kPi / L;
  FourierIC ic;
  ic.offset = offset;
  double bound = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const double amp = (2.0 * rng.next() - 1.0) / (k * k * k);
    const double phase = 2.0 * kPi * rng.next();
    ic.terms.push_back({amp, k * base, phase});
    const double kk = k * base;
    bound += std::abs(amp) * kk * std::max(1.0, std::pow(2.0, 1.0 - gamma) * std::pow(kk, gamma));
  }
  const double scale = bound > 0.0 ? target / bound : 0.0;
  for (auto& t : ic.terms) t.amplitude *= scale;
  return ic;
}

}  // namespace

GraphFunction random_budget_function(const Grid& grid, const RegularityBudget& budget, std::uint64_t seed,
                                     double offset) {
  validate(budget);
  UniformStream rng(seed);
  return sample(random_budget_descriptor(grid.L, budget.gamma, budget.m, rng, offset), grid);
}

double lipschitz_ratio(const GraphFunction& f, const GraphFunction& g, double gamma, const SolverParams& params) {
  const GraphFunction d = f - g;
  const double denom = c1gamma_norm(d, gamma) + sup_norm(d);
  if (denom == 0.0) return 0.0;
  const Vector hf = heleshaw_operator(f, params).values;
  const Vector hg = heleshaw_operator(g, params).values;
  return (hf - hg).cwiseAbs().maxCoeff() / denom;
}

PropertyReport lipschitz_H_check(std::uint64_t seed, const RegularityBudget& budget, int n_pairs, const Grid& grid,
                                 const SolverParams& params) {
  validate(budget);
  if (n_pairs < 3) throw InvalidArgument("lipschitz_H_check: n_pairs must be at least 3");
  const Grid coarse = make_grid(grid.L, grid.N / 2);
  SolverParams coarse_params = params;
  coarse_params.Ny = std::max(8, params.Ny / 2);

  double fine_max = 0.0, coarse_max = 0.0;
  for (int p = 0; p < n_pairs; ++p) {
    UniformStream rng(seed * 1000003ULL + static_cast<std::uint64_t>(p));
    const FourierIC base = random_budget_descriptor(grid.L, budget.gamma, 0.7 * budget.m, rng, 1.0);
    const double share = 0.01 + 0.29 * rng.next();
    FourierIC pert = random_budget_descriptor(grid.L, budget.gamma, share * budget.m, rng, 0.0);
    FourierIC other = base;
    for (const auto& t : pert.terms) other.terms.push_back(t);
    fine_max = std::max(fine_max, lipschitz_ratio(sample(base, grid), sample(other, grid), budget.gamma, params));
    coarse_max = std::max(coarse_max,
                          lipschitz_ratio(sample(base, coarse), sample(other, coarse), budget.gamma, coarse_params));
  }

  PropertyReport r;
  r.name = "lipschitz_H_check";
  r.measured["ratio_fine"] = fine_max;
  r.measured["ratio_coarse"] = coarse_max;
  const double lo = std::min(fine_max, coarse_max), hi = std::max(fine_max, coarse_max);
  const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  r.measured["resolution_spread"] = spread;
  r.tolerances["max_spread"] = 2.0;
  r.inputs["seed"] = std::to_string(seed);
  r.inputs["gamma"] = num(budget.gamma);
  r.inputs["m"] = num(budget.m);
  r.inputs["n_pairs"] = std::to_string(n_pairs);
  r.pass = std::isfinite(fine_max) && std::isfinite(coarse_max) && spread <= 2.0;
  finish(r);
  return r;
}

PropertyReport convolution_check(const GraphFunction& u, double epsilon) {
  const ConvolutionParams p{epsilon, ConvolutionAxis::space};
  const Vector fast = inf_convolution(u, p).values;
  const Vector up = sup_convolution(u, p).values;
  const Grid& g = u.grid;

  double mismatch = 0.0;
  for (int i = 0; i < g.N; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int image = -1; image <= 1; ++image)
      for (int k = 0; k < g.N; ++k)
        best = std::min(best, quadratic_cost(u.values[k], g.x(i), g.x(k) + image * g.L, epsilon));
    mismatch = std::max(mismatch, std::abs(best - fast[i]));
  }
  const double order_violation = std::max((fast - u.values).maxCoeff(), (u.values - up).maxCoeff());

  PropertyReport r;
  r.name = "convolution_check";
  r.measured["brute_force_mismatch"] = mismatch;
  r.measured["ordering_violation"] = std::max(0.0, order_violation);
  r.measured["sup_lipschitz"] = lipschitz_constant(GraphFunction(g, up));
  r.tolerances["exact"] = 0.0;
  r.inputs["u"] = digest_of(u);
  r.inputs["epsilon"] = num(epsilon);
  r.pass = mismatch == 0.0 && order_violation <= 0.0;
  finish(r);
  return r;
}

PropertyReport bump_check(double R, const Grid& grid) {
  const double x0 = grid.x(grid.N / 4);
  const GraphFunction phi = bump(R, x0, grid);
  const double grad = lipschitz_constant(phi);
  PropertyReport r;
  r.name = "bump_check";
  r.measured["max_gradient"] = grad;
  r.measured["min_value"] = phi.values.minCoeff();
  r.measured["max_value"] = phi.values.maxCoeff();
  r.measured["value_at_x0"] = phi.values[grid.N / 4];
  r.tolerances["gradient_bound"] = 1.0 / R + grid.dx;
  r.inputs["R"] = num(R);
  r.inputs["N"] = std::to_string(grid.N);
  r.pass = grad <= 1.0 / R + grid.dx && phi.values.minCoeff() >= 0.0 && phi.values.maxCoeff() <= 1.0 &&
           phi.values[grid.N / 4] == 0.0;
  finish(r);
  return r;
}

SuiteOptions default_suite_options(const Grid& grid) {
  SuiteOptions o;
  o.grid = grid;
  o.solver = default_solver_params(grid);
  return o;
}

std::vector<std::string> standard_check_names() {
  return {"wf_bounds",  "max_principle", "invariance",  "gcp",          "splitting", "comparison", "modulus",
          "shift_equivalence", "lipschitz_H",   "direct_H", "convolution", "bump"};
}

std::vector<PropertyReport> run_check(const std::string& name, const SuiteOptions& o) {
  const Grid& grid = o.grid;
  const auto data = standard_initial_data(grid);
  TimeParams time;
  time.t_end = o.t_end;
  time.scheme = o.scheme;
  const double tol_cmp = comparison_tolerance(grid, o.cmp_c);
  std::vector<PropertyReport> out;
  auto tag = [&](PropertyReport r, const std::string& label) {
    r.inputs["case"] = label;
    r.digest = input_digest(r);
    out.push_back(std::move(r));
  };

  if (name == "wf_bounds") {
    for (const auto& d : data) tag(wf_bounds_check(d.f, o.solver), d.name);
  } else if (name == "max_principle") {
    for (const auto& d : data) tag(max_principle_check(solve_shifted_W(d.f, o.solver)), d.name);
  } else if (name == "invariance") {
    const double k = 2.0 * kPi / grid.L;
    tag(invariance_check(sample(ConstantIC{0.0}, grid), 5.0, grid.N / 4, o.solver), "flat");
    tag(invariance_check(sample(FourierIC{{{0.3, 2.0 * k, 0.0}}, 1.0}, grid), -2.0,
                         static_cast<int>(std::lround(grid.N / 3.0)), o.solver),
        "sine_0.3_k2");
    tag(invariance_check(sample(RandomLipschitzIC{1.0, 5, 0.0}, grid), 10.0, 1, o.solver), "lipschitz_seed5");
    for (const auto& d : data) tag(invariance_check(d.f, 3.5, grid.N / 8 + 1, o.solver), d.name);
  } else if (name == "gcp") {
    const double tol = calibrate_gcp_tolerance(grid, o.solver);
    UniformStream rng(o.seed * 7919ULL + 17ULL);
    for (int p = 0; p < o.gcp_pairs; ++p) {
      const auto& d = data[p % data.size()];
      const double amp = 0.01 + 0.19 * rng.next();
      const int node = static_cast<int>(rng.next() * grid.N) % grid.N;
      tag(gcp_check(d.f, amp, grid.x(node), o.solver, tol), d.name + "_pair" + std::to_string(p));
    }
  } else if (name == "splitting") {
    const double tol = calibrate_gcp_tolerance(grid, o.solver);
    const double x0 = grid.x(0);
    const std::vector<double> radii{grid.L / 32, grid.L / 16, grid.L / 8};
    tag(splitting_check(sample(ConstantIC{1.0}, grid), far_field_bump(grid, 1.0, x0), x0, radii, o.solver, tol),
        "flat_far_bump");
  } else if (name == "comparison") {
    const double x0 = grid.x(grid.N / 3);
    for (const auto& d : data) {
      const GraphFunction g0 = d.f + touching_profile(grid, 0.1, x0);
      tag(comparison_run(d.f, g0, time, Flow::muskat, o.solver, tol_cmp), d.name + "_touching");
    }
  } else if (name == "modulus") {
    for (const auto& d : data) tag(modulus_run(d.f, time, Flow::muskat, o.solver, tol_cmp), d.name);
  } else if (name == "shift_equivalence") {
    for (const auto& d : data) tag(shift_equivalence(d.f, time, o.solver), d.name);
  } else if (name == "lipschitz_H") {
    tag(lipschitz_H_check(o.seed + 12, RegularityBudget{0.5, 1.0}, std::max(3, o.lipschitz_pairs), grid, o.solver),
        "budget_m1_gamma0.5");
  } else if (name == "direct_H") {
    tag(direct_H_consistency(sample(ConstantIC{1.0}, grid), o.solver, o.direct_h_c), "constant_1");
    const double k = 2.0 * kPi / grid.L;
    tag(direct_H_consistency(sample(FourierIC{{{0.1, k, 0.0}}, 1.0}, grid), o.solver, o.direct_h_c), "sine_0.1");
    tag(direct_H_consistency(sample(FourierIC{{{0.5, k, 0.0}}, 1.0}, grid), o.solver, o.direct_h_c), "sine_0.5");
  } else if (name == "convolution") {
    for (const auto& d : data) tag(convolution_check(d.f, 0.1), d.name);
  } else if (name == "bump") {
    for (double R : {1.0, 2.0, 4.0}) tag(bump_check(R, grid), "R" + num(R));
  } else {
    throw InvalidArgument("unknown check '" + name + "'");
  }
  return out;
}

std::vector<PropertyReport> run_standard_suite(const SuiteOptions& opts) {
  std::vector<PropertyReport> all;
  for (const auto& name : standard_check_names()) {
    auto part = run_check(name, opts);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace muskat
