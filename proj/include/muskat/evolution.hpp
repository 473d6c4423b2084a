#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/grid.hpp"
#include "muskat/harmonic.hpp"
#include "muskat/report.hpp"

namespace muskat {

enum class Scheme { euler, rk2 };
enum class Flow { muskat, heleshaw };

const char* to_string(Scheme s);
const char* to_string(Flow w);

struct TimeParams {
  double t_end = 1.0;
  double cfl = 0.5;
  Scheme scheme = Scheme::euler;
  int snapshot_stride = 1;

  /// Nominal step cfl * dx; the operators are first order in space.
  double dt(const Grid& grid) const { return cfl * grid.dx; }
};

void validate(const TimeParams& p);

struct StepDiagnostics {
  double t = 0.0;   // time at the end of the step
  double dt = 0.0;
  double max_abs_operator = 0.0;
  double residual = 0.0;
  int halvings = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GraphFunction> frames;
  std::vector<StepDiagnostics> steps;

  const GraphFunction& final_frame() const { return frames.back(); }
};

class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

class EvolutionFailure : public std::runtime_error {
 public:
  EvolutionFailure(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// One explicit step of f_t = M(f) or f_t = H(f). Euler, or the midpoint rule for rk2.
/// Throws InstabilityError on non-finite output or a >10x single-step growth of osc(f).
GraphFunction step(const GraphFunction& f, double dt, Flow which, const SolverParams& params,
                   Scheme scheme = Scheme::euler, StepDiagnostics* diag = nullptr);

/// Fixed-step integration to t_end; on instability the step is halved and
/// retried, at most five times in a row, before EvolutionFailure.
Trajectory evolve(const GraphFunction& f0, const TimeParams& time, Flow which, const SolverParams& params);

/// Replays an explicit step-size sequence (e.g. the one recorded by another run).
Trajectory evolve_schedule(const GraphFunction& f0, const std::vector<double>& dts, Scheme scheme, int stride,
                           Flow which, const SolverParams& params);

std::vector<double> step_sizes(const Trajectory& traj);

/// Runs Muskat from f0, replays its step sizes for Hele-Shaw from f0 and
/// measures max_t ||g(t) - f(t) - t||_inf against 100 rel_tol.
PropertyReport shift_equivalence(const GraphFunction& f0, const TimeParams& time, const SolverParams& params);

}  // namespace muskat
