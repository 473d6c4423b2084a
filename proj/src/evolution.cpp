#include "muskat/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "muskat/operators.hpp"

namespace muskat {

const char* to_string(Scheme s) { return s == Scheme::euler ? "euler" : "rk2"; }
const char* to_string(Flow w) { return w == Flow::muskat ? "muskat" : "heleshaw"; }

void validate(const TimeParams& p) {
  if (!(p.t_end > 0.0) || !std::isfinite(p.t_end)) throw InvalidArgument("TimeParams: t_end must be positive");
  if (!(p.cfl > 0.0 && p.cfl <= 1.0)) throw InvalidArgument("TimeParams: cfl must lie in (0, 1]");
  if (p.snapshot_stride < 1) throw InvalidArgument("TimeParams: snapshot_stride must be positive");
}

namespace {

Vector rate(const Vector& values, const Grid& grid, Flow which, const SolverParams& params, StepDiagnostics* diag) {
  const GraphFunction f(grid, values);
  const OperatorPair ops = muskat_and_heleshaw(f, params);
  const DtnResult& r = (which == Flow::muskat) ? ops.muskat : ops.heleshaw;
  if (diag) {
    diag->max_abs_operator = std::max(diag->max_abs_operator, r.values.cwiseAbs().maxCoeff());
    diag->residual = std::max(diag->residual, r.diagnostics.residual);
  }
  return r.values;
}

}  // namespace

GraphFunction step(const GraphFunction& f, double dt, Flow which, const SolverParams& params, Scheme scheme,
                   StepDiagnostics* diag) {
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  StepDiagnostics local;
  StepDiagnostics* d = diag ? diag : &local;
  d->dt = dt;

  Vector next;
  if (scheme == Scheme::euler) {
    next = f.values + dt * rate(f.values, f.grid, which, params, d);
  } else {
    const Vector half = f.values + 0.5 * dt * rate(f.values, f.grid, which, params, d);
    if (!half.allFinite()) throw InstabilityError("step: non-finite midpoint state", dt);
    next = f.values + dt * rate(half, f.grid, which, params, d);
  }

  if (!next.allFinite()) throw InstabilityError("step: non-finite state", dt);
  const double before = oscillation(f.values);
  const double after = oscillation(next);
  if (after > 10.0 * std::max(before, 1e-8)) {
    std::ostringstream os;
    os << "step: oscillation grew from " << before << " to " << after;
    throw InstabilityError(os.str(), dt);
  }
  return GraphFunction(f.grid, std::move(next));
}

namespace {

struct Stepper {
  const SolverParams& params;
  Flow which;
  Scheme scheme;
  int stride;
  Trajectory traj;
  GraphFunction current;
  double t = 0.0;
  int count = 0;

  Stepper(const GraphFunction& f0, const SolverParams& p, Flow w, Scheme s, int k)
      : params(p), which(w), scheme(s), stride(k), current(f0) {
    traj.times.push_back(0.0);
    traj.frames.push_back(f0);
  }

  void advance(double h, double t_next, int halvings) {
    StepDiagnostics d;
    current = step(current, h, which, params, scheme, &d);
    d.t = t_next;
    d.halvings = halvings;
    t = t_next;
    ++count;
    traj.steps.push_back(d);
    if (count % stride == 0) {
      traj.times.push_back(t);
      traj.frames.push_back(current);
    }
  }

  void finish() {
    if (traj.times.back() != t) {
      traj.times.push_back(t);
      traj.frames.push_back(current);
    }
  }
};

}  // namespace

Trajectory evolve(const GraphFunction& f0, const TimeParams& time, Flow which, const SolverParams& params) {
  validate(time);
  validate(params);
  Stepper st(f0, params, which, time.scheme, time.snapshot_stride);

  // Uniform steps that land exactly on t_end.
  const double nominal = time.dt(f0.grid);
  const long n = std::max(1L, static_cast<long>(std::ceil(time.t_end / nominal - 1e-9)));
  double dt = time.t_end / static_cast<double>(n);

  while (st.t < time.t_end) {
    int retries = 0;
    for (;;) {
      double h = std::min(dt, time.t_end - st.t);
      double t_next = st.t + h;
      if (time.t_end - t_next < 1e-9 * dt) {
        t_next = time.t_end;
        h = t_next - st.t;
      }
      try {
        st.advance(h, t_next, retries);
        break;
      } catch (const InstabilityError& e) {
        if (++retries > 5) {
          st.finish();
          throw EvolutionFailure(std::string("evolve: persistent instability: ") + e.what(), st.traj);
        }
        dt *= 0.5;
      }
    }
  }
  st.finish();
  return st.traj;
}

Trajectory evolve_schedule(const GraphFunction& f0, const std::vector<double>& dts, Scheme scheme, int stride,
                           Flow which, const SolverParams& params) {
  validate(params);
  if (stride < 1) throw InvalidArgument("evolve_schedule: stride must be positive");
  Stepper st(f0, params, which, scheme, stride);
  for (double h : dts) {
    try {
      st.advance(h, st.t + h, 0);
    } catch (const InstabilityError& e) {
      st.finish();
      throw EvolutionFailure(std::string("evolve_schedule: ") + e.what(), st.traj);
    }
  }
  st.finish();
  return st.traj;
}

std::vector<double> step_sizes(const Trajectory& traj) {
  std::vector<double> dts;
  dts.reserve(traj.steps.size());
  for (const auto& s : traj.steps) dts.push_back(s.dt);
  return dts;
}

PropertyReport shift_equivalence(const GraphFunction& f0, const TimeParams& time, const SolverParams& params) {
  const Trajectory f = evolve(f0, time, Flow::muskat, params);
  const Trajectory g = evolve_schedule(f0, step_sizes(f), time.scheme, time.snapshot_stride, Flow::heleshaw, params);

  double deviation = 0.0;
  const std::size_t frames = std::min(f.frames.size(), g.frames.size());
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = f.times[k];
    const double dev = ((g.frames[k].values - f.frames[k].values).array() - t).abs().maxCoeff();
    deviation = std::max(deviation, dev);
  }

  PropertyReport r;
  r.name = "shift_equivalence";
  r.measured["max_deviation"] = deviation;
  r.measured["frames"] = static_cast<double>(frames);
  r.measured["time_mismatch"] = f.times.size() == g.times.size() ? 0.0 : 1.0;
  r.tolerances["tol"] = 100.0 * params.rel_tol;
  r.inputs["t_end"] = std::to_string(time.t_end);
  r.inputs["scheme"] = to_string(time.scheme);
  r.inputs["f0"] = digest_doubles(f0.values.data(), f0.values.size());
  r.pass = deviation <= 100.0 * params.rel_tol && f.times.size() == g.times.size();
  r.digest = input_digest(r);
  return r;
}

}  // namespace muskat
