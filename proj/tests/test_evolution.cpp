#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "muskat/evolution.hpp"

using namespace muskat;
using std::numbers::pi;

namespace {

GraphFunction sine(const Grid& g, double amp, double k, double offset = 0.0) {
  return sample(FourierIC{{{amp, k, 0.0}}, offset}, g);
}

/// Projection of f onto sin(x): (2/N) sum f_i sin(x_i).
double sine_amplitude(const GraphFunction& f) {
  double a = 0.0;
  for (int i = 0; i < f.grid.N; ++i) a += f[i] * std::sin(f.grid.x(i));
  return 2.0 * a / f.grid.N;
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("TimeParams") {
  const Grid g = make_grid(2 * pi, 64);
  TimeParams t;
  CHECK(t.cfl == 0.5);
  CHECK(t.dt(g) == doctest::Approx(0.5 * g.dx));
  CHECK(t.dt(g) <= g.dx);
  CHECK_NOTHROW(validate(t));
  TimeParams bad = t;
  bad.t_end = 0.0;
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
  bad = t;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
  bad = t;
  bad.cfl = 0.0;
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
  bad = t;
  bad.snapshot_stride = 0;
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("step") {
  const Grid g = make_grid(2 * pi, 128);
  const SolverParams p = default_solver_params(g);
  const double dt = 0.5 * g.dx;
  const GraphFunction c = sample(ConstantIC{1.3}, g);

  CHECK(max_abs(step(c, dt, Flow::muskat, p).values - c.values) <= dt * 10 * p.rel_tol);
  CHECK(max_abs(step(c, dt, Flow::heleshaw, p).values.array() - 1.3 - dt) <= dt * 10 * p.rel_tol);
  CHECK(max_abs(step(c, dt, Flow::heleshaw, p, Scheme::rk2).values.array() - 1.3 - dt) <= dt * 10 * p.rel_tol);

  const double eps = 1e-3;
  const GraphFunction f = sine(g, eps, 1.0, 1.0);
  const double a_euler = sine_amplitude(step(f, dt, Flow::muskat, p)) / eps;
  const double a_rk2 = sine_amplitude(step(f, dt, Flow::muskat, p, Scheme::rk2)) / eps;
  CHECK(a_euler == doctest::Approx(1.0 - dt).epsilon(1e-4));
  CHECK(a_rk2 == doctest::Approx(1.0 - dt + dt * dt / 2).epsilon(1e-4));

  StepDiagnostics d;
  step(f, dt, Flow::muskat, p, Scheme::euler, &d);
  CHECK(d.dt == dt);
  CHECK(d.max_abs_operator == doctest::Approx(eps).epsilon(0.02));
  CHECK(d.residual <= p.rel_tol);

  CHECK_THROWS_AS(step(f, 0.0, Flow::muskat, p), InvalidArgument);
  CHECK_THROWS_AS(step(f, -dt, Flow::muskat, p), InvalidArgument);
  // A short wave with a step far beyond CFL is amplified ~|1 - k dt|.
  CHECK_THROWS_AS(step(sine(g, 0.1, 20.0), 5.0, Flow::muskat, p), InstabilityError);
}

TEST_CASE("evolve: stationary and unit-speed constants") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 1.0;
  const GraphFunction two = sample(ConstantIC{2.0}, g);
  const Trajectory m = evolve(two, t, Flow::muskat, p);
  CHECK(max_abs(m.final_frame().values.array().matrix() - two.values) <= 1e-8);
  const Trajectory h = evolve(two, t, Flow::heleshaw, p);
  CHECK(max_abs(h.final_frame().values.array().matrix() - Vector::Constant(g.N, 3.0)) <= 1e-6);
  CHECK(h.times.back() == 1.0);
}

TEST_CASE("evolve: trajectory layout and snapshot stride") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 0.3;
  t.snapshot_stride = 2;
  const GraphFunction f0 = sine(g, 0.1, 1.0, 1.0);
  const Trajectory tr = evolve(f0, t, Flow::muskat, p);
  CHECK(tr.times.front() == 0.0);
  CHECK((tr.frames.front().values - f0.values).norm() == 0.0);
  for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
  CHECK(tr.times.back() == 0.3);
  const std::size_t n = tr.steps.size();
  CHECK(n == static_cast<std::size_t>(std::ceil(0.3 / (0.5 * g.dx))));
  CHECK(tr.frames.size() == 1 + n / 2 + (n % 2));
  for (const auto& s : tr.steps) {
    CHECK(s.dt <= 0.5 * g.dx + 1e-15);
    CHECK(s.halvings == 0);
  }
  // Replaying the recorded steps reproduces the run bitwise.
  const Trajectory again = evolve_schedule(f0, step_sizes(tr), t.scheme, 2, Flow::muskat, p);
  REQUIRE(again.frames.size() == tr.frames.size());
  for (std::size_t k = 0; k < tr.frames.size(); ++k) CHECK((again.frames[k].values - tr.frames[k].values).norm() == 0.0);
}

TEST_CASE("evolve: linearized decay e^{-t}") {
  const Grid g = make_grid(2 * pi, 128);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 0.5;
  const Trajectory tr = evolve(sine(g, 1e-3, 1.0, 1.0), t, Flow::muskat, p);
  for (std::size_t k = 0; k < tr.frames.size(); ++k) {
    const double expected = 1e-3 * std::exp(-tr.times[k]);
    CHECK(sine_amplitude(tr.frames[k]) == doctest::Approx(expected).epsilon(0.02));
  }
}

TEST_CASE("evolve_schedule failure keeps the partial trajectory") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  try {
    evolve_schedule(sine(g, 0.1, 20.0), {0.01, 5.0}, Scheme::euler, 1, Flow::muskat, p);
    FAIL("expected EvolutionFailure");
  } catch (const EvolutionFailure& e) {
    CHECK(e.partial().frames.size() == 2);
    CHECK(e.partial().times.back() == 0.01);
  }
}

TEST_CASE("shift equivalence between the two flows") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 1.0;
  const PropertyReport zero = shift_equivalence(sample(ConstantIC{0.0}, g), t, p);
  CHECK(zero.pass);
  CHECK(zero.measured.at("max_deviation") <= 1e-8);

  t.t_end = 0.25;
  const PropertyReport rough = shift_equivalence(sample(RandomLipschitzIC{1.0, 7, 0.0}, g), t, p);
  CHECK(rough.pass);
  CHECK(rough.measured.at("max_deviation") <= 1e-7);

  t.scheme = Scheme::rk2;
  const PropertyReport rk = shift_equivalence(sine(g, 0.1, 1.0, 1.0), t, p);
  CHECK(rk.pass);
  CHECK(rk.measured.at("max_deviation") <= 1e-6);
}

TEST_CASE("equivariance of the evolution") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 0.25;
  const GraphFunction f0 = sample(RandomLipschitzIC{1.0, 12, 0.0}, g);
  const Trajectory base = evolve(f0, t, Flow::muskat, p);
  const Trajectory lifted = evolve(f0 + 5.0, t, Flow::muskat, p);
  const Trajectory moved = evolve(translate(f0, 11), t, Flow::muskat, p);
  for (std::size_t k = 0; k < base.frames.size(); ++k) {
    CHECK(max_abs(lifted.frames[k].values.array().matrix() - (base.frames[k].values.array() + 5.0).matrix()) <=
          100 * p.rel_tol);
    CHECK(max_abs(moved.frames[k].values - translate(base.frames[k], 11).values) <= 100 * p.rel_tol);
  }
}

TEST_CASE("mean drift is reported for the sinusoid family") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  TimeParams t;
  t.t_end = 0.25;
  for (double eps : {1e-3, 0.1, 0.5}) {
    const Trajectory tr = evolve(sine(g, eps, 1.0, 1.0), t, Flow::muskat, p);
    std::vector<double> means;
    for (const auto& f : tr.frames) means.push_back(f.values.mean());
    bool up = true, down = true;
    for (std::size_t k = 1; k < means.size(); ++k) {
      up = up && means[k] >= means[k - 1];
      down = down && means[k] <= means[k - 1];
    }
    MESSAGE("eps " << eps << ": mean drift " << means.back() - means.front() << std::string(up || down ? " (monotone)" : " (not monotone)"));
    CHECK(std::isfinite(means.back()));
  }
}
