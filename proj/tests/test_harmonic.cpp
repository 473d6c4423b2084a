#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "muskat/harmonic.hpp"
#include "oracles.hpp"

using namespace muskat;
using std::numbers::pi;

namespace {

GraphFunction sine(const Grid& g, double amp, double k, double offset = 0.0) {
  return sample(FourierIC{{{amp, k, 0.0}}, offset}, g);
}

/// Max error of the flat sin(kx) solve against the continuous finite-depth profile.
double flat_field_error(int N, double k) {
  const Grid g = make_grid(2 * pi, N);
  const SolverParams p = default_solver_params(g);
  const FlattenedField v = solve_potential(sample(ConstantIC{0.0}, g), sine(g, 1.0, k), p);
  double err = 0.0;
  for (int j = 0; j <= p.Ny; ++j)
    for (int i = 0; i < N; ++i)
      err = std::max(err, std::abs(v.values(j, i) - oracle::flat_mode_profile(k, p.A, v.s(j)) * std::sin(k * g.x(i))));
  return err;
}

/// Max error of the solve for exp(k y) sin(k x) below f = 0.3 sin(x).
double exp_mode_error(int N, double k) {
  const Grid g = make_grid(2 * pi, N);
  const SolverParams p = default_solver_params(g);
  const GraphFunction f = sine(g, 0.3, 1.0);
  Vector data(N);
  for (int i = 0; i < N; ++i) data[i] = oracle::exp_mode(k, g.x(i), f[i], 0.0);
  const FlattenedField v = solve_potential(f, GraphFunction(g, data), p);
  double err = 0.0;
  for (int j = 0; j <= p.Ny; ++j)
    for (int i = 0; i < N; ++i) err = std::max(err, std::abs(v.values(j, i) - oracle::exp_mode(k, g.x(i), f[i], v.s(j))));
  return err;
}

}  // namespace

TEST_CASE("SolverParams validation and defaults") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  CHECK(p.A == 2 * g.L);
  CHECK(p.Ny == 64);
  CHECK(p.rel_tol == 1e-10);
  CHECK_NOTHROW(validate(p));
  auto bad = [&](auto mutate) {
    SolverParams q = p;
    mutate(q);
    CHECK_THROWS_AS(validate(q), InvalidArgument);
  };
  bad([](SolverParams& q) { q.A = 0.0; });
  bad([](SolverParams& q) { q.Ny = 7; });
  bad([](SolverParams& q) { q.rel_tol = 0.0; });
  bad([](SolverParams& q) { q.rel_tol = 1e-3; });
  bad([](SolverParams& q) { q.max_iter = 0; });
  bad([](SolverParams& q) { q.stencil_order = 5; });
}

TEST_CASE("assemble") {
  const Grid g = make_grid(2 * pi, 32);
  SolverParams p = default_solver_params(g);
  p.Ny = 16;
  const double dx = g.dx, ds = p.ds();

  SUBCASE("flat, zero data: zero rhs and Laplace rows") {
    const GraphFunction zero = sample(ConstantIC{0.0}, g);
    const DiscreteSystem sys = assemble(zero, zero, p);
    CHECK(sys.rhs.squaredNorm() == 0.0);
    CHECK(sys.matrix.rows() == 32 * 16);
    const Eigen::Index r = sys.index(5, 7);
    CHECK(sys.matrix.coeff(r, r) == doctest::Approx(-2 / (dx * dx) - 2 / (ds * ds)));
    CHECK(sys.matrix.coeff(r, sys.index(5, 8)) == doctest::Approx(1 / (dx * dx)));
    CHECK(sys.matrix.coeff(r, sys.index(5, 6)) == doctest::Approx(1 / (dx * dx)));
    CHECK(sys.matrix.coeff(r, sys.index(4, 7)) == doctest::Approx(1 / (ds * ds)));
    CHECK(sys.matrix.coeff(r, sys.index(6, 7)) == doctest::Approx(1 / (ds * ds)));
    CHECK(sys.matrix.coeff(r, sys.index(6, 8)) == 0.0);
    // Periodic wrap and the mirrored bottom row.
    CHECK(sys.matrix.coeff(sys.index(3, 0), sys.index(3, 31)) == doctest::Approx(1 / (dx * dx)));
    const Eigen::Index b = sys.index(16, 4);
    CHECK(sys.matrix.coeff(b, sys.index(15, 4)) == doctest::Approx(2 / (ds * ds)));
    for (Eigen::Index k = 0; k < sys.matrix.rows(); ++k)
      CHECK(sys.matrix.row(k).sum() == doctest::Approx(k < 32 ? -1 / (ds * ds) : 0.0).scale(1 / (ds * ds)));
  }
  SUBCASE("constant f gives the flat system") {
    const GraphFunction data = sine(g, 1.0, 2.0);
    const DiscreteSystem a = assemble(sample(ConstantIC{0.0}, g), data, p);
    const DiscreteSystem b = assemble(sample(ConstantIC{3.7}, g), data, p);
    CHECK((Eigen::MatrixXd(a.matrix) - Eigen::MatrixXd(b.matrix)).norm() == 0.0);
    CHECK((a.rhs - b.rhs).norm() == 0.0);
  }
  SUBCASE("metric coefficient 1 + f'^2") {
    const double eps = 0.4;
    const DiscreteSystem sys = assemble(sine(g, eps, 1.0), sample(ConstantIC{0.0}, g), p);
    for (int i = 0; i < g.N; ++i) {
      const double c = std::cos(g.x(i));
      CHECK(sys.metric_sq(i) == doctest::Approx(1 + eps * eps * c * c).epsilon(dx * dx));
    }
  }
  SUBCASE("mismatched grids") {
    CHECK_THROWS_AS(assemble(sample(ConstantIC{0.0}, g), sample(ConstantIC{0.0}, make_grid(2 * pi, 64)), p),
                    InvalidArgument);
  }
}

TEST_CASE("solve_potential: flat modes") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  const GraphFunction flat = sample(ConstantIC{0.0}, g);
  for (double k : {1.0, 3.0}) {
    const GraphFunction data = sine(g, 1.0, k);
    const FlattenedField v = solve_potential(flat, data, p);
    CHECK(v.kind == FieldKind::potential);
    CHECK(v.residual <= p.rel_tol);
    CHECK((v.values.row(0).transpose() - data.values).norm() == 0.0);
    // Independent dense solve of the same discrete problem, mode by mode.
    const Eigen::VectorXd c = oracle::discrete_flat_profile(k, g.dx, p.ds(), p.Ny);
    double err = 0.0;
    for (int j = 0; j <= p.Ny; ++j)
      for (int i = 0; i < g.N; ++i) err = std::max(err, std::abs(v.values(j, i) - c[j] * std::sin(k * g.x(i))));
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("solve_potential: flat k = 1 against the continuous profile at N = 256") {
  CHECK(flat_field_error(256, 1.0) <= 0.01);
}

TEST_CASE("solve_potential: constants and the maximum principle") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  const GraphFunction f = sample(RandomLipschitzIC{1.0, 3, 0.0}, g);
  const FlattenedField v = solve_potential(f, sample(ConstantIC{2.5}, g), p);
  CHECK((v.values.array() - 2.5).abs().maxCoeff() <= p.rel_tol);
  const PropertyReport mp = max_principle_check(v);
  CHECK(mp.pass);
  CHECK(mp.measured.at("excess_above") == doctest::Approx(0.0).epsilon(1e-14));

  const FlattenedField s = solve_potential(sample(ConstantIC{0.0}, g), sine(g, 1.0, 1.0), p);
  CHECK(s.values.maxCoeff() <= 1.0 + s.tol_mp);
  CHECK(max_principle_check(s).pass);

  FlattenedField broken = s;
  broken.values(10, 5) = 1.5;
  CHECK_FALSE(max_principle_check(broken).pass);
  broken = s;
  broken.values(20, 7) = -1.5;
  CHECK_FALSE(max_principle_check(broken).pass);
}

TEST_CASE("solve_shifted_W") {
  const Grid g = make_grid(2 * pi, 256);
  const SolverParams p = default_solver_params(g);
  SUBCASE("constant") {
    const FlattenedField w = solve_shifted_W(sample(ConstantIC{1.25}, g), p);
    CHECK(w.kind == FieldKind::shifted_w);
    CHECK((w.values.array() - 1.25).abs().maxCoeff() <= p.rel_tol);
  }
  SUBCASE("small sine: first-order perturbation of the flat field") {
    const FlattenedField w = solve_shifted_W(sine(g, 1e-3, 1.0, 1.0), p);
    double err = 0.0;
    for (int j = 0; j <= p.Ny; ++j)
      for (int i = 0; i < g.N; ++i)
        err = std::max(err, std::abs(w.values(j, i) - (1.0 + 1e-3 * std::exp(-w.s(j)) * std::sin(g.x(i)))));
    CHECK(err <= 1e-5);
  }
  SUBCASE("bounds inf f <= phi <= sup f") {
    for (std::uint64_t seed : {11u, 12u}) {
      const GraphFunction f = sample(RandomLipschitzIC{2.0, seed, 0.0}, g);
      const FlattenedField w = solve_shifted_W(f, p);
      CHECK(w.values.minCoeff() >= f.values.minCoeff() - w.tol_mp);
      CHECK(w.values.maxCoeff() <= f.values.maxCoeff() + w.tol_mp);
    }
  }
}

TEST_CASE("linearity, vertical shift and translation") {
  const Grid g = make_grid(2 * pi, 64);
  const SolverParams p = default_solver_params(g);
  const GraphFunction f = sample(FourierIC{{{0.4, 1.0, 0.3}, {0.1, 3.0, 1.0}}, 0.5}, g);
  const GraphFunction g1 = sample(RandomLipschitzIC{1.0, 1, 0.0}, g);
  const GraphFunction g2 = sine(g, 1.0, 2.0, 0.2);
  const double a = 1.5, b = -0.75;

  const RowMatrix combo = solve_potential(f, a * g1 + b * g2, p).values;
  const RowMatrix parts = a * solve_potential(f, g1, p).values + b * solve_potential(f, g2, p).values;
  CHECK((combo - parts).cwiseAbs().maxCoeff() <= 10 * p.rel_tol);

  const RowMatrix shifted = solve_shifted_W(f + 4.0, p).values;
  const RowMatrix base = solve_shifted_W(f, p).values;
  CHECK((shifted.array() - base.array() - 4.0).abs().maxCoeff() <= 10 * p.rel_tol);

  for (int z : {1, 16, 45}) {
    const RowMatrix moved = solve_shifted_W(translate(f, z), p).values;
    const RowMatrix rotated = rotate_columns(solve_shifted_W(f, p), z).values;
    CHECK((moved - rotated).cwiseAbs().maxCoeff() <= 10 * p.rel_tol);
  }
}

TEST_CASE("direct factorization agrees with the preconditioned iteration") {
  const Grid g = make_grid(2 * pi, 64);
  SolverParams it = default_solver_params(g);
  SolverParams lu = it;
  lu.solver = LinearSolver::sparse_lu;
  const GraphFunction f = sample(RandomLipschitzIC{2.0, 8, 0.0}, g);
  const FlattenedField a = solve_shifted_W(f, it);
  const FlattenedField b = solve_shifted_W(f, lu);
  CHECK(a.residual <= it.rel_tol);
  CHECK(b.residual <= lu.rel_tol);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("solver failure carries the best residual") {
  const Grid g = make_grid(2 * pi, 32);
  SolverParams p = default_solver_params(g);
  p.rel_tol = 1e-30;
  p.max_iter = 3;
  try {
    solve_shifted_W(sine(g, 0.3, 1.0), p);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.best_residual() > 0.0);
    CHECK(e.best_residual() < 1e-6);
  }
}

TEST_CASE("grid convergence order") {
  SUBCASE("flat sine") {
    const double e1 = flat_field_error(32, 1.0), e2 = flat_field_error(64, 1.0), e3 = flat_field_error(128, 1.0);
    MESSAGE("flat errors " << e1 << " " << e2 << " " << e3);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
  }
  SUBCASE("exponential mode below a curved graph") {
    const double e1 = exp_mode_error(32, 2.0), e2 = exp_mode_error(64, 2.0), e3 = exp_mode_error(128, 2.0);
    MESSAGE("curved errors " << e1 << " " << e2 << " " << e3);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
  }
}
