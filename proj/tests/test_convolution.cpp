#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "muskat/convolution.hpp"
#include "oracles.hpp"

using namespace muskat;
using std::numbers::pi;

namespace {

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Seeded rough data of mixed character: random walk, spikes and plateaus.
GraphFunction random_field(const Grid& g, std::uint64_t seed) {
  UniformStream rng(seed);
  Vector v(g.N);
  double level = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const double r = rng.next();
    if (r < 0.1)
      v[i] = 5.0 * (rng.next() - 0.5);
    else if (r < 0.3)
      v[i] = level;
    else
      v[i] = level += rng.next() - 0.5;
  }
  return GraphFunction(g, v);
}

}  // namespace

TEST_CASE("quadratic_cost") {
  CHECK(quadratic_cost(1.0, 0.5, 0.25, 0.5) == 1.0 + 0.0625);
}

TEST_CASE("inf/sup convolution of constants") {
  const Grid g = make_grid(2 * pi, 64);
  const GraphFunction c = sample(ConstantIC{3.25}, g);
  for (double eps : {0.01, 1.0}) {
    CHECK((inf_convolution(c, {eps}).values.array() == 3.25).all());
    CHECK((sup_convolution(c, {eps}).values.array() == 3.25).all());
  }
}

TEST_CASE("fast envelope equals brute force exactly") {
  for (int N : {8, 37, 64, 200}) {
    const Grid g = make_grid(2 * pi, N);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const GraphFunction u = random_field(g, seed * 31 + N);
      for (double eps : {1e-3, 0.05, 0.7, 20.0}) {
        const std::vector<double> brute = oracle::brute_inf_convolution(as_std(u.values), g.L, eps);
        const Vector fast = inf_convolution(u, {eps}).values;
        for (int i = 0; i < N; ++i) REQUIRE(fast[i] == brute[i]);
      }
    }
  }
}

TEST_CASE("ordering, duality, monotonicity in eps and idempotence direction") {
  const Grid g = make_grid(2 * pi, 128);
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const GraphFunction u = random_field(g, seed);
    const Vector lo = inf_convolution(u, {0.1}).values;
    const Vector hi = sup_convolution(u, {0.1}).values;
    CHECK((lo.array() <= u.values.array()).all());
    CHECK((hi.array() >= u.values.array()).all());
    CHECK((hi - (-inf_convolution(-u, {0.1})).values).norm() == 0.0);

    const Vector wide = inf_convolution(u, {0.5}).values;
    CHECK((wide.array() <= lo.array()).all());
    const Vector twice = inf_convolution(GraphFunction(g, lo), {0.1}).values;
    CHECK((twice.array() <= lo.array()).all());

    // Convergence as eps -> 0 is monotone over {1, 0.1, 0.01}.
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 0.1, 0.01}) {
      const double gap = (u.values - inf_convolution(u, {eps}).values).cwiseAbs().maxCoeff();
      CHECK(gap <= previous);
      previous = gap;
    }
  }
}

TEST_CASE("tent Moreau envelope is the Huber profile") {
  const Grid g = make_grid(2 * pi, 512);
  const double x0 = g.x(200);
  Vector tent(g.N);
  for (int i = 0; i < g.N; ++i) tent[i] = g.periodic_distance(g.x(i), x0);
  const double eps = 0.2;
  const Vector env = inf_convolution(GraphFunction(g, tent), {eps}).values;
  double err = 0.0;
  for (int i = 0; i < g.N; ++i) err = std::max(err, std::abs(env[i] - oracle::huber(tent[i], eps)));
  CHECK(err <= g.dx);
}

TEST_CASE("sup convolution Lipschitz constant scales like 1/eps") {
  const Grid g = make_grid(2 * pi, 256);
  const GraphFunction u = sample(FourierIC{{{1.0, 1.0, 0.0}, {0.5, 7.0, 0.0}}, 0.0}, g);
  const double osc = oscillation(u.values);
  for (double eps : {0.05, 0.2, 1.0}) {
    const double lip = lipschitz_constant(sup_convolution(u, {eps}));
    const double bound = std::sqrt(2.0 * osc / eps) + lipschitz_constant(u);
    MESSAGE("eps " << eps << " lip " << lip << " reference " << bound);
    CHECK(lip <= bound);
  }
}

TEST_CASE("space-time convolution matches brute force") {
  const Grid g = make_grid(2 * pi, 16);
  Trajectory traj;
  traj.times = {0.0, 0.1, 0.25, 0.3, 0.9};
  for (std::size_t k = 0; k < traj.times.size(); ++k) traj.frames.push_back(random_field(g, 100 + k));
  const double eps = 0.05;
  const Trajectory fast = inf_convolution(traj, {eps, ConvolutionAxis::space_time});
  const Trajectory space_only = inf_convolution(traj, {eps, ConvolutionAxis::space});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    for (int i = 0; i < g.N; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < traj.times.size(); ++q) {
        // Same association as the separable passes: space first, then time.
        double space = std::numeric_limits<double>::infinity();
        for (int image = -1; image <= 1; ++image)
          for (int m = 0; m < g.N; ++m)
            space = std::min(space, quadratic_cost(traj.frames[q][m], g.x(i), g.x(m) + image * g.L, eps));
        best = std::min(best, quadratic_cost(space, traj.times[k], traj.times[q], eps));
      }
      REQUIRE(fast.frames[k][i] == best);
      CHECK(fast.frames[k][i] <= space_only.frames[k][i]);
    }
  }
  const Trajectory up = sup_convolution(traj, {eps, ConvolutionAxis::space_time});
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    CHECK((up.frames[k].values.array() >= traj.frames[k].values.array()).all());

  Trajectory unordered = traj;
  std::swap(unordered.times[1], unordered.times[2]);
  CHECK_THROWS_AS(inf_convolution(unordered, {eps, ConvolutionAxis::space_time}), InvalidArgument);
  CHECK_THROWS_AS(inf_convolution(traj.frames[0], {0.0}), InvalidArgument);
  CHECK_THROWS_AS(inf_convolution(traj.frames[0], {-1.0}), InvalidArgument);
}

TEST_CASE("bump") {
  const Grid g = make_grid(2 * pi, 256);
  const double x0 = g.x(64);
  for (double R : {1.0, 2.0, 4.0}) {
    const GraphFunction b = bump(R, x0, g);
    CHECK(b[64] == 0.0);
    CHECK(b.values.minCoeff() >= 0.0);
    CHECK(b.values.maxCoeff() <= 1.0);
    CHECK(lipschitz_constant(b) <= 1.0 / R + g.dx);
    // Phi(1) = 1/2 at periodic distance R, to O(dx); such points exist only for R <= L/2.
    if (R > g.L / 2) continue;
    const int k = static_cast<int>(std::lround(R / g.dx));
    CHECK(std::abs(b[g.wrap(64 + k)] - 0.5) <= g.dx);
    CHECK(std::abs(b[g.wrap(64 - k)] - 0.5) <= g.dx);
  }
  CHECK_THROWS_AS(bump(0.5, x0, g), InvalidArgument);
}
