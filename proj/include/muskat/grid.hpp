#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace muskat {

using Vector = Eigen::VectorXd;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic horizontal grid: node i sits at x_i = i * dx on a torus of length L.
struct Grid {
  double L = 0.0;
  int N = 0;
  double dx = 0.0;

  double x(int i) const { return i * dx; }
  int wrap(int i) const { return ((i % N) + N) % N; }

  /// Distance on the torus between node positions a and b.
  double periodic_distance(double a, double b) const {
    double d = std::fmod(std::abs(a - b), L);
    return std::min(d, L - d);
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.L == b.L && a.N == b.N; }
};

Grid make_grid(double L, int N);

struct RegularityMeta {
  std::optional<double> lipschitz;
  std::optional<double> holder_gamma;
};

/// Sampled periodic graph f on a Grid. Values are always finite.
struct GraphFunction {
  Grid grid;
  Vector values;
  RegularityMeta meta;

  GraphFunction() = default;
  GraphFunction(const Grid& g, Vector v, RegularityMeta m = {});

  int size() const { return grid.N; }
  double operator[](int i) const { return values[i]; }
};

GraphFunction operator+(const GraphFunction& f, double c);
GraphFunction operator-(const GraphFunction& f, double c);
GraphFunction operator*(double a, const GraphFunction& f);
GraphFunction operator-(const GraphFunction& f);
GraphFunction operator+(const GraphFunction& f, const GraphFunction& g);
GraphFunction operator-(const GraphFunction& f, const GraphFunction& g);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// Shift by z grid nodes: result(x_i) = f(x_i + z dx).
GraphFunction translate(const GraphFunction& f, int z);

// Initial-condition descriptors.

struct ConstantIC {
  double value = 0.0;
};

struct FourierTerm {
  double amplitude = 0.0;
  double wavenumber = 1.0;
  double phase = 0.0;
};

/// offset + sum_j amplitude_j sin(wavenumber_j x + phase_j)
struct FourierIC {
  std::vector<FourierTerm> terms;
  double offset = 0.0;
};

/// Periodic linear interpolation through (x, y) knots, x in [0, L).
struct PiecewiseLinearIC {
  std::vector<std::pair<double, double>> knots;
};

/// Cumulative sum of seeded uniform slopes in [-m, m], slopes and values mean-removed.
struct RandomLipschitzIC {
  double m = 1.0;
  std::uint64_t seed = 0;
  double offset = 0.0;
};

using InitialCondition = std::variant<ConstantIC, FourierIC, PiecewiseLinearIC, RandomLipschitzIC>;

GraphFunction sample(const InitialCondition& ic, const Grid& grid);

/// Portable seeded uniform doubles in [0, 1); identical streams on every platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}
  double next();

 private:
  std::uint64_t state_;
};

// Discrete derivatives and regularity estimators.

template <typename Derived>
Vector centered_derivative(const Eigen::MatrixBase<Derived>& v, double dx) {
  const Eigen::Index n = v.size();
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d[i] = (v[(i + 1) % n] - v[(i + n - 1) % n]) / (2.0 * dx);
  return d;
}

template <typename Derived>
Vector centered_second_derivative(const Eigen::MatrixBase<Derived>& v, double dx) {
  const Eigen::Index n = v.size();
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d[i] = (v[(i + 1) % n] - 2.0 * v[i] + v[(i + n - 1) % n]) / (dx * dx);
  return d;
}

template <typename Derived>
double oscillation(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.maxCoeff() - v.minCoeff();
}

/// max_i |v_{i+1} - v_i| / dx with periodic wrap.
template <typename Derived>
double periodic_lipschitz(const Eigen::MatrixBase<Derived>& v, double dx) {
  const Eigen::Index n = v.size();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    best = std::max(best, std::abs(v[(i + 1) % n] - v[i]) / dx);
  return best;
}

double lipschitz_constant(const GraphFunction& f);

struct ModulusProfile {
  std::vector<double> lags;
  std::vector<double> values;
};

ModulusProfile modulus(const GraphFunction& f, const std::vector<double>& lags);

/// Lags {dx, 2dx, 4dx, ...} up to L/2.
std::vector<double> dyadic_lags(const Grid& grid);

/// max over node pairs within distance `reach` of |f'(x) - f'(y)| / |x - y|^gamma.
double c1gamma_seminorm(const GraphFunction& f, double gamma, std::optional<double> reach = {});

/// ||f||_inf + ||f'||_inf + [f']_gamma, all discrete.
double c1gamma_norm(const GraphFunction& f, double gamma, std::optional<double> reach = {});

double sup_norm(const GraphFunction& f);

}  // namespace muskat
