#include "muskat/grid.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace muskat {

Grid make_grid(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("make_grid: period L must be positive");
  if (N < 8) throw InvalidArgument("make_grid: N must be at least 8");
  return Grid{L, N, L / N};
}

GraphFunction::GraphFunction(const Grid& g, Vector v, RegularityMeta m)
    : grid(g), values(std::move(v)), meta(m) {
  if (values.size() != grid.N) throw InvalidArgument("GraphFunction: sample count does not match grid");
  if (!values.allFinite()) throw InvalidArgument("GraphFunction: non-finite sample");
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw InvalidArgument(std::string(where) + ": functions live on different grids");
}

GraphFunction operator+(const GraphFunction& f, double c) {
  return GraphFunction(f.grid, (f.values.array() + c).matrix());
}

GraphFunction operator-(const GraphFunction& f, double c) { return f + (-c); }

GraphFunction operator*(double a, const GraphFunction& f) { return GraphFunction(f.grid, a * f.values); }

GraphFunction operator-(const GraphFunction& f) { return GraphFunction(f.grid, -f.values); }

GraphFunction operator+(const GraphFunction& f, const GraphFunction& g) {
  require_same_grid(f.grid, g.grid, "operator+");
  return GraphFunction(f.grid, f.values + g.values);
}

GraphFunction operator-(const GraphFunction& f, const GraphFunction& g) {
  require_same_grid(f.grid, g.grid, "operator-");
  return GraphFunction(f.grid, f.values - g.values);
}

GraphFunction translate(const GraphFunction& f, int z) {
  const int n = f.grid.N;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = f.values[f.grid.wrap(i + z)];
  return GraphFunction(f.grid, std::move(v), f.meta);
}

double UniformStream::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

GraphFunction sample_one(const ConstantIC& c, const Grid& grid) {
  GraphFunction f(grid, Vector::Constant(grid.N, c.value));
  f.meta.lipschitz = 0.0;
  return f;
}

GraphFunction sample_one(const FourierIC& s, const Grid& grid) {
  const double base = 2.0 * std::numbers::pi / grid.L;
  double lip = 0.0;
  for (const auto& t : s.terms) {
    const double ratio = t.wavenumber / base;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::abs(ratio))) {
      std::ostringstream os;
      os << "sample: fourier wavenumber " << t.wavenumber << " is not an integer multiple of 2*pi/L";
      throw InvalidArgument(os.str());
    }
    lip += std::abs(t.amplitude * t.wavenumber);
  }
  Vector v(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    double acc = s.offset;
    for (const auto& t : s.terms) acc += t.amplitude * std::sin(t.wavenumber * grid.x(i) + t.phase);
    v[i] = acc;
  }
  GraphFunction f(grid, std::move(v));
  f.meta.lipschitz = lip;
  return f;
}

GraphFunction sample_one(const PiecewiseLinearIC& s, const Grid& grid) {
  if (s.knots.empty()) throw InvalidArgument("sample: piecewise-linear descriptor needs at least one knot");
  auto knots = s.knots;
  for (auto& k : knots) {
    if (!std::isfinite(k.first) || !std::isfinite(k.second))
      throw InvalidArgument("sample: non-finite piecewise-linear knot");
    k.first = std::fmod(k.first, grid.L);
    if (k.first < 0) k.first += grid.L;
  }
  std::sort(knots.begin(), knots.end());
  for (std::size_t k = 1; k < knots.size(); ++k)
    if (knots[k].first == knots[k - 1].first) throw InvalidArgument("sample: duplicate piecewise-linear knot");

  const std::size_t m = knots.size();
  Vector v(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const double x = grid.x(i);
    if (m == 1) {
      v[i] = knots[0].second;
      continue;
    }
    // Locate the segment [a, b) containing x, wrapping past the last knot.
    auto it = std::upper_bound(knots.begin(), knots.end(), x,
                               [](double xv, const auto& k) { return xv < k.first; });
    const auto& b = (it == knots.end()) ? knots.front() : *it;
    const auto& a = (it == knots.begin()) ? knots.back() : *(it - 1);
    double xa = a.first, xb = b.first, xx = x;
    if (xb <= xa) xb += grid.L;
    if (xx < xa) xx += grid.L;
    const double w = (xx - xa) / (xb - xa);
    v[i] = (1.0 - w) * a.second + w * b.second;
  }
  return GraphFunction(grid, std::move(v));
}

GraphFunction sample_one(const RandomLipschitzIC& s, const Grid& grid) {
  if (!(s.m > 0.0)) throw InvalidArgument("sample: random-Lipschitz bound m must be positive");
  UniformStream rng(s.seed);
  const int n = grid.N;
  Vector slope(n);
  for (int i = 0; i < n; ++i) slope[i] = s.m * (2.0 * rng.next() - 1.0);
  slope.array() -= slope.mean();
  // Leave headroom for rounding in the cumulative sum so the measured constant stays <= m.
  const double cap = s.m * (1.0 - 1e-9);
  const double peak = slope.cwiseAbs().maxCoeff();
  if (peak > cap) slope *= cap / peak;

  Vector v(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = acc;
    acc += slope[i] * grid.dx;
  }
  v.array() += s.offset - v.mean();
  GraphFunction f(grid, std::move(v));
  f.meta.lipschitz = s.m;
  return f;
}

}  // namespace

GraphFunction sample(const InitialCondition& ic, const Grid& grid) {
  return std::visit([&](const auto& s) { return sample_one(s, grid); }, ic);
}

double lipschitz_constant(const GraphFunction& f) { return periodic_lipschitz(f.values, f.grid.dx); }

double sup_norm(const GraphFunction& f) { return f.values.cwiseAbs().maxCoeff(); }

ModulusProfile modulus(const GraphFunction& f, const std::vector<double>& lags) {
  const Grid& g = f.grid;
  std::vector<std::pair<double, int>> steps;
  for (double h : lags) {
    const double r = h / g.dx;
    const long k = std::lround(r);
    if (!(h > 0.0) || std::abs(r - k) > 1e-9 * std::max(1.0, r) || h > g.L / 2 + 1e-12 * g.L)
      throw InvalidArgument("modulus: lag must be a positive grid multiple no larger than L/2");
    steps.emplace_back(h, static_cast<int>(k));
  }
  std::sort(steps.begin(), steps.end());

  ModulusProfile p;
  double running = 0.0;
  for (const auto& [h, k] : steps) {
    double best = 0.0;
    for (int i = 0; i < g.N; ++i) best = std::max(best, std::abs(f.values[g.wrap(i + k)] - f.values[i]));
    running = std::max(running, best);
    p.lags.push_back(h);
    p.values.push_back(running);
  }
  return p;
}

std::vector<double> dyadic_lags(const Grid& grid) {
  std::vector<double> lags;
  for (int k = 1; k <= grid.N / 2; k *= 2) lags.push_back(k * grid.dx);
  return lags;
}

double c1gamma_seminorm(const GraphFunction& f, double gamma, std::optional<double> reach) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("c1gamma_seminorm: gamma must lie in (0, 1)");
  const Grid& g = f.grid;
  const int span = static_cast<int>(std::floor(reach.value_or(g.L / 4) / g.dx + 1e-9));
  const Vector d = centered_derivative(f.values, g.dx);
  double best = 0.0;
  for (int i = 0; i < g.N; ++i) {
    for (int k = 1; k <= std::min(span, g.N / 2); ++k) {
      const double diff = std::abs(d[g.wrap(i + k)] - d[i]);
      best = std::max(best, diff / std::pow(k * g.dx, gamma));
    }
  }
  return best;
}

double c1gamma_norm(const GraphFunction& f, double gamma, std::optional<double> reach) {
  const Vector d = centered_derivative(f.values, f.grid.dx);
  return sup_norm(f) + d.cwiseAbs().maxCoeff() + c1gamma_seminorm(f, gamma, reach);
}

}  // namespace muskat
