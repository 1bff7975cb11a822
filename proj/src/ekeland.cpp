#include "mvi/ekeland.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace mvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Minimizes f(u + t d) over t in [-h, h].
template <typename F>
std::pair<double, double> golden_min(F&& f, double h) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = -h, b = h;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 40 && (b - a) > 1e-3 * h; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best_t = 0.5 * (a + b);
  double best = f(best_t);
  for (double t : {-h, h}) {
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return {best_t, best};
}

struct Descent {
  const GapFunction& g;
  std::vector<Point> directions;
  int max_sweeps;

  std::pair<Point, double> run(Point u, double gu, double h, double h_stop) const {
    for (int sweep = 0; sweep < max_sweeps && h >= h_stop; ++sweep) {
      bool improved = false;
      for (const auto& d : directions) {
        const auto [t, gt] = golden_min([&](double s) { return g(u + s * d); }, h);
        if (gt < gu) {
          u += t * d;
          gu = gt;
          improved = true;
        }
      }
      if (!improved) h *= 0.5;
    }
    return {u, gu};
  }
};

}  // namespace

double GapFunction::operator()(const Point& x) const {
  const double fv = f1_.value(x);
  if (!std::isfinite(fv)) return kInf;
  return fv - phi_value(x, sc_);
}

std::vector<double> default_schedule() {
  std::vector<double> s;
  for (int n = 0; n <= 8; ++n) s.push_back(std::pow(10.0, -1.0 - 0.5 * n));
  return s;
}

std::vector<EkelandPoint> minimize_g(const TestFunction& f1, const SupConvSpec& sc,
                                     const InflatedHull& C, std::span<const double> schedule,
                                     const DescentOptions& opts) {
  const GapFunction g(f1, sc);
  const auto grid = sample_set(C.A, C.B, C.delta, opts.resolution);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g(grid[i]);
  return minimize_g(f1, sc, C, schedule, opts, grid, values);
}

std::vector<EkelandPoint> minimize_g(const TestFunction& f1, const SupConvSpec& sc,
                                     const InflatedHull& C, std::span<const double> schedule,
                                     const DescentOptions& opts, const std::vector<Point>& grid,
                                     const std::vector<double>& values) {
  if (schedule.empty()) throw std::invalid_argument("minimize_g: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      throw std::invalid_argument("minimize_g: schedule must be positive and strictly decreasing");
    }
  }
  if (grid.empty() || grid.size() != values.size()) throw dimension_error("minimize_g: grid and values differ in size");
  const GapFunction g(f1, sc);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return lex_less(grid[a], grid[b]);
  });
  if (!std::isfinite(values[order.front()])) {
    throw std::domain_error("minimize_g: f1 is +inf on every grid point of C");
  }

  const auto n = sc.dim();
  Descent descent{g, {}, opts.max_sweeps};
  for (Eigen::Index j = 0; j < n; ++j) descent.directions.push_back(Point::Unit(n, j));
  if (n > 1) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < opts.random_directions; ++k) {
      Point d(n);
      for (Eigen::Index j = 0; j < n; ++j) d(j) = normal(rng);
      descent.directions.push_back(d / d.norm());
    }
  }

  const double h0 = 2.0 * grid_step(C.A, C.B, C.delta, opts.resolution);
  const auto starts = std::min<std::size_t>(std::size_t(std::max(1, opts.starts)), grid.size());
  Point u = grid[order.front()];
  double gu = values[order.front()];
  for (std::size_t k = 0; k < starts && std::isfinite(values[order[k]]); ++k) {
    auto [v, gv] = descent.run(grid[order[k]], values[order[k]], h0, 1e-2 * schedule[0]);
    if (gv < gu || (gv == gu && lex_less(v, u))) {
      u = std::move(v);
      gu = gv;
    }
  }

  std::vector<EkelandPoint> out;
  out.push_back({u, schedule[0], gu});
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    auto [v, gv] = descent.run(u, gu, std::max(10.0 * schedule[i], 1e-2 * schedule[i - 1]),
                               1e-2 * schedule[i]);
    if (gv < gu) {
      u = std::move(v);
      gu = gv;
    }
    out.push_back({u, schedule[i], gu});
  }
  return out;
}

EvpCheck evp_verify(const Point& u, double g_u, double eps, const std::vector<Point>& grid,
                    const std::vector<double>& g_grid, double tol) {
  if (grid.size() != g_grid.size()) throw dimension_error("evp_verify: grid and values differ in size");
  if (!std::isfinite(g_u)) throw std::domain_error("evp_verify: g(u) must be finite");
  double worst = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(g_grid[i])) continue;
    worst = std::min(worst, g_grid[i] + eps * (grid[i] - u).norm() - g_u);
  }
  return {worst >= -tol, worst};
}

EvpCheck evp_verify(const Point& u, double eps, const TestFunction& f1, const SupConvSpec& sc,
                    const std::vector<Point>& grid, double tol) {
  const GapFunction g(f1, sc);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g(grid[i]);
  return evp_verify(u, g(u), eps, grid, values, tol);
}

FuzzyPair fuzzy_pair(const EkelandPoint& u, const TestFunction& f, const SupConvSpec& sc,
                     double search_radius, double k_residual) {
  const auto n = u.u.size();
  std::vector<Point> stencil{u.u};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (double sign : {-1.0, 1.0}) stencil.push_back(u.u + sign * 0.5 * search_radius * Point::Unit(n, j));
  }

  const double fu = f.value(u.u);
  std::optional<FuzzyPair> best;
  double best_score = kInf;
  for (const auto& x : stencil) {
    const double fx = f.value(x);
    if (!std::isfinite(fx) || (std::isfinite(fu) && std::abs(fx - fu) >= u.eps)) continue;
    for (const auto& p : f.subgrad(x)) {
      for (const auto& y : stencil) {
        SupergradientOptions opts;
        opts.target = p;
        Point q;
        try {
          q = -phi_supergradient(y, sc, opts).p;
        } catch (const numerical_error&) {
          continue;
        }
        const double residual = (p + q).norm();
        const double separation = (x - y).norm();
        if (residual + separation < best_score) {
          best_score = residual + separation;
          best = FuzzyPair{x, p, y, q, residual, separation};
        }
      }
    }
  }
  if (!best) throw numerical_error("fuzzy_pair: no candidate with a subgradient near u");
  if (best->residual > k_residual * u.eps) {
    throw numerical_error("fuzzy_pair: residual " + std::to_string(best->residual) +
                          " exceeds " + std::to_string(k_residual) + " * eps_n");
  }
  return *best;
}

}  // namespace mvi
