#pragma once

#include "mvi/functions.hpp"
#include "mvi/simplex_optim.hpp"
#include "mvi/supconv.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mvi {

/// g = f1 - phi_K, +inf off dom f1.
class GapFunction {
 public:
  GapFunction(const TestFunction& f1, const SupConvSpec& sc) : f1_(f1), sc_(sc) {}

  double operator()(const Point& x) const;
  const TestFunction& f1() const { return f1_; }
  const SupConvSpec& spec() const { return sc_; }

 private:
  const TestFunction& f1_;
  const SupConvSpec& sc_;
};

struct EkelandPoint {
  Point u;
  double eps;
  double value;  // g(u)
};

struct FuzzyPair {
  Point x;
  Point p;
  Point y;
  Point q;
  double residual;    // ||p + q||
  double separation;  // ||x - y||
};

/// Default schedule eps_n = 10^(-1 - n/2), n = 0..8.
std::vector<double> default_schedule();

struct DescentOptions {
  int resolution = 101;
  std::uint64_t seed = 0;
  int starts = 4;
  int random_directions = 2;
  int max_sweeps = 400;
};

/// Multistart pattern descent on g over C, refined once per schedule entry.
/// Each u_n satisfies g(u_n) <= min over the grid of g + eps_n, and the
/// values are nonincreasing along the schedule.
std::vector<EkelandPoint> minimize_g(const TestFunction& f1, const SupConvSpec& sc,
                                     const InflatedHull& C, std::span<const double> schedule,
                                     const DescentOptions& opts = {});

/// Same, seeded from g already tabulated on sample_set(C, opts.resolution).
std::vector<EkelandPoint> minimize_g(const TestFunction& f1, const SupConvSpec& sc,
                                     const InflatedHull& C, std::span<const double> schedule,
                                     const DescentOptions& opts, const std::vector<Point>& grid,
                                     const std::vector<double>& values);

struct EvpCheck {
  bool ok;
  double worst;  // min over the grid of g(z) + eps ||z - u|| - g(u)
};

inline constexpr double kEvpTol = 1e-6;

EvpCheck evp_verify(const Point& u, double eps, const TestFunction& f1, const SupConvSpec& sc,
                    const std::vector<Point>& grid, double tol = kEvpTol);

/// Same check with g already tabulated on the grid (+inf entries skipped).
EvpCheck evp_verify(const Point& u, double g_u, double eps, const std::vector<Point>& grid,
                    const std::vector<double>& g_grid, double tol = kEvpTol);

/// Searches x, y within search_radius of u for p in the subdifferential of f
/// at x and q = -(supergradient of phi_K at y) minimizing ||p + q|| + ||x - y||.
/// Throws numerical_error when the residual exceeds k_residual * eps.
FuzzyPair fuzzy_pair(const EkelandPoint& u, const TestFunction& f, const SupConvSpec& sc,
                     double search_radius, double k_residual = 10.0);

}  // namespace mvi
