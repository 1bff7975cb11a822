#pragma once

#include "mvi/functions.hpp"
#include "mvi/supconv.hpp"

#include <limits>
#include <vector>

// Brute-force references for tests. Nothing in the pipeline calls these.
namespace mvi::oracles {

struct GridInf {
  double value;
  Point argmin;
  double error_bound;  // grid-step * sqrt(n) * Lip(f) on the sampled region
  double step;
};

/// Exhaustive minimum of f over sample_set(A, B, delta, resolution).
/// Throws std::domain_error when f is +inf on every sample.
GridInf grid_inf(const TestFunction& f, const Polytope& A, const Polytope& B, double delta,
                 int resolution);

/// Grid minimum of an arbitrary function over the given points.
template <typename F>
std::pair<double, Point> grid_min(F&& f, const std::vector<Point>& grid);

/// Lattice step used by psi_brute and phi_brute at this resolution: the
/// longest bounding-box side of [A,B] over resolution - 1.
double brute_step(const TentSpec& t, int resolution);

/// Lattice points of the bounding box of conv(S) at the given step that lie
/// in conv(S), plus the vertices of S.
std::vector<Point> hull_lattice(const Polytope& S, double step);

/// max lambda r + (1 - lambda) s over lambda on a uniform grid, u in the
/// lattice of A and v in the lattice of B with ||lambda u + (1 - lambda) v - x||
/// <= step; -inf when no triple is feasible.
double psi_brute(const Point& x, const TentSpec& t, int resolution);

/// psi_brute tabulated on the lattice of [A,B].
struct PsiTable {
  std::vector<Point> points;
  std::vector<double> values;
  double step;
};

PsiTable psi_table(const TentSpec& t, int resolution);

/// max over the table of psi(y) - K ||x - y||.
double phi_brute(const Point& x, const SupConvSpec& sc, const PsiTable& table);
double phi_brute(const Point& x, const SupConvSpec& sc, int resolution);

template <typename F>
std::pair<double, Point> grid_min(F&& f, const std::vector<Point>& grid) {
  double best = std::numeric_limits<double>::infinity();
  Point arg;
  for (const auto& z : grid) {
    const double v = f(z);
    if (v < best || arg.size() == 0) {
      best = v;
      arg = z;
    }
  }
  return {best, arg};
}

}  // namespace mvi::oracles
