#pragma once

#include "mvi/geometry.hpp"

#include <optional>
#include <vector>

namespace mvi {

/// Default slack for every epsilon-differential grid check.
inline constexpr double kCheckTol = 1e-7;

/// Anchor data of the concave tent psi: its hypograph is the convex hull of
/// A x (-inf, r] and B x (-inf, s]. Requires r != s.
class TentSpec {
 public:
  TentSpec(Polytope A, Polytope B, double r, double s);

  const Polytope& A() const { return A_; }
  const Polytope& B() const { return B_; }
  double r() const { return r_; }
  double s() const { return s_; }
  Eigen::Index dim() const { return A_.dim(); }

  /// Vertex matrix [A | B].
  const Eigen::MatrixXd& vertices() const { return V_; }
  /// Per-vertex heights: r on A's vertices, s on B's.
  const Eigen::VectorXd& heights() const { return heights_; }

 private:
  Polytope A_;
  Polytope B_;
  double r_;
  double s_;
  Eigen::MatrixXd V_;
  Eigen::VectorXd heights_;
};

struct TentValue {
  double value;  // -inf outside [A,B]
  std::optional<HullCoords> coords;

  bool finite() const { return coords.has_value(); }
};

/// Exact psi(x) via the hull linear program.
TentValue psi_eval(const Point& x, const TentSpec& t);

struct SuperdiffCheck {
  bool ok;
  double worst_violation;
  Point witness;
};

/// Tests p in the eps-superdifferential of psi at x over the grid.
SuperdiffCheck eps_superdiff_check_psi(const Point& p, const Point& x, double eps,
                                       const TentSpec& t, const std::vector<Point>& grid,
                                       double tol_check = kCheckTol);

/// Same check against precomputed psi values on the grid.
SuperdiffCheck eps_superdiff_check_psi(const Point& p, const Point& x, double psi_x, double eps,
                                       const std::vector<Point>& grid,
                                       const std::vector<double>& psi_grid,
                                       double tol_check = kCheckTol);

/// Smallest eps for which p is an eps-supergradient of psi at x over all of
/// [A,B]; exact because psi - <p, .> is maximized at a vertex decomposition.
double exact_superdiff_eps(const Point& p, const Point& x, const TentSpec& t);

struct BoundCheck {
  bool holds;
  double lhs;
  double rhs;
};

/// Evaluates inf_A p - inf_B p <= (r - s) + (r - s) / (psi(x0) - s) * eps.
BoundCheck psi_slope_bound_check(const Point& p, const Point& x0, double eps, const TentSpec& t,
                                 double tol_check = kCheckTol);

}  // namespace mvi
