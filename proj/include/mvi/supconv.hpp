#pragma once

#include "mvi/tent.hpp"

#include <optional>
#include <vector>

namespace mvi {

/// phi_K = (-K ||.||) * psi, the sup-convolution of the tent with a cone.
class SupConvSpec {
 public:
  SupConvSpec(TentSpec tent, double K);

  const TentSpec& tent() const { return tent_; }
  double K() const { return K_; }
  Eigen::Index dim() const { return tent_.dim(); }

 private:
  TentSpec tent_;
  double K_;
};

struct PhiValue {
  double value;
  Point argmax;  // z*, a maximizing y in [A,B]
  HullCoords coords;
  double gap;  // certified: value - (psi-part at argmax - K ||x - argmax||) <= gap
  int iterations;
};

/// Bounds on phi_K(x) from min_{||p|| <= K} max_i (h_i + <p, v_i - x>), solved
/// by LP cutting planes on the ball. -p is a supergradient of phi_K at x.
struct PhiDual {
  Point p;
  double upper;
  double lower;
  int cuts;

  bool converged() const;
};

PhiDual phi_dual(const Point& x, const SupConvSpec& sc);

/// sup{psi(y) - K ||x - y|| : y in [A,B]}; maximizer from Frank-Wolfe, value
/// certified against the dual bound.
PhiValue phi_eval(const Point& x, const SupConvSpec& sc, double tol = 1e-8);

/// Value only; skips the primal solve when the dual bound has closed.
double phi_value(const Point& x, const SupConvSpec& sc);

enum class SupergradientMode { cone_formula, fallback };

const char* to_string(SupergradientMode mode);

struct SupergradientOptions {
  double tol_sep = 1e-6;
  double fd_step = 1e-5;
  double tol_super = 1e-4;
  /// At a kink, return the verified supergradient nearest to this slope
  /// instead of the finite-difference one.
  std::optional<Point> target;
  /// Verification points; a local stencil around x when empty.
  std::vector<Point> grid;
};

struct Supergradient {
  Point p;
  SupergradientMode mode;
  double worst;  // min over the grid of <p, z-x> - (phi(z) - phi(x))
};

/// Throws numerical_error when the superdifferential inequality fails on the
/// verification grid.
Supergradient phi_supergradient(const Point& x, const SupConvSpec& sc,
                                const SupergradientOptions& opts = {});

/// Element of the superdifferential of phi_K at x nearest to target.
Point nearest_supergradient(const Point& x, const SupConvSpec& sc, const Point& target);

/// Stencil of points at radii 1e-4 .. 1e-1 around x along axes and diagonals.
std::vector<Point> local_stencil(const Point& x);

/// Checks that p (a supergradient of phi_K at x) is an eps-supergradient of
/// psi at a point y attaining phi_K(x) within eps.
bool attained_superdiff_check(const Point& p, const Point& x, const SupConvSpec& sc, double eps,
                              const std::vector<Point>& grid);

/// True iff no grid point lies in both
///   U = {z : psi(z) - K ||z - ybar|| > phi_K(ybar) - c}  and
///   V = {z : |s_anchor - psi(z)| < c}.
bool uv_disjoint(const Point& ybar, double c, const SupConvSpec& sc, double s_anchor,
                 const std::vector<Point>& grid);

/// Largest c in (0, c_max] (by bisection) with U and V disjoint on the grid.
std::optional<double> largest_disjoint_c(const Point& ybar, double c_max, const SupConvSpec& sc,
                                         double s_anchor, const std::vector<Point>& grid,
                                         int steps = 60);

}  // namespace mvi
