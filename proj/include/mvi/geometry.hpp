#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvi {

/// Points of R^n. Dual elements are identified with R^n through the
/// Euclidean pairing, so slopes use the same type.
using Point = Eigen::VectorXd;

class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Default width of the band treated as the boundary of an inflated hull.
inline constexpr double kBoundaryTol = 1e-7;

/// Nonempty vertex-represented polytope. Immutable after construction.
class Polytope {
 public:
  explicit Polytope(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  std::size_t size() const { return vertices_.size(); }
  Eigen::Index dim() const { return vertices_.front().size(); }

 private:
  std::vector<Point> vertices_;
};

/// Convex weights over the vertices of A (gamma) and of B (eta).
struct HullCoords {
  Eigen::VectorXd gamma;
  Eigen::VectorXd eta;

  /// Total weight carried by A.
  double lambda() const { return gamma.sum(); }
  Point point(const Polytope& A, const Polytope& B) const;
  Eigen::VectorXd joined() const;
  static HullCoords split(const Eigen::VectorXd& w, std::size_t mA);
};

/// The closed inflation C = {x : d(x, [A,B]) <= delta}.
struct InflatedHull {
  Polytope A;
  Polytope B;
  double delta;
};

/// Columns are the vertices of A followed by the vertices of B.
Eigen::MatrixXd hull_matrix(const Polytope& A, const Polytope& B);

struct HullProjection {
  double distance;
  Point nearest;
  HullCoords coords;
};

/// Euclidean projection of x onto [A,B] (Wolfe's minimum-norm-point method).
HullProjection dist_to_hull(const Point& x, const Polytope& A, const Polytope& B);

inline double distance_to_hull(const Point& x, const Polytope& A, const Polytope& B) {
  return dist_to_hull(x, A, B).distance;
}

enum class Location { interior, boundary, exterior };

const char* to_string(Location loc);

Location classify_point(const Point& x, const Polytope& A, const Polytope& B, double delta,
                        double tol = kBoundaryTol);

/// Exact infimum of <p, .> over S (attained at a vertex).
double inf_linear(const Point& p, const Polytope& S);

/// Largest per-axis spacing of the grid used by sample_set.
double grid_step(const Polytope& A, const Polytope& B, double delta, int resolution);

/// Deterministic axis-aligned grid over the bounding box of [A,B]_delta, kept
/// where d(x, [A,B]) <= delta + step, followed by any vertex of A or B the
/// grid missed. Degenerate box axes contribute a single coordinate.
std::vector<Point> sample_set(const Polytope& A, const Polytope& B, double delta,
                              int resolution);

/// Points with d(x, [A,B]) = delta, obtained by pushing grid points of the
/// inflated box radially off their projections.
std::vector<Point> sample_boundary(const Polytope& A, const Polytope& B, double delta,
                                   int resolution);

/// Diameter of A union B.
double diameter(const Polytope& A, const Polytope& B);

/// Largest vertex norm of A union B.
double max_norm(const Polytope& A, const Polytope& B);

void require_dim(const Point& x, Eigen::Index n, const char* what);

}  // namespace mvi
