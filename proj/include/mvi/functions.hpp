#pragma once

#include "mvi/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mvi {

/// Effective-domain descriptor of a test function.
class Domain {
 public:
  enum class Kind { all_space, polytope, half_space, inflated_hull };

  static Domain all_space() { return Domain(Kind::all_space); }
  static Domain polytope(Polytope P);
  /// {x : <normal, x> <= offset}
  static Domain half_space(Point normal, double offset);
  static Domain inflated_hull(InflatedHull C);

  Kind kind() const { return kind_; }
  /// Closed-set membership with tolerance tol.
  bool contains(const Point& x, double tol = 1e-9) const;
  /// Interior / boundary / exterior with a band of width tol.
  Location locate(const Point& x, double tol = kBoundaryTol) const;
  nlohmann::json to_json() const;

  const std::optional<Polytope>& polytope() const { return polytope_; }
  const std::optional<InflatedHull>& inflated() const { return inflated_; }

 private:
  explicit Domain(Kind k) : kind_(k) {}
  Kind kind_;
  std::optional<Polytope> polytope_;
  std::optional<InflatedHull> inflated_;
  Point normal_;
  double offset_ = 0.0;
};

/// A proper lsc function on R^n with a value oracle (+inf off the domain) and a
/// subgradient oracle returning a finite set of representatives of the
/// subdifferential (empty off the domain).
class TestFunction {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using SubgradFn = std::function<std::vector<Point>(const Point&)>;
  /// Upper bound on the gradient norm over the ball of the given radius.
  using LipschitzFn = std::function<double(double)>;

  TestFunction(std::string id, nlohmann::json params, Eigen::Index dim, ValueFn value,
               SubgradFn subgrad, LipschitzFn lipschitz, bool convex,
               Domain domain = Domain::all_space());

  const std::string& id() const { return id_; }
  const nlohmann::json& params() const { return params_; }
  Eigen::Index dim() const { return dim_; }
  bool convex() const { return convex_; }
  const Domain& domain() const { return domain_; }
  double lipschitz(double radius) const { return lipschitz_(radius); }

  double value(const Point& x) const;
  std::vector<Point> subgrad(const Point& x) const;

 private:
  std::string id_;
  nlohmann::json params_;
  Eigen::Index dim_;
  ValueFn value_;
  SubgradFn subgrad_;
  LipschitzFn lipschitz_;
  bool convex_;
  Domain domain_;
};

namespace catalog {

/// <a, x> + b
TestFunction linear(Point a, double b);
/// 1/2 <Qx, x> + <a, x> + c, Q symmetric positive semidefinite.
TestFunction quadratic(Eigen::MatrixXd Q, Point a, double c = 0.0);
/// scale * ||x - center||
TestFunction norm(Point center, double scale = 1.0);
/// max_i (<slopes_i, x> + offsets_i)
TestFunction max_affine(std::vector<Point> slopes, std::vector<double> offsets);
/// amplitude * sin(<w, x>) + 1/2 <Qx, x> + <a, x>
TestFunction sin_quad(double amplitude, Point w, Eigen::MatrixXd Q, Point a);

enum class BoundaryRule { keep, empty };

/// f + indicator(domain). With BoundaryRule::empty the subgradient oracle is
/// empty on the boundary band of the domain as well as outside it.
TestFunction restricted(const TestFunction& f, Domain domain,
                        BoundaryRule rule = BoundaryRule::keep);

/// Builds a catalog member from its id and JSON parameters.
TestFunction from_json(const nlohmann::json& spec);

}  // namespace catalog

double f_eval(const TestFunction& f, const Point& x);
std::vector<Point> f_subgrad(const TestFunction& f, const Point& x);

/// p in the eps-subdifferential of f at x, tested over the grid points in dom f.
bool eps_subdiff_check(const TestFunction& f, const Point& x, const Point& p, double eps,
                       const std::vector<Point>& grid, double tol_check = 1e-7);

}  // namespace mvi
