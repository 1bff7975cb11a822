#include "mvi/tent.hpp"

#include "mvi/simplex_optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvi {

TentSpec::TentSpec(Polytope A, Polytope B, double r, double s)
    : A_(std::move(A)), B_(std::move(B)), r_(r), s_(s) {
  if (!std::isfinite(r) || !std::isfinite(s)) throw std::invalid_argument("TentSpec: r, s must be finite");
  if (r == s) throw std::invalid_argument("TentSpec: r and s must differ");
  V_ = hull_matrix(A_, B_);
  heights_.resize(V_.cols());
  heights_.head(Eigen::Index(A_.size())).setConstant(r_);
  heights_.tail(Eigen::Index(B_.size())).setConstant(s_);
}

TentValue psi_eval(const Point& x, const TentSpec& t) {
  require_dim(x, t.dim(), "psi_eval");
  const auto n = t.dim();
  const auto m = t.vertices().cols();
  LPProblem lp;
  lp.objective = t.heights();
  lp.A_eq.resize(n + 1, m);
  lp.A_eq.topRows(n) = t.vertices();
  lp.A_eq.row(n).setOnes();
  lp.b_eq.resize(n + 1);
  lp.b_eq << x, 1.0;
  const LPResult res = solve_lp(lp);
  if (!res.feasible) return {-std::numeric_limits<double>::infinity(), std::nullopt};
  return {res.value, HullCoords::split(res.x, t.A().size())};
}

SuperdiffCheck eps_superdiff_check_psi(const Point& p, const Point& x, double psi_x, double eps,
                                       const std::vector<Point>& grid,
                                       const std::vector<double>& psi_grid, double tol_check) {
  if (grid.size() != psi_grid.size()) throw std::invalid_argument("grid and values differ in size");
  SuperdiffCheck out{true, -std::numeric_limits<double>::infinity(), x};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(psi_grid[i])) continue;
    const double violation = psi_grid[i] - psi_x - p.dot(grid[i] - x) - eps;
    if (violation > out.worst_violation) {
      out.worst_violation = violation;
      out.witness = grid[i];
    }
  }
  out.ok = out.worst_violation <= tol_check;
  return out;
}

SuperdiffCheck eps_superdiff_check_psi(const Point& p, const Point& x, double eps,
                                       const TentSpec& t, const std::vector<Point>& grid,
                                       double tol_check) {
  require_dim(p, t.dim(), "eps_superdiff_check_psi");
  const TentValue at_x = psi_eval(x, t);
  if (!at_x.finite()) throw std::domain_error("eps_superdiff_check_psi: psi(x) = -inf");
  std::vector<double> values;
  values.reserve(grid.size());
  for (const auto& z : grid) values.push_back(psi_eval(z, t).value);
  return eps_superdiff_check_psi(p, x, at_x.value, eps, grid, values, tol_check);
}

double exact_superdiff_eps(const Point& p, const Point& x, const TentSpec& t) {
  const TentValue at_x = psi_eval(x, t);
  if (!at_x.finite()) throw std::domain_error("exact_superdiff_eps: psi(x) = -inf");
  const Eigen::VectorXd lifted = t.heights() - t.vertices().transpose() * p;
  return std::max(0.0, lifted.maxCoeff() - at_x.value + p.dot(x));
}

BoundCheck psi_slope_bound_check(const Point& p, const Point& x0, double eps, const TentSpec& t,
                                 double tol_check) {
  const TentValue at_x0 = psi_eval(x0, t);
  if (!at_x0.finite()) throw std::domain_error("psi_slope_bound_check: psi(x0) = -inf");
  const double denom = at_x0.value - t.s();
  if (std::abs(denom) < 1e-10) throw std::domain_error("psi_slope_bound_check: psi(x0) = s");
  const double lhs = inf_linear(p, t.A()) - inf_linear(p, t.B());
  const double rhs = (t.r() - t.s()) + (t.r() - t.s()) / denom * eps;
  return {lhs <= rhs + tol_check, lhs, rhs};
}

}  // namespace mvi
