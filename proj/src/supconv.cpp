#include "mvi/supconv.hpp"

#include "mvi/simplex_optim.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mvi {

SupConvSpec::SupConvSpec(TentSpec tent, double K) : tent_(std::move(tent)), K_(K) {
  if (!(K > 0.0) || !std::isfinite(K)) throw std::invalid_argument("SupConvSpec: K must be finite and > 0");
}

const char* to_string(SupergradientMode mode) {
  return mode == SupergradientMode::cone_formula ? "cone-formula" : "fallback";
}

bool PhiDual::converged() const { return upper - lower <= 1e-11 * std::max(1.0, std::abs(upper)); }

namespace {

std::vector<Point> initial_cuts(Eigen::Index n) {
  std::vector<Point> dirs;
  if (n == 2) {
    for (int k = 0; k < 16; ++k) {
      const double a = k * std::numbers::pi / 8.0;
      dirs.push_back((Point(2) << std::cos(a), std::sin(a)).finished());
    }
  } else if (n == 3) {
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int k = -1; k <= 1; ++k) {
          if (i == 0 && j == 0 && k == 0) continue;
          Point u(3);
          u << i, j, k;
          dirs.push_back(u.normalized());
        }
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      dirs.push_back(Point::Unit(n, j));
      dirs.push_back(-Point::Unit(n, j));
    }
  }
  return dirs;
}

}  // namespace

PhiDual phi_dual(const Point& x, const SupConvSpec& sc) {
  const TentSpec& t = sc.tent();
  require_dim(x, t.dim(), "phi_dual");
  const Eigen::Index n = t.dim();
  const Eigen::MatrixXd D = t.vertices().colwise() - x;
  const Eigen::VectorXd& h = t.heights();
  const Eigen::Index m = D.cols();
  const double K = sc.K();
  auto pieces = [&](const Point& p) { return (h + D.transpose() * p).maxCoeff(); };

  std::vector<Point> cuts = initial_cuts(n);
  PhiDual out{Point::Zero(n), std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(), 0};
  for (int iter = 0; iter < 200; ++iter) {
    const auto k = Eigen::Index(cuts.size());
    const Eigen::Index vars = 2 * n + 2 + m + k;
    LPProblem lp;
    lp.objective = Eigen::VectorXd::Zero(vars);
    lp.objective(2 * n) = -1.0;
    lp.objective(2 * n + 1) = 1.0;
    lp.A_eq = Eigen::MatrixXd::Zero(m + k, vars);
    lp.b_eq.resize(m + k);
    for (Eigen::Index i = 0; i < m; ++i) {
      lp.A_eq.row(i).segment(0, n) = D.col(i).transpose();
      lp.A_eq.row(i).segment(n, n) = -D.col(i).transpose();
      lp.A_eq(i, 2 * n) = -1.0;
      lp.A_eq(i, 2 * n + 1) = 1.0;
      lp.A_eq(i, 2 * n + 2 + i) = 1.0;
      lp.b_eq(i) = -h(i);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      const Point& u = cuts[std::size_t(j)];
      lp.A_eq.row(m + j).segment(0, n) = u.transpose();
      lp.A_eq.row(m + j).segment(n, n) = -u.transpose();
      lp.A_eq(m + j, 2 * n + 2 + m + j) = 1.0;
      lp.b_eq(m + j) = K;
    }
    const LPResult res = solve_lp(lp);
    if (!res.feasible) throw numerical_error("phi_dual: relaxation infeasible");
    const Point p = res.x.segment(0, n) - res.x.segment(n, n);
    const double tval = res.x(2 * n) - res.x(2 * n + 1);
    out.lower = std::max(out.lower, tval);
    out.cuts = int(cuts.size());
    const double norm = p.norm();
    if (norm <= K * (1.0 + 1e-14)) {
      const double ub = pieces(p);
      if (ub < out.upper) {
        out.upper = ub;
        out.p = p;
      }
      out.lower = std::min(out.lower, out.upper);
      break;
    }
    const Point pk = (K / norm) * p;
    const double ub = pieces(pk);
    if (ub < out.upper) {
      out.upper = ub;
      out.p = pk;
    }
    if (out.converged()) break;
    cuts.push_back(p / norm);
  }
  return out;
}

namespace {

struct PrimalObjective {
  const TentSpec& t;
  const Point& x;
  double K;

  double value(const Eigen::VectorXd& w) const {
    return t.heights().dot(w) - K * (x - t.vertices() * w).norm();
  }

  Eigen::VectorXd supergradient(const Eigen::VectorXd& w) const {
    const Point r = x - t.vertices() * w;
    const double norm = r.norm();
    Eigen::VectorXd g = t.heights();
    if (norm > 1e-14) g += t.vertices().transpose() * (K / norm * r);
    return g;
  }
};

}  // namespace

PhiValue phi_eval(const Point& x, const SupConvSpec& sc, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("phi_eval: tol must be > 0");
  const TentSpec& t = sc.tent();
  require_dim(x, t.dim(), "phi_eval");
  const PhiDual dual = phi_dual(x, sc);
  const PrimalObjective obj{t, x, sc.K()};

  HullCoords start;
  const TentValue at_x = psi_eval(x, t);
  if (at_x.finite()) {
    start = *at_x.coords;
  } else {
    start = dist_to_hull(x, t.A(), t.B()).coords;
  }
  double primal = obj.value(start.joined());
  HullCoords coords = start;
  int iterations = 0;

  if (dual.upper - primal > tol) {
    const std::size_t mA = t.A().size();
    ConcaveObjective concave{
        [&](const HullCoords& c) { return obj.value(c.joined()); },
        [&](const HullCoords& c) { return obj.supergradient(c.joined()); }};
    FrankWolfeOptions opts;
    opts.tol = tol;
    opts.start = start;
    const FrankWolfeResult fw = maximize_concave(concave, {mA, t.B().size()}, opts);
    iterations = fw.iterations;
    if (fw.value > primal) {
      primal = fw.value;
      coords = fw.coords;
    }
  }

  const double value = dual.converged() ? dual.upper : primal;
  return {value, coords.point(t.A(), t.B()), coords, std::max(0.0, dual.upper - primal), iterations};
}

double phi_value(const Point& x, const SupConvSpec& sc) {
  const PhiDual dual = phi_dual(x, sc);
  if (dual.converged()) return dual.upper;
  return phi_eval(x, sc).value;
}

std::vector<Point> local_stencil(const Point& x) {
  const Eigen::Index n = x.size();
  std::vector<Point> dirs;
  for (Eigen::Index i = 0; i < n; ++i) {
    dirs.push_back(Point::Unit(n, i));
    dirs.push_back(-Point::Unit(n, i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          Point d = Point::Zero(n);
          d(i) = si;
          d(j) = sj;
          dirs.push_back(d.normalized());
        }
      }
    }
  }
  std::vector<Point> out;
  for (double radius : {1e-4, 1e-3, 1e-2, 1e-1}) {
    for (const auto& d : dirs) out.push_back(x + radius * d);
  }
  return out;
}

namespace {

// Nearest point to a in {p : G p <= b, ||p|| <= radius}, n <= 3, by
// enumerating active sets. Rows of G are constraint normals.
Point project_polyhedron_ball(const Point& a, const Eigen::MatrixXd& G, const Eigen::VectorXd& b,
                              double radius) {
  const Eigen::Index n = a.size();
  const Eigen::Index m = G.rows();
  const double feas_tol = 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  std::optional<Point> best;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& p) {
    if (!p.allFinite()) return;
    if (p.norm() > radius * (1.0 + 1e-12)) return;
    if (m > 0 && ((G * p) - b).maxCoeff() > feas_tol) return;
    const double d = (p - a).norm();
    if (d < best_dist) {
      best_dist = d;
      best = p;
    }
  };
  consider(a);
  if (a.norm() > 0.0) consider(radius / a.norm() * a);

  std::vector<Eigen::Index> subset;
  auto visit = [&](const std::vector<Eigen::Index>& S) {
    const auto k = Eigen::Index(S.size());
    Eigen::MatrixXd GS(k, n);
    Eigen::VectorXd bS(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      GS.row(i) = G.row(S[std::size_t(i)]);
      bS(i) = b(S[std::size_t(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(GS);
    if (lu.rank() < k) return;
    const Eigen::MatrixXd gram = GS * GS.transpose();
    const Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    const Point onto = a - GS.transpose() * solver.solve(GS * a - bS);
    consider(onto);
    const Point center = GS.transpose() * solver.solve(bS);
    const double rho2 = radius * radius - center.squaredNorm();
    if (rho2 < 0.0) return;
    const double rho = std::sqrt(rho2);
    const Point dir = onto - center;
    if (dir.norm() > 1e-15) {
      consider(center + rho / dir.norm() * dir);
    } else if (k < n) {
      const Eigen::MatrixXd null = lu.kernel();
      for (Eigen::Index c = 0; c < null.cols(); ++c) {
        const Point u = null.col(c).normalized();
        consider(center + rho * u);
        consider(center - rho * u);
      }
    }
  };
  // combinations of size 1..n
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index from) {
    if (!subset.empty()) visit(subset);
    if (Eigen::Index(subset.size()) == n) return;
    for (Eigen::Index i = from; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
  if (!best) throw numerical_error("projection onto the dual face failed");
  return *best;
}

}  // namespace

Point nearest_supergradient(const Point& x, const SupConvSpec& sc, const Point& target) {
  const TentSpec& t = sc.tent();
  require_dim(target, t.dim(), "nearest_supergradient");
  const PhiDual dual = phi_dual(x, sc);
  const double value = dual.upper;
  const double slack = 1e-10 * std::max(1.0, std::abs(value)) + (dual.upper - dual.lower);
  const Eigen::MatrixXd G = (t.vertices().colwise() - x).transpose();
  const Eigen::VectorXd b = (value - t.heights().array() + slack).matrix();
  return -project_polyhedron_ball(-target, G, b, sc.K());
}

Supergradient phi_supergradient(const Point& x, const SupConvSpec& sc,
                                const SupergradientOptions& opts) {
  const PhiValue pv = phi_eval(x, sc);
  Supergradient out{Point::Zero(x.size()), SupergradientMode::fallback, 0.0};
  const Point offset = x - pv.argmax;
  if (offset.norm() > opts.tol_sep) {
    out.p = -sc.K() / offset.norm() * offset;
    out.mode = SupergradientMode::cone_formula;
  } else if (opts.target) {
    out.p = nearest_supergradient(x, sc, *opts.target);
  } else {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const Point e = opts.fd_step * Point::Unit(x.size(), j);
      out.p(j) = (phi_value(x + e, sc) - phi_value(x - e, sc)) / (2.0 * opts.fd_step);
    }
  }

  const std::vector<Point> grid = opts.grid.empty() ? local_stencil(x) : opts.grid;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& z : grid) {
    worst = std::min(worst, out.p.dot(z - x) - (phi_value(z, sc) - pv.value));
  }
  out.worst = worst;
  if (worst < -opts.tol_super) {
    throw numerical_error("phi_supergradient: superdifferential inequality fails by " +
                          std::to_string(-worst) + " (" + to_string(out.mode) + ")");
  }
  return out;
}

bool attained_superdiff_check(const Point& p, const Point& x, const SupConvSpec& sc, double eps,
                              const std::vector<Point>& grid) {
  const TentSpec& t = sc.tent();
  const PhiValue pv = phi_eval(x, sc);
  auto attains = [&](const Point& y) {
    const TentValue psi = psi_eval(y, t);
    return psi.finite() && psi.value - sc.K() * (x - y).norm() >= pv.value - eps;
  };
  std::optional<Point> y;
  if (attains(pv.argmax)) {
    y = pv.argmax;
  } else {
    for (const auto& z : grid) {
      if (attains(z)) {
        y = z;
        break;
      }
    }
  }
  if (!y) throw std::runtime_error("attained_superdiff_check: no eps-attaining point found");
  return eps_superdiff_check_psi(p, *y, eps, t, grid).ok;
}

namespace {

constexpr double kStrictMargin = 1e-9;

struct UVTable {
  std::vector<double> attain;  // psi(z) - K ||z - ybar||
  std::vector<double> level;   // |s_anchor - psi(z)|
  double phi;
};

UVTable uv_table(const Point& ybar, const SupConvSpec& sc, double s_anchor,
                 const std::vector<Point>& grid) {
  UVTable tab{{}, {}, phi_value(ybar, sc)};
  for (const auto& z : grid) {
    const TentValue psi = psi_eval(z, sc.tent());
    if (!psi.finite()) continue;
    tab.attain.push_back(psi.value - sc.K() * (z - ybar).norm());
    tab.level.push_back(std::abs(s_anchor - psi.value));
  }
  return tab;
}

bool disjoint_at(const UVTable& tab, double c) {
  for (std::size_t i = 0; i < tab.attain.size(); ++i) {
    const bool in_u = tab.attain[i] > tab.phi - c - kStrictMargin;
    const bool in_v = tab.level[i] < c + kStrictMargin;
    if (in_u && in_v) return false;
  }
  return true;
}

}  // namespace

bool uv_disjoint(const Point& ybar, double c, const SupConvSpec& sc, double s_anchor,
                 const std::vector<Point>& grid) {
  if (!(c > 0.0)) throw std::invalid_argument("uv_disjoint: c must be > 0");
  return disjoint_at(uv_table(ybar, sc, s_anchor, grid), c);
}

std::optional<double> largest_disjoint_c(const Point& ybar, double c_max, const SupConvSpec& sc,
                                         double s_anchor, const std::vector<Point>& grid,
                                         int steps) {
  if (!(c_max > 0.0)) throw std::invalid_argument("largest_disjoint_c: c_max must be > 0");
  const UVTable tab = uv_table(ybar, sc, s_anchor, grid);
  if (disjoint_at(tab, c_max)) return c_max;
  double lo = 0.0, hi = c_max;
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (disjoint_at(tab, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo <= 0.0) return std::nullopt;
  return lo;
}

}  // namespace mvi
