#include "mvi/simplex_optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvi {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw numerical_error(std::string("non-finite ") + what);
}

// Maximizes a concave function of t on [0, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, hi); ++it) {
    if (fc >= fd) {
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
  double t = 0.5 * (a + b);
  double ft = f(t);
  const double fhi = f(hi);
  if (fhi >= ft) {
    t = hi;
    ft = fhi;
  }
  return {t, ft};
}

}  // namespace

FrankWolfeResult maximize_concave(const ConcaveObjective& obj, SimplexDims dims,
                                  const FrankWolfeOptions& opts) {
  if (dims.mA < 1 || dims.mB < 1) throw std::invalid_argument("maximize_concave: mA, mB >= 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("maximize_concave: tol must be > 0");
  const auto m = Eigen::Index(dims.mA + dims.mB);
  auto eval = [&](const Eigen::VectorXd& w) {
    const double v = obj.value(HullCoords::split(w, dims.mA));
    check_finite(v, "objective value");
    return v;
  };

  Eigen::VectorXd w;
  double value;
  if (opts.start) {
    w = opts.start->joined();
    if (w.size() != m) throw dimension_error("maximize_concave: start has wrong size");
    value = eval(w);
  } else {
    value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(m, k);
      const double v = eval(e);
      if (v > value) {
        value = v;
        w = e;
      }
    }
  }

  FrankWolfeResult res{HullCoords::split(w, dims.mA), value, 0.0, 0, false, {value}};
  double gap = std::numeric_limits<double>::infinity();
  int stalls = 0;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const Eigen::VectorXd g = obj.supergradient(HullCoords::split(w, dims.mA));
    if (!g.allFinite()) throw numerical_error("non-finite supergradient");
    const double gw = g.dot(w);
    Eigen::Index s = 0;
    const double gs = g.maxCoeff(&s);
    gap = gs - gw;
    if (gap <= opts.tol) {
      res.converged = true;
      break;
    }

    Eigen::Index away = -1;
    double ga = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
      if (w(k) > 0.0 && g(k) < ga) {
        ga = g(k);
        away = k;
      }
    }
    const double away_gap = gw - ga;

    Eigen::VectorXd dir;
    double tmax = 1.0;
    if (gap >= away_gap || away < 0 || w(away) >= 1.0) {
      dir = Eigen::VectorXd::Unit(m, s) - w;
    } else {
      dir = w - Eigen::VectorXd::Unit(m, away);
      tmax = w(away) / (1.0 - w(away));
    }

    auto along = [&](double t) { return eval(w + t * dir); };
    const auto [t, ft] = golden_max(along, tmax);
    if (ft > value) {
      w += t * dir;
      for (Eigen::Index k = 0; k < m; ++k) {
        if (w(k) < 1e-16) w(k) = 0.0;
      }
      w /= w.sum();
      value = eval(w);
      stalls = 0;
    } else if (++stalls >= 3) {
      break;
    }
    res.history.push_back(value);
  }

  res.coords = HullCoords::split(w, dims.mA);
  res.value = value;
  res.gap = gap;
  res.iterations = it;
  return res;
}

namespace {

class Tableau {
 public:
  Tableau(Eigen::MatrixXd T, std::vector<Eigen::Index> basis)
      : T_(std::move(T)), basis_(std::move(basis)) {}

  Eigen::Index rows() const { return T_.rows(); }
  Eigen::Index rhs_col() const { return T_.cols() - 1; }

  // Reduced costs d_j = c_j - c_B^T T_j for a maximization objective.
  Eigen::VectorXd reduced_costs(const Eigen::VectorXd& c) const {
    Eigen::VectorXd cB(rows());
    for (Eigen::Index i = 0; i < rows(); ++i) cB(i) = c(basis_[std::size_t(i)]);
    return c - T_.leftCols(c.size()).transpose() * cB;
  }

  double objective(const Eigen::VectorXd& c) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < rows(); ++i) v += c(basis_[std::size_t(i)]) * T_(i, rhs_col());
    return v;
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    T_.row(r) /= T_(r, col);
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (i != r && T_(i, col) != 0.0) T_.row(i) -= T_(i, col) * T_.row(r);
    }
    basis_[std::size_t(r)] = col;
  }

  // Bland's rule; columns >= allowed never enter.
  void optimize(const Eigen::VectorXd& c, Eigen::Index allowed) {
    constexpr double kCostTol = 1e-11;
    constexpr double kPivotTol = 1e-11;
    std::vector<bool> blocked(std::size_t(allowed), false);
    for (int iter = 0; iter < 100000; ++iter) {
      const Eigen::VectorXd d = reduced_costs(c);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (d(j) > kCostTol && !blocked[std::size_t(j)]) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = T_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = T_(i, rhs_col()) / a;
        if (ratio < best - 1e-14) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-14 && basis_[std::size_t(i)] < basis_[std::size_t(leave)]) {
          leave = i;
        }
      }
      if (leave < 0) {
        // a ray with a noise-level reduced cost is not a real improving direction
        if (d(enter) < 1e-8) {
          blocked[std::size_t(enter)] = true;
          continue;
        }
        throw numerical_error("solve_lp: unbounded linear program");
      }
      pivot(leave, enter);
      std::fill(blocked.begin(), blocked.end(), false);
    }
    throw numerical_error("solve_lp: iteration limit");
  }

  Eigen::MatrixXd& data() { return T_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

 private:
  Eigen::MatrixXd T_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LPResult solve_lp(const LPProblem& lp) {
  const Eigen::Index m = lp.A_eq.rows();
  const Eigen::Index n = lp.A_eq.cols();
  if (lp.objective.size() != n || lp.b_eq.size() != m) throw dimension_error("solve_lp: shape mismatch");
  if (!lp.A_eq.allFinite() || !lp.b_eq.allFinite() || !lp.objective.allFinite()) {
    throw std::invalid_argument("solve_lp: non-finite data");
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, n + m + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = lp.b_eq(i) < 0.0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign * lp.A_eq.row(i);
    T(i, n + i) = 1.0;
    T(i, n + m) = sign * lp.b_eq(i);
    basis[std::size_t(i)] = n + i;
  }
  Tableau tab(std::move(T), std::move(basis));

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  tab.optimize(phase1, n + m);
  const double scale = std::max(1.0, lp.b_eq.lpNorm<Eigen::Infinity>());
  if (tab.objective(phase1) < -1e-9 * scale) {
    return {false, Eigen::VectorXd::Zero(n), -std::numeric_limits<double>::infinity()};
  }

  // Drive zero-level artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[std::size_t(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.data()(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = lp.objective;
  tab.optimize(phase2, n);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto b = tab.basis()[std::size_t(i)];
    if (b < n) x(b) = std::max(0.0, tab.data()(i, tab.rhs_col()));
  }
  return {true, x, lp.objective.dot(x)};
}

}  // namespace mvi
