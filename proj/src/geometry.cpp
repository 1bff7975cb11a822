#include "mvi/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mvi {

Polytope::Polytope(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("polytope needs at least one vertex");
  const auto n = vertices_.front().size();
  if (n < 1) throw dimension_error("polytope vertices must have dimension >= 1");
  for (const auto& v : vertices_) {
    if (v.size() != n) throw dimension_error("polytope vertices differ in dimension");
    if (!v.allFinite()) throw std::invalid_argument("polytope vertex is not finite");
  }
}

Point HullCoords::point(const Polytope& A, const Polytope& B) const {
  Point y = Point::Zero(A.dim());
  for (std::size_t i = 0; i < A.size(); ++i) y += gamma(Eigen::Index(i)) * A[i];
  for (std::size_t j = 0; j < B.size(); ++j) y += eta(Eigen::Index(j)) * B[j];
  return y;
}

Eigen::VectorXd HullCoords::joined() const {
  Eigen::VectorXd w(gamma.size() + eta.size());
  w << gamma, eta;
  return w;
}

HullCoords HullCoords::split(const Eigen::VectorXd& w, std::size_t mA) {
  const auto a = Eigen::Index(mA);
  return {w.head(a), w.tail(w.size() - a)};
}

void require_dim(const Point& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw dimension_error(std::string(what) + ": expected dimension " + std::to_string(n) +
                          ", got " + std::to_string(x.size()));
  }
}

Eigen::MatrixXd hull_matrix(const Polytope& A, const Polytope& B) {
  if (A.dim() != B.dim()) throw dimension_error("A and B differ in dimension");
  Eigen::MatrixXd V(A.dim(), Eigen::Index(A.size() + B.size()));
  Eigen::Index k = 0;
  for (const auto& v : A.vertices()) V.col(k++) = v;
  for (const auto& v : B.vertices()) V.col(k++) = v;
  return V;
}

namespace {

// Affine minimizer of ||P_S a|| subject to sum(a) = 1.
Eigen::VectorXd affine_min(const Eigen::MatrixXd& P, const std::vector<Eigen::Index>& S) {
  const auto k = Eigen::Index(S.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) M(i, j) = P.col(S[i]).dot(P.col(S[j]));
    M(i, k) = 1.0;
    M(k, i) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol = M.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd alpha = sol.head(k);
  const double total = alpha.sum();
  if (std::abs(total) > 1e-300) alpha /= total;
  return alpha;
}

// Wolfe's algorithm: weights of the minimum-norm point of conv(columns of P).
Eigen::VectorXd min_norm_weights(const Eigen::MatrixXd& P) {
  const Eigen::Index m = P.cols();
  Eigen::VectorXd full = Eigen::VectorXd::Zero(m);
  Eigen::Index start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  if (m == 1) {
    full(0) = 1.0;
    return full;
  }
  const double scale = std::max(1.0, P.colwise().squaredNorm().maxCoeff());
  constexpr double kDrop = 1e-15;

  std::vector<Eigen::Index> S{start};
  std::vector<double> w{1.0};
  Point y = P.col(start);

  for (int major = 0; major < 10 * int(m) + 100; ++major) {
    Eigen::Index j = 0;
    const double best = (P.transpose() * y).minCoeff(&j);
    if (y.squaredNorm() - best <= 1e-14 * scale) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    w.push_back(0.0);

    for (int minor = 0; minor < int(m) + 10; ++minor) {
      const Eigen::VectorXd alpha = affine_min(P, S);
      if (alpha.minCoeff() > kDrop) {
        for (std::size_t i = 0; i < S.size(); ++i) w[i] = alpha(Eigen::Index(i));
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < S.size(); ++i) {
        const double a = alpha(Eigen::Index(i));
        if (a <= kDrop && w[i] - a > 0.0) theta = std::min(theta, w[i] / (w[i] - a));
      }
      for (std::size_t i = 0; i < S.size(); ++i) {
        w[i] = theta * alpha(Eigen::Index(i)) + (1.0 - theta) * w[i];
      }
      std::vector<Eigen::Index> keptS;
      std::vector<double> keptW;
      for (std::size_t i = 0; i < S.size(); ++i) {
        if (w[i] > kDrop) {
          keptS.push_back(S[i]);
          keptW.push_back(w[i]);
        }
      }
      if (keptS.empty()) {
        keptS.push_back(j);
        keptW.push_back(1.0);
      }
      double total = 0.0;
      for (double v : keptW) total += v;
      for (double& v : keptW) v /= total;
      S = std::move(keptS);
      w = std::move(keptW);
    }
    y.setZero();
    for (std::size_t i = 0; i < S.size(); ++i) y += w[i] * P.col(S[i]);
  }
  for (std::size_t i = 0; i < S.size(); ++i) full(S[i]) = w[i];
  return full;
}

}  // namespace

HullProjection dist_to_hull(const Point& x, const Polytope& A, const Polytope& B) {
  const Eigen::MatrixXd V = hull_matrix(A, B);
  require_dim(x, V.rows(), "dist_to_hull");
  const Eigen::MatrixXd P = V.colwise() - x;
  const Eigen::VectorXd w = min_norm_weights(P);
  const Point y = V * w;
  return {(x - y).norm(), y, HullCoords::split(w, A.size())};
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::interior: return "interior";
    case Location::boundary: return "boundary";
    case Location::exterior: return "exterior";
  }
  return "?";
}

Location classify_point(const Point& x, const Polytope& A, const Polytope& B, double delta,
                        double tol) {
  if (!(delta > 0.0) || !(tol > 0.0)) throw std::invalid_argument("classify_point: delta, tol > 0");
  const double d = distance_to_hull(x, A, B);
  if (d < delta - tol) return Location::interior;
  if (d > delta + tol) return Location::exterior;
  return Location::boundary;
}

double inf_linear(const Point& p, const Polytope& S) {
  require_dim(p, S.dim(), "inf_linear");
  double best = p.dot(S[0]);
  for (const auto& v : S.vertices()) best = std::min(best, p.dot(v));
  return best;
}

namespace {

struct Box {
  Eigen::VectorXd lo, hi;
  std::vector<int> counts;
  Eigen::VectorXd step;
};

Box make_box(const Polytope& A, const Polytope& B, double delta, int resolution) {
  if (resolution < 2) throw std::invalid_argument("sample_set: resolution must be >= 2");
  if (!(delta >= 0.0)) throw std::invalid_argument("sample_set: delta must be >= 0");
  const Eigen::MatrixXd V = hull_matrix(A, B);
  Box box;
  box.lo = V.rowwise().minCoeff().array() - delta;
  box.hi = V.rowwise().maxCoeff().array() + delta;
  const auto n = V.rows();
  box.step = Eigen::VectorXd::Zero(n);
  box.counts.assign(std::size_t(n), 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double width = box.hi(k) - box.lo(k);
    if (width > 1e-14 * std::max(1.0, std::abs(box.hi(k)))) {
      box.counts[std::size_t(k)] = resolution;
      box.step(k) = width / (resolution - 1);
    }
  }
  return box;
}

template <typename Visit>
void for_each_grid_point(const Box& box, Visit&& visit) {
  const auto n = box.lo.size();
  std::vector<int> idx(std::size_t(n), 0);
  Point x(n);
  while (true) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const int i = idx[std::size_t(k)];
      const int c = box.counts[std::size_t(k)];
      // hit the upper end exactly rather than accumulating round-off
      x(k) = (i == c - 1 && c > 1) ? box.hi(k) : box.lo(k) + i * box.step(k);
    }
    visit(x);
    Eigen::Index k = n - 1;
    while (k >= 0) {
      auto& i = idx[std::size_t(k)];
      if (++i < box.counts[std::size_t(k)]) break;
      i = 0;
      --k;
    }
    if (k < 0) break;
  }
}

bool contains_close(const std::vector<Point>& pts, const Point& v) {
  return std::any_of(pts.begin(), pts.end(),
                     [&](const Point& q) { return (q - v).lpNorm<Eigen::Infinity>() <= 1e-12; });
}

}  // namespace

double grid_step(const Polytope& A, const Polytope& B, double delta, int resolution) {
  const Box box = make_box(A, B, delta, resolution);
  return box.step.size() ? box.step.maxCoeff() : 0.0;
}

std::vector<Point> sample_set(const Polytope& A, const Polytope& B, double delta,
                              int resolution) {
  const Box box = make_box(A, B, delta, resolution);
  const double h = box.step.maxCoeff();
  std::vector<Point> out;
  for_each_grid_point(box, [&](const Point& x) {
    if (distance_to_hull(x, A, B) <= delta + h + 1e-12) out.push_back(x);
  });
  for (const auto* S : {&A, &B}) {
    for (const auto& v : S->vertices()) {
      if (!contains_close(out, v)) out.push_back(v);
    }
  }
  return out;
}

std::vector<Point> sample_boundary(const Polytope& A, const Polytope& B, double delta,
                                   int resolution) {
  if (!(delta > 0.0)) throw std::invalid_argument("sample_boundary: delta must be > 0");
  const Box box = make_box(A, B, delta, resolution);
  std::vector<Point> out;
  for_each_grid_point(box, [&](const Point& x) {
    const HullProjection proj = dist_to_hull(x, A, B);
    if (proj.distance <= 1e-9) return;
    const Point b = proj.nearest + (delta / proj.distance) * (x - proj.nearest);
    if (!contains_close(out, b)) out.push_back(b);
  });
  return out;
}

double diameter(const Polytope& A, const Polytope& B) {
  const Eigen::MatrixXd V = hull_matrix(A, B);
  double best = 0.0;
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < V.cols(); ++j) best = std::max(best, (V.col(i) - V.col(j)).norm());
  }
  return best;
}

double max_norm(const Polytope& A, const Polytope& B) {
  return hull_matrix(A, B).colwise().norm().maxCoeff();
}

}  // namespace mvi
