#include "mvi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvi::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point box_lo(const std::vector<Point>& pts) {
  Point lo = pts.front();
  for (const auto& p : pts) lo = lo.cwiseMin(p);
  return lo;
}

Point box_hi(const std::vector<Point>& pts) {
  Point hi = pts.front();
  for (const auto& p : pts) hi = hi.cwiseMax(p);
  return hi;
}

}  // namespace

GridInf grid_inf(const TestFunction& f, const Polytope& A, const Polytope& B, double delta,
                 int resolution) {
  const auto grid = sample_set(A, B, delta, resolution);
  const auto [value, arg] = grid_min([&](const Point& z) { return f.value(z); }, grid);
  if (!std::isfinite(value)) throw std::domain_error("grid_inf: f is +inf on every sample");
  const double h = grid_step(A, B, delta, resolution);
  const double R = max_norm(A, B) + delta + h;
  const double err = h * std::sqrt(double(A.dim())) * f.lipschitz(R);
  return {value, arg, err, h};
}

double brute_step(const TentSpec& t, int resolution) {
  if (resolution < 2) throw std::invalid_argument("brute_step: resolution must be >= 2");
  std::vector<Point> all = t.A().vertices();
  all.insert(all.end(), t.B().vertices().begin(), t.B().vertices().end());
  const double extent = (box_hi(all) - box_lo(all)).maxCoeff();
  return (extent > 0.0 ? extent : 1.0) / double(resolution - 1);
}

std::vector<Point> hull_lattice(const Polytope& S, double step) {
  const Point lo = box_lo(S.vertices());
  const Point hi = box_hi(S.vertices());
  const auto n = lo.size();
  Eigen::VectorXi counts(n);
  for (Eigen::Index j = 0; j < n; ++j) counts(j) = int(std::floor((hi(j) - lo(j)) / step + 1e-9)) + 1;

  std::vector<Point> out;
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(n);
  while (true) {
    Point z = lo + step * idx.cast<double>();
    if (distance_to_hull(z, S, S) <= 1e-12) out.push_back(std::move(z));
    Eigen::Index j = n - 1;
    while (j >= 0 && ++idx(j) >= counts(j)) idx(j--) = 0;
    if (j < 0) break;
  }
  for (const auto& v : S.vertices()) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Point& z) { return (z - v).norm() <= 1e-12; });
    if (!seen) out.push_back(v);
  }
  return out;
}

double psi_brute(const Point& x, const TentSpec& t, int resolution) {
  require_dim(x, t.dim(), "psi_brute");
  if (x.size() > 8) throw dimension_error("psi_brute: dimension above 8");
  const double step = brute_step(t, resolution);
  const auto gA = hull_lattice(t.A(), step);
  const auto gB = hull_lattice(t.B(), step);
  const double L = double(resolution - 1);
  const bool prefer_a = t.r() > t.s();

  const auto n = x.size();
  Eigen::MatrixXd UA(n, Eigen::Index(gA.size())), VB(n, Eigen::Index(gB.size()));
  for (std::size_t i = 0; i < gA.size(); ++i) UA.col(Eigen::Index(i)) = gA[i];
  for (std::size_t i = 0; i < gB.size(); ++i) VB.col(Eigen::Index(i)) = gB[i];
  const double step2 = step * step;

  double best = -kInf;
  double d[8], w[8];
  for (Eigen::Index a = 0; a < UA.cols(); ++a) {
    for (Eigen::Index b = 0; b < VB.cols(); ++b) {
      // ||lambda d - w|| <= step with d = u - v, w = x - v
      double dd = 0.0, dw = 0.0, ww = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        d[j] = UA(j, a) - VB(j, b);
        w[j] = x(j) - VB(j, b);
        dd += d[j] * d[j];
        dw += d[j] * w[j];
        ww += w[j] * w[j];
      }
      double lo, hi;
      if (dd == 0.0) {
        if (ww > step2) continue;
        lo = 0.0;
        hi = 1.0;
      } else {
        const double center = dw / dd;
        const double rest = step2 - (ww - center * dw);
        if (rest < 0.0) continue;
        const double half = std::sqrt(rest / dd);
        lo = std::max(0.0, center - half);
        hi = std::min(1.0, center + half);
      }
      const double k_lo = std::ceil(lo * L - 1e-12);
      const double k_hi = std::floor(hi * L + 1e-12);
      if (k_lo > k_hi) continue;
      const double lambda = (prefer_a ? k_hi : k_lo) / L;
      best = std::max(best, lambda * t.r() + (1.0 - lambda) * t.s());
    }
  }
  return best;
}

PsiTable psi_table(const TentSpec& t, int resolution) {
  const double step = brute_step(t, resolution);
  std::vector<Point> all = t.A().vertices();
  all.insert(all.end(), t.B().vertices().begin(), t.B().vertices().end());
  const auto pts = hull_lattice(Polytope(all), step);
  PsiTable table{pts, {}, step};
  table.values.reserve(pts.size());
  for (const auto& y : pts) table.values.push_back(psi_brute(y, t, resolution));
  return table;
}

double phi_brute(const Point& x, const SupConvSpec& sc, const PsiTable& table) {
  double best = -kInf;
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    best = std::max(best, table.values[i] - sc.K() * (x - table.points[i]).norm());
  }
  return best;
}

double phi_brute(const Point& x, const SupConvSpec& sc, int resolution) {
  return phi_brute(x, sc, psi_table(sc.tent(), resolution));
}

}  // namespace mvi::oracles
