#include "mvi/mdmvt.hpp"

#include "mvi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKMargin = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Smallest |r - s| over the interval [r_lo, r_hi] known to contain r.
double min_gap(double r_lo, double r_hi, double s) {
  if (s >= r_lo && s <= r_hi) return 0.0;
  return std::min(std::abs(r_lo - s), std::abs(r_hi - s));
}

}  // namespace

Estimate estimate_inf(const TestFunction& f, const Polytope& P, const Polytope& Q, double delta,
                      int resolution) {
  const auto grid = sample_set(P, Q, delta, resolution);
  const double h = grid_step(P, Q, delta, resolution);
  auto inside = [&](const Point& z) { return distance_to_hull(z, P, Q) <= delta + 1e-12; };

  double all_min = kInf;
  double best = kInf;
  Point arg;
  for (const auto& z : grid) {
    const double v = f.value(z);
    all_min = std::min(all_min, v);
    if (v < best && inside(z)) {
      best = v;
      arg = z;
    }
  }
  if (!std::isfinite(best)) throw spec_error("f is +inf on every sample of the set");

  const auto n = arg.size();
  double step = h;
  for (int it = 0; it < 20000 && step > 1e-11; ++it) {
    bool improved = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (double sign : {-1.0, 1.0}) {
        const Point z = arg + sign * step * Point::Unit(n, j);
        if (!inside(z)) continue;
        const double v = f.value(z);
        if (v < best) {
          best = v;
          arg = z;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  const double R = max_norm(P, Q) + delta + h;
  const double err = h * std::sqrt(double(n)) * f.lipschitz(R);
  return {best, std::min(best, all_min - err), arg};
}

Estimates estimate_infima(const ProblemSpec& ps) {
  return {estimate_inf(ps.f, ps.A, ps.A, 0.0, ps.resolution),
          estimate_inf(ps.f, ps.A, ps.B, ps.delta, ps.resolution),
          estimate_inf(ps.f, ps.B, ps.B, ps.delta, ps.resolution),
          estimate_inf(ps.f, ps.A, ps.B, 0.0, ps.resolution)};
}

void validate(const ProblemSpec& ps, const Estimates& est) {
  if (ps.f.dim() != ps.A.dim() || ps.A.dim() != ps.B.dim()) throw spec_error("dimensions of f, A and B differ");
  if (!(ps.delta > 0.0) || !std::isfinite(ps.delta)) throw spec_error("delta must be > 0");
  if (!(ps.epsilon > 0.0) || !std::isfinite(ps.epsilon)) throw spec_error("epsilon must be > 0");
  if (!std::isfinite(ps.mu) || !std::isfinite(ps.s)) throw spec_error("mu and s must be finite");
  if (ps.resolution < 2) throw spec_error("resolution must be >= 2");
  if (!(ps.mu < est.inf_C.lower)) {
    throw spec_error("mu = " + fmt(ps.mu) + " is not below inf_C f >= " + fmt(est.inf_C.lower));
  }
  if (!(ps.s < est.inf_Bd.lower)) {
    throw spec_error("s = " + fmt(ps.s) + " is not below inf over B_delta of f >= " + fmt(est.inf_Bd.lower));
  }
}

PipelineParams choose_params(const ProblemSpec& ps, const Estimates& est) {
  const double r = est.r.value;
  const double width = std::min({ps.epsilon, ps.epsilon * ps.delta, est.inf_Bd.lower - ps.s});
  if (!(width > 0.0)) throw spec_error("empty interval for s1");
  double s1 = ps.s + 0.5 * width;
  if (std::abs(s1 - r) < 1e-9 * std::max(1.0, std::abs(r))) s1 = ps.s + 0.75 * width;

  const double bound = (std::max(r, ps.s) - ps.mu) / ps.delta + ps.epsilon;
  for (int j = 1; j <= 60; ++j) {
    const double delta1 = ps.delta * (1.0 - std::ldexp(1.0, -j));
    if (!(delta1 < ps.delta)) break;
    const double K = (std::max(r, s1) - ps.mu) / delta1;
    if (K < bound - kKMargin) return {r, s1, delta1, K, j};
  }
  throw spec_error("no delta1 in (0, delta) satisfies the bound on K");
}

TestFunction restrict_f(const TestFunction& f, const Polytope& A, const Polytope& B, double delta) {
  return catalog::restricted(f, Domain::inflated_hull({A, B, delta}), catalog::BoundaryRule::empty);
}

Certificate run(const ProblemSpec& ps) {
  const Estimates est = estimate_infima(ps);
  validate(ps, est);
  const PipelineParams params = choose_params(ps, est);
  const TestFunction f1 = restrict_f(ps.f, ps.A, ps.B, ps.delta);
  const SupConvSpec sc(TentSpec(ps.A, ps.B, params.r, params.s1), params.K);
  const InflatedHull C = ps.C();
  const GapFunction g(f1, sc);

  const auto boundary = sample_boundary(ps.A, ps.B, ps.delta, ps.resolution);
  double max_phi = -kInf;
  double bound_g = kInf;
  for (const auto& x : boundary) {
    const double phi = phi_value(x, sc);
    max_phi = std::max(max_phi, phi);
    bound_g = std::min(bound_g, f1.value(x) - phi);
  }
  const double boundary_margin = ps.mu - max_phi;
  if (!(boundary_margin > 0.0)) {
    throw pipeline_error("phi_K reaches mu on the boundary of C (margin " + fmt(boundary_margin) + ")");
  }
  if (!(bound_g > 0.0)) throw pipeline_error("g is not positive on the boundary of C: " + fmt(bound_g));

  const auto grid = sample_set(ps.A, ps.B, ps.delta, ps.resolution);
  std::vector<double> g_grid(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g_grid[i] = g(grid[i]);
  const double inf_g = *std::min_element(g_grid.begin(), g_grid.end());
  if (!(inf_g <= ps.tol)) throw pipeline_error("grid inf of g is " + fmt(inf_g) + " > 0; r is misestimated");

  const double eps_bar = 0.5 * std::min({est.inf_C.lower - ps.mu, est.inf_Bd.lower - params.s1,
                                         (ps.delta - params.delta1) / (1.0 + 1.0 / params.K)});
  if (!(eps_bar > 0.0)) throw pipeline_error("no admissible eps_bar");

  DescentOptions dopts;
  dopts.resolution = ps.resolution;
  dopts.seed = ps.seed;
  const auto points = minimize_g(f1, sc, C, ps.schedule, dopts, grid, g_grid);
  const auto ab_grid = sample_set(ps.A, ps.B, 0.0, ps.resolution);

  const double r_lo = est.r.lower;
  const double value_rhs = est.inf_AB.lower + min_gap(r_lo, est.r.value, ps.s) + ps.epsilon;
  const double norm_rhs = (std::max(r_lo, ps.s) - ps.mu) / ps.delta + ps.epsilon;
  const double slope_lhs = ps.s - r_lo;

  std::vector<std::string> failures;
  std::vector<double> residuals(points.size(), std::nan(""));
  for (std::size_t n = 0; n < points.size(); ++n) {
    const EkelandPoint& ek = points[n];
    const std::string tag = "n=" + std::to_string(n) + ": ";
    const EvpCheck evp = evp_verify(ek.u, ek.value, ek.eps, grid, g_grid, ps.tol);
    if (!evp.ok) {
      failures.push_back(tag + "domination check failed, worst " + fmt(evp.worst));
      continue;
    }
    FuzzyPair fp;
    try {
      fp = fuzzy_pair(ek, f1, sc, ek.eps);
    } catch (const numerical_error& e) {
      failures.push_back(tag + e.what());
      continue;
    }
    residuals[n] = fp.residual;
    const double dist = distance_to_hull(fp.x, ps.A, ps.B);
    if (classify_point(fp.x, ps.A, ps.B, ps.delta) != Location::interior) {
      failures.push_back(tag + "xi is not interior to C");
      continue;
    }
    const double gap_xy = f1.value(fp.x) - phi_value(fp.y, sc);
    if (!(fp.separation < eps_bar && gap_xy < eps_bar)) {
      failures.push_back(tag + "pair not within eps_bar: separation " + fmt(fp.separation) + ", gap " + fmt(gap_xy));
      continue;
    }
    const auto c_n = largest_disjoint_c(fp.y, std::abs(params.r - params.s1), sc, params.s1, ab_grid);
    if (!c_n) {
      failures.push_back(tag + "no c_n separates U and V");
      continue;
    }

    Certificate cert{fp.x, fp.p,
                     {ps.f.value(fp.x), value_rhs},
                     {fp.p.norm(), norm_rhs},
                     {slope_lhs, inf_linear(fp.p, ps.B) - inf_linear(fp.p, ps.A)},
                     params, est, n, ek.eps, ek.u, ek.value, evp.worst, fp.y, fp.q, fp.residual,
                     fp.separation, eps_bar, ps.delta - dist, *c_n, boundary_margin, inf_g, bound_g, {}, {}, {}};
    if (!cert.value_bound.holds()) {
      failures.push_back(tag + "f(xi) bound fails, slack " + fmt(cert.value_bound.slack()));
    } else if (!cert.norm_bound.holds()) {
      failures.push_back(tag + "||p|| bound fails, slack " + fmt(cert.norm_bound.slack()));
    } else if (!cert.slope_gap.holds()) {
      failures.push_back(tag + "inf_B p - inf_A p bound fails, slack " + fmt(cert.slope_gap.slack()));
    } else {
      cert.trace = points;
      cert.residuals = residuals;
      cert.rejected = failures;
      return cert;
    }
  }
  std::string msg = "schedule exhausted without a certificate";
  for (const auto& f : failures) msg += "\n  " + f;
  throw pipeline_error(msg);
}

VerifyReport verify_certificate(const Point& xi, const Point& p, const ProblemSpec& ps) {
  VerifyReport rep{true, {}};
  auto add = [&](std::string name, bool ok, double lhs, double rhs, std::string detail) {
    rep.valid = rep.valid && ok;
    rep.checks.push_back({std::move(name), ok, lhs, rhs, std::move(detail)});
  };
  const auto n = ps.A.dim();
  if (xi.size() != n || p.size() != n) {
    add("dimension", false, double(xi.size()), double(n), "certificate dimension differs from the problem");
    return rep;
  }

  const double d = distance_to_hull(xi, ps.A, ps.B);
  add("membership", d < ps.delta, d, ps.delta, "d(xi, [A,B]) < delta");

  double nearest = kInf;
  const double fxi = ps.f.value(xi);
  if (std::isfinite(fxi)) {
    for (const auto& rep_p : ps.f.subgrad(xi)) nearest = std::min(nearest, (rep_p - p).norm());
  }
  add("subgradient", nearest <= 1e-8, nearest, 1e-8, "distance from p to the subgradient representatives at xi");

  const auto rA = oracles::grid_inf(ps.f, ps.A, ps.A, 0.0, ps.resolution);
  const auto iAB = oracles::grid_inf(ps.f, ps.A, ps.B, 0.0, ps.resolution);
  const double r_lo = rA.value - rA.error_bound;
  const double r_hi = rA.value;

  const double value_rhs = iAB.value - iAB.error_bound + min_gap(r_lo, r_hi, ps.s) + ps.epsilon;
  add("value_bound", fxi < value_rhs, fxi, value_rhs, "f(xi) < inf_[A,B] f + |r - s| + epsilon");

  const double norm_rhs = (std::max(r_lo, ps.s) - ps.mu) / ps.delta + ps.epsilon;
  add("norm_bound", p.norm() < norm_rhs, p.norm(), norm_rhs, "||p|| < (max{r, s} - mu) / delta + epsilon");

  const double gap = inf_linear(p, ps.B) - inf_linear(p, ps.A);
  add("slope_gap", gap > ps.s - r_lo, ps.s - r_lo, gap, "inf_B p - inf_A p > s - r");
  return rep;
}

}  // namespace mvi
