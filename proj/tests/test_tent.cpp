#include "common.hpp"

#include "mvi/oracles.hpp"

using namespace mvi;
using test::P;
using test::poly;

TEST_CASE("psi: linear interpolation on a segment") {
  const auto v = psi_eval(P({0.25}), test::canonical_tent());
  REQUIRE(v.finite());
  CHECK(v.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(v.coords->lambda() == doctest::Approx(0.75));
}

TEST_CASE("psi is -inf off the hull") {
  const auto v = psi_eval(P({2}), test::canonical_tent());
  CHECK_FALSE(v.finite());
  CHECK(v.value == -std::numeric_limits<double>::infinity());
}

TEST_CASE("psi on the square instance") {
  const auto t = test::square_tent();
  const double v = psi_eval(P({1, 0.5}), t).value;
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  // brute force over (lambda, u, v) at lattice step 1e-3
  CHECK(std::abs(v - oracles::psi_brute(P({1, 0.5}), t, 2001)) <= 5e-3);
}

TEST_CASE("psi rejects r == s and mismatched dimensions") {
  CHECK_THROWS_AS(TentSpec(poly({{0}}), poly({{1}}), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TentSpec(poly({{0}}), poly({{1, 0}}), 0.0, 1.0), dimension_error);
  CHECK_THROWS_AS(psi_eval(P({0, 0}), test::canonical_tent()), dimension_error);
}

TEST_CASE("eps-superdifferential of psi") {
  const auto t = test::canonical_tent();
  const auto grid = sample_set(t.A(), t.B(), 0.0, 101);
  CHECK(eps_superdiff_check_psi(P({1}), P({0.5}), 0.0, t, grid).ok);
  const auto bad = eps_superdiff_check_psi(P({0}), P({0.5}), 0.0, t, grid);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_violation == doctest::Approx(0.5));
  CHECK(bad.witness(0) == doctest::Approx(1.0));
  CHECK(eps_superdiff_check_psi(P({0}), P({0.5}), 0.5, t, grid).ok);
  CHECK_THROWS_AS(eps_superdiff_check_psi(P({0}), P({3}), 0.0, t, grid), std::domain_error);
}

TEST_CASE("exact eps of a slope") {
  const auto t = test::canonical_tent();
  CHECK(exact_superdiff_eps(P({1}), P({0.5}), t) == doctest::Approx(0.0));
  CHECK(exact_superdiff_eps(P({0}), P({0.5}), t) == doctest::Approx(0.5));
}

TEST_CASE("slope bound on eps-supergradients") {
  const auto t = test::canonical_tent();
  auto b = psi_slope_bound_check(P({1}), P({0.5}), 0.0, t);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(-1.0));
  CHECK(b.rhs == doctest::Approx(-1.0));
  b = psi_slope_bound_check(P({1}), P({0.5}), 0.1, t);
  CHECK(b.holds);
  CHECK(b.rhs == doctest::Approx(-0.8));
  b = psi_slope_bound_check(P({1}), P({0}), 0.0, t);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(-1.0));
  CHECK(b.rhs == doctest::Approx(-1.0));
  CHECK_THROWS_AS(psi_slope_bound_check(P({1}), P({1}), 0.0, t), std::domain_error);
}

namespace {

std::vector<TentSpec> tents() {
  return {test::canonical_tent(),
          TentSpec(poly({{0}}), poly({{1}}), 2.0, -0.5),
          test::square_tent(),
          TentSpec(poly({{0, 0}, {1, 0}}), poly({{0.3, 1.2}, {1.4, 0.9}, {0.8, 2}}), 0.4, -1.1),
          TentSpec(poly({{0, 0, 0}, {1, 0, 0}}), poly({{0, 1, 1}}), -0.3, 0.6)};
}

std::vector<Point> hull_points(const TentSpec& t, int res) {
  std::vector<Point> out;
  for (const auto& x : sample_set(t.A(), t.B(), 0.0, res)) {
    if (distance_to_hull(x, t.A(), t.B()) <= 1e-12) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("psi is concave on the hull") {
  std::mt19937_64 rng(1);
  for (const auto& t : tents()) {
    const auto pts = hull_points(t, t.dim() == 3 ? 7 : 15);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int k = 0; k < 200; ++k) {
      const Point& x = pts[pick(rng)];
      const Point& y = pts[pick(rng)];
      const double mid = psi_eval(0.5 * (x + y), t).value;
      CHECK(mid >= 0.5 * psi_eval(x, t).value + 0.5 * psi_eval(y, t).value - 1e-7);
    }
  }
}

TEST_CASE("psi range, anchors, and distance to B") {
  for (const auto& t : tents()) {
    const double lo = std::min(t.r(), t.s()), hi = std::max(t.r(), t.s());
    const double diam = diameter(t.A(), t.B());
    for (const auto& x : hull_points(t, t.dim() == 3 ? 7 : 21)) {
      const auto v = psi_eval(x, t);
      REQUIRE(v.finite());
      CHECK(v.value >= lo - 1e-7);
      CHECK(v.value <= hi + 1e-7);
      CHECK(distance_to_hull(x, t.B(), t.B()) <= std::abs(t.s() - v.value) / std::abs(t.s() - t.r()) * diam + 1e-6);
      // the attaining coordinates witness the same bound through lambda
      CHECK(v.coords->lambda() == doctest::Approx((v.value - t.s()) / (t.r() - t.s())).epsilon(1e-6));
    }
    for (const auto& a : t.A().vertices()) CHECK(psi_eval(a, t).value >= t.r() - 1e-9);
    for (const auto& b : t.B().vertices()) CHECK(psi_eval(b, t).value >= t.s() - 1e-9);
  }
}

TEST_CASE("psi slope bound holds for exact eps-supergradients") {
  std::mt19937_64 rng(4);
  for (const auto& t : tents()) {
    const auto pts = hull_points(t, t.dim() == 3 ? 7 : 15);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::normal_distribution<double> g(0.0, 2.0);
    int used = 0;
    for (int k = 0; k < 400 && used < 60; ++k) {
      const Point& x0 = pts[pick(rng)];
      const double psi = psi_eval(x0, t).value;
      if (std::abs(psi - t.s()) < 0.05) continue;
      Point p(t.dim());
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = g(rng);
      const double eps = exact_superdiff_eps(p, x0, t);
      CHECK(psi_slope_bound_check(p, x0, eps, t, 1e-6).holds);
      ++used;
    }
  }
}
