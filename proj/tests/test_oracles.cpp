#include "common.hpp"

#include "mvi/functions.hpp"
#include "mvi/oracles.hpp"

using namespace mvi;
using test::P;
using test::poly;

TEST_CASE("grid_inf examples") {
  auto gi = oracles::grid_inf(catalog::linear(P({1}), 0.0), poly({{0}}), poly({{1}}), 0.5, 201);
  CHECK(gi.value == doctest::Approx(-0.5));
  CHECK(gi.argmin(0) == doctest::Approx(-0.5));
  CHECK(gi.error_bound == doctest::Approx(0.01));

  gi = oracles::grid_inf(catalog::norm(P({0})), poly({{0}}), poly({{1}}), 0.0, 101);
  CHECK(gi.value == 0.0);
  CHECK(gi.argmin(0) == 0.0);

  const auto q = catalog::quadratic(Eigen::MatrixXd::Identity(1, 1), P({-0.3}), 0.045);
  gi = oracles::grid_inf(q, poly({{1}}), poly({{1}}), 0.5, 101);
  CHECK(gi.value == doctest::Approx(0.02));
  CHECK(gi.argmin(0) == doctest::Approx(0.5));

  const auto nowhere = catalog::restricted(catalog::linear(P({1}), 0.0), Domain::half_space(P({1}), -5.0));
  CHECK_THROWS_AS(oracles::grid_inf(nowhere, poly({{0}}), poly({{1}}), 0.5, 11), std::domain_error);
}

TEST_CASE("psi_brute examples") {
  CHECK(oracles::psi_brute(P({0.25}), test::canonical_tent(), 10001) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(oracles::psi_brute(P({2}), test::canonical_tent(), 101) == -std::numeric_limits<double>::infinity());
  const TentSpec t(poly({{0}}), poly({{1}}), 2.0, 1.0);
  CHECK(std::abs(oracles::psi_brute(P({0.5}), t, 1001) - 1.5) <= oracles::brute_step(t, 1001));
}

TEST_CASE("phi_brute examples") {
  const SupConvSpec one(test::canonical_tent(), 1.0);
  const double step = oracles::brute_step(one.tent(), 1001);
  CHECK(std::abs(oracles::phi_brute(P({2}), one, 1001)) <= step);

  const SupConvSpec huge(test::canonical_tent(), 1e6);
  const auto table = oracles::psi_table(huge.tent(), 1001);
  for (double x : {0.0, 0.123, 0.5, 0.9}) {
    CHECK(std::abs(oracles::phi_brute(P({x}), huge, table) - oracles::psi_brute(P({x}), huge.tent(), 1001)) <= step);
  }
  const SupConvSpec sq(test::square_tent(), 0.8);
  CHECK(oracles::phi_brute(P({2, 1}), sq, 41) >= 3.0 - oracles::brute_step(sq.tent(), 41));
}

TEST_CASE("hull_lattice stays in the hull and keeps vertices") {
  const auto S = poly({{0, 0}, {1, 0}, {0.2, 0.9}});
  const auto pts = oracles::hull_lattice(S, 0.05);
  for (const auto& z : pts) CHECK(distance_to_hull(z, S, S) <= 1e-12);
  for (const auto& v : S.vertices()) {
    CHECK(std::any_of(pts.begin(), pts.end(), [&](const Point& z) { return (z - v).norm() <= 1e-12; }));
  }
}

TEST_CASE("oracle error shrinks linearly with the step") {
  const TentSpec t(poly({{0}}), poly({{1}}), 0.0, 0.7);
  std::vector<double> errs;
  for (int res : {101, 1001, 10001}) {
    double worst = 0.0;
    for (double x : {0.1234, 0.3777, 0.6543, 0.9111}) {
      worst = std::max(worst, std::abs(oracles::psi_brute(P({x}), t, res) - 0.7 * x));
    }
    errs.push_back(worst);
    CHECK(worst <= 0.7 * oracles::brute_step(t, res) + 1e-12);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
}
