#include "common.hpp"

#include "mvi/ekeland.hpp"
#include "mvi/oracles.hpp"

using namespace mvi;
using test::P;
using test::poly;

namespace {

const InflatedHull kC{poly({{0}}), poly({{1}}), 0.5};

SupConvSpec pipeline_spec() { return {TentSpec(poly({{0}}), poly({{1}}), 0.0, 0.425), 2.0825}; }

TestFunction restricted_to_C(const TestFunction& f) {
  return catalog::restricted(f, Domain::inflated_hull(kC), catalog::BoundaryRule::empty);
}

// phi_K plus (w/2)(x - c)^2 as a catalog-like member
TestFunction phi_plus_quadratic(const SupConvSpec& sc, double w, double c) {
  return TestFunction(
      "phi_plus_quadratic", {}, 1,
      [sc, w, c](const Point& x) { return phi_value(x, sc) + 0.5 * w * (x(0) - c) * (x(0) - c); },
      [sc, w, c](const Point& x) {
        return std::vector<Point>{phi_supergradient(x, sc).p + P({w * (x(0) - c)})};
      },
      [sc, w](double R) { return sc.K() + w * R; }, false);
}

}  // namespace

TEST_CASE("default schedule") {
  const auto s = default_schedule();
  REQUIRE(s.size() == 9);
  CHECK(s.front() == doctest::Approx(0.1));
  CHECK(s.back() == doctest::Approx(1e-5));
}

TEST_CASE("minimize_g for f(x) = x matches the dense-grid argmin") {
  const auto sc = pipeline_spec();
  const auto f1 = restricted_to_C(catalog::linear(P({1}), 0.0));
  const auto sched = default_schedule();
  const auto pts = minimize_g(f1, sc, kC, sched);
  REQUIRE(pts.size() == sched.size());

  // brute-force g on a 1e-4 grid of C with the phi oracle
  const auto table = oracles::psi_table(sc.tent(), 2001);
  double best = 1e300, arg = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = -0.5 + 1e-4 * i;
    const double g = x - oracles::phi_brute(P({x}), sc, table);
    if (g < best) {
      best = g;
      arg = x;
    }
  }
  const double slack = table.step * (sc.K() + 0.425);
  CHECK(pts.back().value <= best + slack + sched.back());
  CHECK(std::abs(pts.back().u(0) - arg) <= 1e-3);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].value <= pts[i - 1].value);
}

TEST_CASE("minimize_g when g vanishes identically") {
  const auto sc = pipeline_spec();
  const auto f1 = restricted_to_C(phi_plus_quadratic(sc, 0.0, 0.0));
  const auto pts = minimize_g(f1, sc, kC, std::vector<double>{0.1, 0.01});
  for (const auto& e : pts) CHECK(std::abs(e.value) <= 1e-12);
}

TEST_CASE("minimize_g on a centered quadratic gap") {
  const auto sc = pipeline_spec();
  const auto f1 = restricted_to_C(phi_plus_quadratic(sc, 1.0, 0.5));
  const auto pts = minimize_g(f1, sc, kC, default_schedule());
  CHECK(pts.back().u(0) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(std::abs(pts.back().value) <= 1e-9);
}

TEST_CASE("minimize_g is deterministic and validates input") {
  const SupConvSpec sc(test::square_tent(), 1.5);
  const InflatedHull C{sc.tent().A(), sc.tent().B(), 0.3};
  const auto f1 = catalog::restricted(catalog::quadratic(Eigen::MatrixXd::Identity(2, 2), P({-1, -0.5})),
                                      Domain::inflated_hull(C), catalog::BoundaryRule::empty);
  DescentOptions opts;
  opts.resolution = 21;
  opts.seed = 5;
  const std::vector<double> sched{0.1, 0.01, 0.001};
  const auto a = minimize_g(f1, sc, C, sched, opts);
  const auto b = minimize_g(f1, sc, C, sched, opts);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].value == b[i].value);
  }
  CHECK_THROWS_AS(minimize_g(f1, sc, C, std::vector<double>{0.1, 0.1}, opts), std::invalid_argument);
  CHECK_THROWS_AS(minimize_g(f1, sc, C, std::vector<double>{}, opts), std::invalid_argument);

  const auto nowhere = catalog::restricted(catalog::linear(P({1, 0}), 0.0), Domain::half_space(P({1, 0}), -5.0));
  CHECK_THROWS_AS(minimize_g(nowhere, sc, C, sched, opts), std::domain_error);
}

TEST_CASE("evp_verify examples") {
  const auto sc = pipeline_spec();
  const auto f1 = restricted_to_C(catalog::linear(P({1}), 0.0));
  const auto grid = sample_set(kC.A, kC.B, kC.delta, 201);
  const GapFunction g(f1, sc);

  // exact grid argmin
  Point arg = grid.front();
  for (const auto& z : grid) {
    if (g(z) < g(arg)) arg = z;
  }
  CHECK(evp_verify(arg, 1e-6, f1, sc, grid).ok);

  // g(u) = grid inf + 0.5, so the argmin violates by about 0.5 - eps |u - argmin|
  const Point u = P({0.5 / 0.575});
  REQUIRE(g(u) == doctest::Approx(0.5).epsilon(1e-6));
  const auto bad = evp_verify(u, 1e-3, f1, sc, grid);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst == doctest::Approx(-0.5 + 1e-3 * u(0)).epsilon(1e-6));

  const auto zero = restricted_to_C(phi_plus_quadratic(sc, 0.0, 0.0));
  const auto ok = evp_verify(P({0.3}), 0.05, zero, sc, grid);
  CHECK(ok.ok);
  CHECK(ok.worst >= -1e-12);
}

TEST_CASE("fuzzy_pair at a smooth point of phi") {
  const auto sc = pipeline_spec();
  const auto f = catalog::linear(P({1}), 0.0);
  const EkelandPoint u{P({0.5}), 0.1, 0.5 - phi_value(P({0.5}), sc)};
  const auto fp = fuzzy_pair(u, f, sc, u.eps);
  CHECK(fp.p(0) == doctest::Approx(1.0));
  CHECK(fp.q(0) == doctest::Approx(-0.425).epsilon(1e-6));
  CHECK(fp.residual == doctest::Approx(0.575).epsilon(1e-6));
  CHECK(fp.separation == 0.0);
  CHECK_THROWS_AS(fuzzy_pair(u, f, sc, u.eps, 1.0), numerical_error);
}

TEST_CASE("fuzzy_pair cancels gradients at the exact minimum") {
  const auto sc = pipeline_spec();
  const auto f = phi_plus_quadratic(sc, 1.0, 0.5);
  const EkelandPoint u{P({0.5}), 1e-3, 0.0};
  const auto fp = fuzzy_pair(u, f, sc, u.eps);
  CHECK(fp.residual <= 1e-6);
  CHECK(fp.p(0) == doctest::Approx(0.425).epsilon(1e-6));
}

TEST_CASE("fuzzy_pair picks the best representative of |x|") {
  const SupConvSpec sc(TentSpec(poly({{-1}}), poly({{1}}), 0.0, 0.5), 2.0);
  const auto f = catalog::restricted(catalog::norm(P({0})), Domain::polytope(poly({{-2}, {2}})));
  const EkelandPoint u{P({0}), 0.1, -phi_value(P({0}), sc)};
  const auto fp = fuzzy_pair(u, f, sc, u.eps);
  CHECK(fp.p(0) == 1.0);
  CHECK(fp.residual == doctest::Approx(0.75).epsilon(1e-6));

  // contracts on the returned pair
  std::vector<Point> local;
  for (int i = -50; i <= 50; ++i) local.push_back(fp.x + P({1e-3 * i}));
  CHECK(eps_subdiff_check(f, fp.x, fp.p, 1e-7, local));
  for (const auto& z : local) {
    CHECK((-fp.q).dot(z - fp.y) >= phi_value(z, sc) - phi_value(fp.y, sc) - 1e-7);
  }
}
