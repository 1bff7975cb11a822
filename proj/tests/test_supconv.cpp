#include "common.hpp"

#include "mvi/oracles.hpp"
#include "mvi/simplex_optim.hpp"
#include "mvi/supconv.hpp"

using namespace mvi;
using test::P;
using test::poly;

namespace {

SupConvSpec canonical(double K) { return {test::canonical_tent(), K}; }

std::vector<SupConvSpec> specs() {
  return {canonical(2.0), canonical(0.7), SupConvSpec(TentSpec(poly({{0}}), poly({{1}}), 0.0, 0.425), 2.0825),
          SupConvSpec(test::square_tent(), 1.5),
          SupConvSpec(TentSpec(poly({{0, 0}, {1, 0}}), poly({{0.3, 1.2}, {1.4, 0.9}}), 0.4, -1.1), 3.0),
          SupConvSpec(TentSpec(poly({{0, 0, 0}, {1, 0, 0}}), poly({{0, 1, 1}}), -0.3, 0.6), 2.0)};
}

std::pair<Point, Point> box(const SupConvSpec& sc, double pad) {
  const Eigen::MatrixXd& V = sc.tent().vertices();
  return {V.rowwise().minCoeff().array() - pad, V.rowwise().maxCoeff().array() + pad};
}

}  // namespace

TEST_CASE("phi equals psi on the segment when K exceeds the slope") {
  const auto v = phi_eval(P({0.5}), canonical(2.0));
  CHECK(v.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(v.argmax(0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("phi to the right of B") {
  const auto v = phi_eval(P({2}), canonical(1.0));
  CHECK(std::abs(v.value) < 1e-9);
  CHECK(v.argmax(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("phi to the left of A") {
  const auto v = phi_eval(P({-0.5}), canonical(2.0));
  CHECK(v.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(v.argmax(0)) < 1e-6);
}

TEST_CASE("phi_eval certificate fields") {
  std::mt19937_64 rng(2);
  for (const auto& sc : specs()) {
    const auto [lo, hi] = box(sc, 0.7);
    for (int k = 0; k < 30; ++k) {
      const Point x = test::uniform(rng, lo, hi);
      const auto v = phi_eval(x, sc);
      CHECK(distance_to_hull(v.argmax, sc.tent().A(), sc.tent().B()) <= 1e-8);
      const double attained = psi_eval(v.argmax, sc.tent()).value - sc.K() * (x - v.argmax).norm();
      CHECK(v.value >= attained - 1e-12);
      CHECK(v.value - attained <= std::max(v.gap, 0.0) + 1e-8);
      CHECK(v.value == doctest::Approx(phi_value(x, sc)).epsilon(1e-12));
    }
  }
}

TEST_CASE("phi dual bounds bracket the value") {
  const auto sc = specs()[4];
  std::mt19937_64 rng(8);
  const auto [lo, hi] = box(sc, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Point x = test::uniform(rng, lo, hi);
    const auto d = phi_dual(x, sc);
    CHECK(d.converged());
    CHECK(d.p.norm() <= sc.K() * (1 + 1e-12));
    CHECK(d.lower <= d.upper);
  }
}

TEST_CASE("supergradient by the cone formula") {
  const auto g = phi_supergradient(P({2}), canonical(1.0));
  CHECK(g.mode == SupergradientMode::cone_formula);
  CHECK(g.p(0) == doctest::Approx(-1.0));
}

TEST_CASE("supergradient by finite differences on the segment") {
  const auto g = phi_supergradient(P({0.5}), canonical(2.0));
  CHECK(g.mode == SupergradientMode::fallback);
  CHECK(g.p(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::string(to_string(g.mode)) == "fallback");
}

TEST_CASE("supergradient of the mirrored tent") {
  const SupConvSpec sc(TentSpec(poly({{0}}), poly({{1}}), 1.0, 0.0), 1.0);
  const auto g = phi_supergradient(P({-1}), sc);
  CHECK(g.mode == SupergradientMode::cone_formula);
  CHECK(g.p(0) == doctest::Approx(1.0));
}

TEST_CASE("supergradient nearest to a target at a kink") {
  const auto sc = canonical(2.0);
  // the superdifferential at 0 is [1, 2]
  CHECK(nearest_supergradient(P({0}), sc, P({1.5}))(0) == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(nearest_supergradient(P({0}), sc, P({0}))(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(nearest_supergradient(P({0}), sc, P({5}))(0) == doctest::Approx(2.0).epsilon(1e-7));
  SupergradientOptions opts;
  opts.target = P({1.2});
  const auto g = phi_supergradient(P({0}), sc, opts);
  CHECK(g.p(0) == doctest::Approx(1.2).epsilon(1e-7));
  CHECK(g.worst >= -1e-9);
}

TEST_CASE("an invalid fallback at a kink is reported") {
  // a wide difference step straddles the kink at 1 and yields slope 0
  SupergradientOptions opts;
  opts.tol_super = 1e-12;
  opts.fd_step = 0.3;
  CHECK_THROWS_AS(phi_supergradient(P({0.9}), canonical(2.0), opts), numerical_error);
}

TEST_CASE("supergradients are attained eps-supergradients of psi") {
  const auto t = test::canonical_tent();
  const auto grid = sample_set(t.A(), t.B(), 0.0, 1001);
  CHECK(attained_superdiff_check(P({-1}), P({2}), canonical(1.0), 1e-6, grid));
  CHECK(attained_superdiff_check(P({1}), P({0.5}), canonical(2.0), 1e-6, grid));
  CHECK_FALSE(attained_superdiff_check(P({3}), P({2}), canonical(1.0), 1e-6, grid));
}

TEST_CASE("U and V disjointness") {
  const auto sc = canonical(2.0);
  const auto grid = sample_set(poly({{0}}), poly({{1}}), 0.0, 1001);
  CHECK(uv_disjoint(P({0.1}), 0.2, sc, 1.0, grid));
  CHECK_FALSE(uv_disjoint(P({0.95}), 0.2, sc, 1.0, grid));
  CHECK_FALSE(uv_disjoint(P({0.1}), 5.0, sc, 1.0, grid));
  const auto c = largest_disjoint_c(P({0.1}), 1.0, sc, 1.0, grid);
  REQUIRE(c);
  CHECK(uv_disjoint(P({0.1}), *c, sc, 1.0, grid));
  CHECK_FALSE(uv_disjoint(P({0.1}), *c + 1e-6, sc, 1.0, grid));
}

TEST_CASE("phi is K-Lipschitz and concave") {
  std::mt19937_64 rng(12);
  for (const auto& sc : specs()) {
    const auto [lo, hi] = box(sc, 1.0);
    for (int k = 0; k < 300; ++k) {
      const Point x = test::uniform(rng, lo, hi), y = test::uniform(rng, lo, hi);
      const double fx = phi_value(x, sc), fy = phi_value(y, sc);
      CHECK(std::abs(fx - fy) <= sc.K() * (x - y).norm() + 1e-6);
      CHECK(phi_value(0.5 * (x + y), sc) >= 0.5 * (fx + fy) - 1e-6);
    }
  }
}

TEST_CASE("phi majorizes psi and stays between r and s on the hull") {
  for (const auto& sc : specs()) {
    const auto& t = sc.tent();
    const double lo = std::min(t.r(), t.s()), hi = std::max(t.r(), t.s());
    for (const auto& x : sample_set(t.A(), t.B(), 0.0, t.dim() == 3 ? 7 : 21)) {
      if (distance_to_hull(x, t.A(), t.B()) > 1e-12) continue;
      const double phi = phi_value(x, sc);
      CHECK(phi >= psi_eval(x, t).value - 1e-8);
      CHECK(phi >= lo - 1e-6);
      CHECK(phi <= hi + 1e-6);
    }
  }
}

TEST_CASE("cone-formula supergradients match finite differences") {
  std::mt19937_64 rng(21);
  for (const auto& sc : specs()) {
    const auto [lo, hi] = box(sc, 1.0);
    int used = 0;
    for (int k = 0; k < 200 && used < 20; ++k) {
      const Point x = test::uniform(rng, lo, hi);
      const auto pv = phi_eval(x, sc);
      if ((x - pv.argmax).norm() <= 1e-3) continue;
      const auto g = phi_supergradient(x, sc);
      REQUIRE(g.mode == SupergradientMode::cone_formula);
      Point fd(x.size());
      const double h = 1e-6;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const Point e = h * Point::Unit(x.size(), j);
        fd(j) = (phi_value(x + e, sc) - phi_value(x - e, sc)) / (2 * h);
      }
      // a kink of phi may still pass through x off the hull; skip those
      if (phi_value(x + 1e-4 * g.p.normalized(), sc) - phi_value(x, sc) < 1e-4 * g.p.norm() - 1e-7) continue;
      CHECK((g.p - fd).norm() <= 1e-4);
      ++used;
    }
  }
}

TEST_CASE("phi matches the brute-force oracle") {
  for (const auto& sc : {specs()[0], specs()[2], specs()[3]}) {
    const int res = sc.dim() == 1 ? 1001 : 41;
    const auto table = oracles::psi_table(sc.tent(), res);
    const double tol = table.step * (sc.K() + std::abs(sc.tent().r() - sc.tent().s()));
    const auto& t = sc.tent();
    for (const auto& x : sample_set(t.A(), t.B(), 0.5, 31)) {
      CHECK(std::abs(phi_value(x, sc) - oracles::phi_brute(x, sc, table)) <= tol);
    }
  }
}

TEST_CASE("SupConvSpec validates K") {
  CHECK_THROWS_AS(SupConvSpec(test::canonical_tent(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SupConvSpec(test::canonical_tent(), std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}
