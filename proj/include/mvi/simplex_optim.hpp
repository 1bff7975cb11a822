#pragma once

#include "mvi/geometry.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mvi {

class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concave objective over the product-simplex coordinates of [A,B].
/// The supergradient is taken with respect to (gamma, eta) joined.
struct ConcaveObjective {
  std::function<double(const HullCoords&)> value;
  std::function<Eigen::VectorXd(const HullCoords&)> supergradient;
};

struct SimplexDims {
  std::size_t mA;
  std::size_t mB;
};

struct FrankWolfeOptions {
  double tol = 1e-8;
  int max_iters = 10000;
  /// Starting coordinates; the best simplex vertex when absent.
  std::optional<HullCoords> start;
};

struct FrankWolfeResult {
  HullCoords coords;
  double value;
  double gap;
  int iterations;
  bool converged;
  /// Objective value after each iteration, starting with the initial point.
  std::vector<double> history;
};

/// Frank-Wolfe with away steps over {(gamma, eta) >= 0, sum = 1}; step sizes by
/// golden-section search along the chosen segment.
FrankWolfeResult maximize_concave(const ConcaveObjective& obj, SimplexDims dims,
                                  const FrankWolfeOptions& opts = {});

/// maximize <objective, x>  s.t.  A_eq x = b_eq,  x >= 0.
struct LPProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
};

struct LPResult {
  bool feasible;
  Eigen::VectorXd x;
  double value;
};

/// Two-phase dense tableau simplex with Bland's rule. Throws numerical_error
/// on an unbounded problem.
LPResult solve_lp(const LPProblem& lp);

}  // namespace mvi
