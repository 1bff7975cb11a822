#pragma once

#include "mvi/ekeland.hpp"
#include "mvi/functions.hpp"
#include "mvi/supconv.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvi {

/// The problem data violates a hypothesis of the inequality.
class spec_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The pipeline ran to completion without producing a certificate.
class pipeline_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  TestFunction f;
  Polytope A;
  Polytope B;
  double delta;
  double mu;
  double s;
  double epsilon;
  int resolution = 101;
  std::uint64_t seed = 0;
  std::vector<double> schedule = default_schedule();
  double tol = kEvpTol;  // domination check and the bound on inf g

  InflatedHull C() const { return {A, B, delta}; }
};

/// An infimum estimate: value is attained at argmin, lower is a bound from below.
struct Estimate {
  double value;
  double lower;
  Point argmin;
};

struct Estimates {
  Estimate r;         // over A
  Estimate inf_C;     // over C
  Estimate inf_Bd;    // over B_delta
  Estimate inf_AB;    // over [A,B]
};

/// Grid minimum refined by local descent; lower = grid value - step * sqrt(n) * Lip.
Estimate estimate_inf(const TestFunction& f, const Polytope& P, const Polytope& Q, double delta,
                      int resolution);
Estimates estimate_infima(const ProblemSpec& ps);

/// Throws spec_error when a hypothesis fails on the grid estimates.
void validate(const ProblemSpec& ps, const Estimates& est);

struct PipelineParams {
  double r;
  double s1;
  double delta1;
  double K;
  int j;  // delta1 = delta (1 - 2^-j)
};

PipelineParams choose_params(const ProblemSpec& ps, const Estimates& est);

/// f on C, +inf outside; no subgradients on the boundary band of C.
TestFunction restrict_f(const TestFunction& f, const Polytope& A, const Polytope& B, double delta);

struct Inequality {
  double lhs;
  double rhs;
  double slack() const { return rhs - lhs; }
  bool holds() const { return slack() > 0.0; }
};

struct Certificate {
  Point xi;
  Point p;
  Inequality value_bound;  // f(xi) < inf_[A,B] f + |r - s| + eps
  Inequality norm_bound;   // ||p|| < (max{r, s} - mu) / delta + eps
  Inequality slope_gap;    // s - r < inf_B p - inf_A p, stored as lhs = s - r
  PipelineParams params;
  Estimates estimates;

  std::size_t n;
  double eps_n;
  Point u;
  double g_u;
  double evp_worst;
  Point y;
  Point q;
  double residual;
  double separation;
  double eps_bar;
  double interior_margin;
  double c_n;
  double boundary_margin;  // mu - max phi_K over sampled boundary of C
  double inf_g;            // grid inf of g over C
  double bound_g;          // grid inf of g over the sampled boundary of C

  std::vector<EkelandPoint> trace;  // u_n for every schedule entry
  std::vector<double> residuals;    // ||p_n + q_n||, nan where no pair was extracted
  std::vector<std::string> rejected;  // failure reasons of earlier indices
};

/// Runs the full construction and returns the first schedule index whose
/// certificate has all slacks positive. Throws spec_error or pipeline_error.
Certificate run(const ProblemSpec& ps);

struct CheckLine {
  std::string name;
  bool ok;
  double lhs;
  double rhs;
  std::string detail;
};

struct VerifyReport {
  bool valid;
  std::vector<CheckLine> checks;
};

/// Rechecks a certificate from the problem data alone, using brute-force
/// infima and exact linear minima.
VerifyReport verify_certificate(const Point& xi, const Point& p, const ProblemSpec& ps);
inline VerifyReport verify_certificate(const Certificate& c, const ProblemSpec& ps) {
  return verify_certificate(c.xi, c.p, ps);
}

}  // namespace mvi
