#pragma once

#include "mvi/geometry.hpp"
#include "mvi/tent.hpp"

#include <doctest.h>

#include <initializer_list>
#include <random>
#include <string>

namespace test {

inline mvi::Point P(std::initializer_list<double> v) {
  mvi::Point p(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

inline mvi::Polytope poly(std::initializer_list<std::initializer_list<double>> verts) {
  std::vector<mvi::Point> out;
  for (auto v : verts) out.push_back(P(v));
  return mvi::Polytope(std::move(out));
}

inline mvi::TentSpec canonical_tent() { return {poly({{0}}), poly({{1}}), 0.0, 1.0}; }

inline mvi::TentSpec square_tent() {
  return {poly({{0, 0}, {0, 1}}), poly({{2, 0}, {2, 1}}), 1.0, 3.0};
}

/// Uniform point in the box [lo, hi].
inline mvi::Point uniform(std::mt19937_64& rng, const mvi::Point& lo, const mvi::Point& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mvi::Point x(lo.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = lo(j) + u(rng) * (hi(j) - lo(j));
  return x;
}

inline std::string data_path(const std::string& name) { return std::string(MVI_DATA_DIR) + "/" + name; }

}  // namespace test
