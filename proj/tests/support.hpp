#pragma once

#include <random>
#include <string>
#include <variant>

#include "qvi/problem_io.hpp"

namespace qvi::test {

inline QviProblem qvi_builtin(const std::string& name) { return std::get<QviProblem>(builtin(name)); }
inline ZeroProblem zero_builtin(const std::string& name) { return std::get<ZeroProblem>(builtin(name)); }

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector uniform_point(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
  return v;
}

// remark5 solution: the zero of x - v(x) on the reals, found by plain bisection
// on -x - cos(x)/3, independently of the library.
inline double remark_alpha() {
  double lo = -1.0;
  double hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (-mid - std::cos(mid) / 3.0 > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qvi::test
