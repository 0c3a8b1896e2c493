// Reference solutions of the built-in examples. Several of them do not follow from the
// stated problem data; those checks fail on purpose and the diagnostic
// cases below show which data the values do belong to.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qvi/solvers.hpp"
#include "support.hpp"

using namespace qvi;
using qvi::test::qvi_builtin;
using qvi::test::vec;
using qvi::test::zero_builtin;

namespace {

const Vector kEx1 = vec({-0.3785, 0.1870});
const Vector kEx2 = vec({-0.1249, 0.1025, -0.0469});
const Vector kEx3 = vec({-0.0868, 0.6040, 0.6839});
const Vector kEx4 = vec({-0.0931, 0.0816, -0.0555});

double gap(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

SolveReport alg1(const char* name, const Vector& x0, double h) {
  SolverConfig cfg;
  cfg.h = h;
  return solve_alg1(qvi_builtin(name), x0, cfg);
}

SolveReport alg3(const char* name) {
  SolverConfig cfg;
  cfg.tol = 1e-10;
  return solve_zero_alg3(zero_builtin(name), vec({1e4, 2e4, 3e4}), 1.0, cfg);
}

}  // namespace

TEST_CASE("example1 reference solution") {
  CHECK(natural_residual(qvi_builtin("example1"), kEx1, 0.01) <= 1e-3);
  const auto r = alg1("example1", vec({6, 2}), 0.01);
  CHECK(r.converged);
  CHECK(gap(r.x_final, kEx1) <= 1e-3);
  const auto tr = sweep_trajectory(qvi_builtin("example1"), vec({6, 2}), 0.01, 30.0);
  CHECK(gap(tr.states.back(), kEx1) <= 1e-2);
}

TEST_CASE("example2 reference solution") {
  const auto r = alg1("example2", vec({43, 22, 55}), 0.3);
  CHECK(r.converged);
  CHECK(gap(r.x_final, kEx2) <= 1e-3);
  CHECK(r.iterations <= 166);
}

TEST_CASE("example3 reference solution") {
  const auto r = alg1("example3", vec({5, 4, 2}), 0.3);
  CHECK(r.converged);
  CHECK(gap(r.x_final, kEx3) <= 1e-3);
  CHECK(r.iterations <= 220);
}

TEST_CASE("example4 reference solution") {
  const auto r = alg3("example4");
  CHECK(r.converged);
  CHECK(gap(r.x_final, kEx4) <= 1e-3);
  CHECK(zero_builtin("example4").f()(r.x_final).norm() <= 1e-10);
  CHECK(r.iterations <= 36);
}

TEST_CASE("remark5 reference solution") {
  const auto r = alg1("remark5", vec({0.5}), 0.1);
  CHECK(r.converged);
  CHECK(std::abs(r.x_final[0] + 0.3168) <= 1e-3);
}

TEST_CASE("diagnostic: the example1 point solves the unit-coefficient variant") {
  const auto r = alg1("example1-unit", vec({6, 2}), 0.01);
  REQUIRE(r.converged);
  CHECK(gap(r.x_final, kEx1) <= 1e-3);
  CHECK(natural_residual(qvi_builtin("example1-unit"), kEx1, 0.01) <= 1e-3);
}

TEST_CASE("diagnostic: the example4 point is the zero of the example3 map") {
  const auto r = alg3("example3-zero");
  REQUIRE(r.converged);
  CHECK(gap(r.x_final, kEx4) <= 1e-3);
  CHECK(r.iterations <= 36);
  // ... and example3 with its stated data converges to that same point.
  CHECK(gap(alg1("example3", vec({5, 4, 2}), 0.3).x_final, kEx4) <= 1e-3);
}

TEST_CASE("diagnostic: the example3 reference point is not a solution of its data") {
  CHECK(natural_residual(qvi_builtin("example3"), kEx3, 0.3) > 0.1);
}
