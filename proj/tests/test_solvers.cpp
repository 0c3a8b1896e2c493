#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qvi/errors.hpp"
#include "qvi/problem_io.hpp"
#include "qvi/solvers.hpp"
#include "support.hpp"

using namespace qvi;
using qvi::test::qvi_builtin;
using qvi::test::vec;

namespace {

const char* const kStronglyMonotone[] = {"remark5", "example1", "example2", "example3", "example1-unit"};

Vector start_for(const QviProblem& p) {
  if (p.dim() == 1) return vec({0.5});
  if (p.dim() == 2) return vec({6, 2});
  return vec({5, 4, 2});
}

Vector tight_solution(const QviProblem& p) {
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.max_iter = 100000;
  const auto r = solve_alg1(p, start_for(p), cfg);
  REQUIRE(r.converged);
  return r.x_final;
}

QviProblem with_constants(double gamma, double L) {
  ProblemConstants c;
  c.gamma = gamma;
  c.L = L;
  return QviProblem("scaled", VectorField::linear(Matrix::Identity(1, 1) * L), InverseSpec::linear_exact(Matrix::Zero(1, 1)),
                    ConvexSet::whole_space(1), c);
}

}  // namespace

TEST_CASE("automatic step sizes") {
  CHECK(auto_step(with_constants(1.0, 1.0)) == 1.0);
  CHECK(auto_step(with_constants(4.0, 4.0)) == 0.25);
  // Declared L = 5.32 with a sampled, safety-scaled gamma.
  CHECK(auto_step(qvi_builtin("example1")) == doctest::Approx(0.054939119627158).epsilon(1e-9));
  CHECK_THROWS_AS(auto_step(qvi_builtin("rotation")), ConfigError);
  CHECK(auto_step_tseng(qvi_builtin("rotation")) == doctest::Approx(0.9));
}

TEST_CASE("theoretical rates") {
  CHECK(rho_rate(1.0, 2.0, 0.0) == doctest::Approx(std::sqrt(0.75)));
  CHECK(kappa_rate(1.0, 2.0, 0.0, 1.0) == doctest::Approx(std::sqrt(0.75)));
  CHECK(kappa_rate(4.0, 1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("property: rho never exceeds kappa when l_tilde (1+l)^2 >= 1") {
  for (const char* name : kStronglyMonotone) {
    const auto est = estimate_constants(qvi_builtin(name), SamplingPlan{});
    REQUIRE(est.gamma);
    const double g = conservative(*est.gamma);
    const double L = conservative(*est.L);
    const double l = est.l->value;
    const double lt = est.l_tilde->value;
    if (lt * (1 + l) * (1 + l) >= 1.0) CHECK_MESSAGE(rho_rate(g, L, l) <= kappa_rate(g, L, l, lt), name);
  }
}

TEST_CASE("one step reaches the remark solution") {
  const auto r5 = qvi_builtin("remark5");
  const double alpha = test::remark_alpha();
  for (double h : {1e-3, 0.1, 0.5, 1.0}) {
    CHECK(std::abs(alg1_step(r5, vec({0.0}), h)[0] - alpha) <= 1e-12);
  }
  SolverConfig cfg;
  cfg.h = 0.5;
  const auto r = solve_alg1(r5, vec({0.0}), cfg);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(std::abs(r.x_final[0] - (-0.3168)) <= 1e-3);
  CHECK(catching_up_step(r5, vec({alpha}), 0.3)[0] == doctest::Approx(alpha).epsilon(1e-14));
}

TEST_CASE("reductions without displacement") {
  const auto f = VectorField::from_components({expr::parse("x1 + sin(x2)", 2), expr::parse("x2^3", 2)});
  const QviProblem free("free", f, InverseSpec::linear_exact(Matrix::Zero(2, 2)), ConvexSet::whole_space(2));
  const QviProblem boxed("boxed", f, InverseSpec::linear_exact(Matrix::Zero(2, 2)), ConvexSet::box(2, -0.5, 0.5));
  const Vector x = vec({0.3, -0.4});
  const double h = 0.2;
  CHECK((alg1_step(free, x, h) - (x - h * f(x))).norm() <= 1e-15);
  CHECK((catching_up_step(boxed, x, h) - boxed.set().project(x - h * f(x))).norm() <= 1e-15);
  CHECK((alg1_step(boxed, x, h) - boxed.set().project(x - h * f(x))).norm() <= 1e-15);
}

TEST_CASE("property: solutions are fixed points of the step") {
  for (const char* name : kStronglyMonotone) {
    const auto p = qvi_builtin(name);
    const Vector xs = tight_solution(p);
    for (double h : {0.01, 0.1, 1.0}) CHECK_MESSAGE((alg1_step(p, xs, h) - xs).norm() <= 1e-8, name << " h=" << h);
  }
}

TEST_CASE("catching-up on example2 is declared unsuccessful") {
  SolverConfig cfg;
  cfg.h = 0.3;
  const auto r = solve_catching_up(qvi_builtin("example2"), vec({43, 22, 55}), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.status() != Status::Converged);
  CHECK(r.iterations <= 10000);
}

TEST_CASE("iteration cap and configuration errors") {
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.max_iter = 5;
  const auto r = solve_alg1(qvi_builtin("example1"), vec({6, 2}), cfg);
  CHECK(r.status() == Status::IterationCap);
  CHECK(r.iterations == 5);
  CHECK(r.residuals.size() == 6);

  SolverConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve_alg1(qvi_builtin("example1"), vec({6, 2}), bad), ConfigError);
  bad = {};
  bad.h = -1.0;
  CHECK_THROWS_AS(solve_alg1(qvi_builtin("example1"), vec({6, 2}), bad), ConfigError);
  CHECK_THROWS_AS(solve_alg1(qvi_builtin("example1"), vec({6, 2, 1}), SolverConfig{}), ContractError);
}

TEST_CASE("recording options") {
  SolverConfig cfg;
  cfg.h = 0.01;
  cfg.record = Record::Iterates;
  const auto r = solve_alg1(qvi_builtin("example1"), vec({6, 2}), cfg);
  CHECK(r.iterates.size() == r.iterations + 1);
  CHECK(r.residuals.size() == r.iterations + 1);
  CHECK(r.iterates.back() == r.x_final);
  CHECK(r.final_residual <= cfg.tol);
  cfg.record = Record::None;
  const auto bare = solve_alg1(qvi_builtin("example1"), vec({6, 2}), cfg);
  CHECK(bare.iterates.empty());
  CHECK(bare.x_final == r.x_final);
}

TEST_CASE("property: solves are deterministic and survive a problem-file round trip") {
  for (const char* name : kStronglyMonotone) {
    const auto p = qvi_builtin(name);
    const auto q = std::get<QviProblem>(problem_from_text(to_json(p).dump()));
    SolverConfig cfg;
    cfg.h = 0.05;
    const auto a = solve_alg1(p, start_for(p), cfg);
    const auto b = solve_alg1(q, start_for(p), cfg);
    CHECK(a.x_final == b.x_final);
    CHECK(a.iterations == b.iterations);
    CHECK(a.residuals == b.residuals);
    SolverConfig automatic;
    CHECK(solve_tseng(p, start_for(p), automatic).x_final == solve_tseng(q, start_for(p), automatic).x_final);
  }
}

TEST_CASE("uniqueness: two starts meet") {
  SolverConfig cfg;
  cfg.h = 0.01;
  const auto p = qvi_builtin("example1");
  const auto a = solve_alg1(p, vec({6, 2}), cfg);
  const auto b = solve_alg1(p, vec({-1, 1}), cfg);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.x_final - b.x_final).norm() <= 1e-6);
}

TEST_CASE("tseng solver") {
  const auto rot = qvi_builtin("rotation");
  const auto r = solve_tseng(rot, vec({0.5, 0.5}), SolverConfig{});
  CHECK(r.converged);
  CHECK(r.x_final.norm() <= 1e-6);

  const auto at_solution = solve_tseng(rot, vec({0, 0}), SolverConfig{});
  CHECK(at_solution.iterations == 0);
  CHECK(at_solution.converged);

  for (const char* name : kStronglyMonotone) {
    const auto p = qvi_builtin(name);
    SolverConfig cfg;
    cfg.max_iter = 100000;
    const auto a = solve_alg1(p, start_for(p), cfg);
    const auto t = solve_tseng(p, start_for(p), cfg);
    REQUIRE(a.converged);
    REQUIRE(t.converged);
    CHECK_MESSAGE((a.x_final - t.x_final).norm() <= 1e-6, name);
  }
}

TEST_CASE("literal tseng variant runs") {
  SolverConfig cfg;
  cfg.tseng_variant = TsengVariant::Literal;
  cfg.max_iter = 2000;
  const auto r = solve_tseng(qvi_builtin("rotation"), vec({0.5, 0.5}), cfg);
  CHECK(r.iterations >= 1);
}

TEST_CASE("property: y-space error under the gamma/L^2 step on example1") {
  const auto p = qvi_builtin("example1");
  const auto est = estimate_constants(p, SamplingPlan{}, false);
  const double gamma = conservative(*est.gamma);
  const double L = conservative(*est.L);
  const double l = est.l->value;
  const double lt = est.l_tilde->value;
  SolverConfig cfg;
  cfg.h = gamma / (L * L);
  cfg.tol = 1e-12;
  cfg.max_iter = 100000;
  cfg.record = Record::Iterates;
  const auto r = solve_alg1(p, vec({6, 2}), cfg);
  REQUIRE(r.converged);
  const Vector ys = p.to_y(tight_solution(p));
  const double rho = rho_rate(gamma, L, l);
  const double e0 = (p.to_y(r.iterates[0]) - ys).norm();
  double previous = e0;
  for (std::size_t n = 0; n < r.iterates.size(); ++n) {
    const double en = (p.to_y(r.iterates[n]) - ys).norm();
    CHECK(en <= lt * (1 + l) * std::pow(rho, static_cast<double>(n)) * e0 * (1 + 1e-6) + 1e-12);
    CHECK(en <= previous + 1e-12);
    previous = en;
  }
  REQUIRE(r.rate_estimate);
  CHECK(*r.rate_estimate <= rho + 0.05);
}

TEST_CASE("zero finder") {
  const auto id = VectorField::identity(3);
  const auto z = ZeroProblem::with_matrix("id", id, Matrix::Identity(3, 3));
  SolverConfig cfg;
  const auto r = solve_zero_alg3(z, vec({4, -7, 1e3}), 1.0, cfg);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.x_final == Vector::Zero(3));

  Matrix singular(2, 2);
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(ZeroProblem::with_matrix("s", VectorField::identity(2), singular), SingularLinearPart);

  const auto e3 = std::get<ZeroProblem>(builtin("example3-zero"));
  cfg.tol = 1e-10;
  const auto general = solve_zero_alg3(e3, vec({1e4, 2e4, 3e4}), 1.0, cfg, Alg3Path::General);
  const auto matrix = solve_zero_alg3(e3, vec({1e4, 2e4, 3e4}), 1.0, cfg, Alg3Path::Matrix);
  REQUIRE(general.converged);
  REQUIRE(matrix.converged);
  CHECK((general.x_final - matrix.x_final).norm() <= 1e-9);
  CHECK(e3.f()(general.x_final).norm() <= 1e-10);
}

TEST_CASE("zero finder with a nonlinear transform") {
  const AnyProblem p = problem_from_text(R"j({"kind": "zero", "dim": 1, "f": ["2*x1 + 0.1*sin(x1) - 1"],
      "w": ["x1 - 0.5*cos(x1)"], "inverse": {"strategy": "picard", "l": 0.5}})j");
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const auto r = solve_zero_alg3(std::get<ZeroProblem>(p), vec({3.0}), 0.3, cfg);
  CHECK(r.converged);
  const double x = r.x_final[0];
  CHECK(std::abs(2 * x + 0.1 * std::sin(x) - 1) <= 1e-12);
}

TEST_CASE("sweeps") {
  const QviProblem still("still", VectorField::zero(2), InverseSpec::linear_exact(Matrix::Zero(2, 2)),
                         ConvexSet::box(2, -1.0, 1.0));
  const auto flat = sweep_trajectory(still, vec({0.2, -0.3}), 0.1, 2.0);
  REQUIRE(flat.states.size() == 21);
  for (const auto& s : flat.states) CHECK(s == vec({0.2, -0.3}));
  for (double s : flat.speeds) CHECK(s == 0.0);

  const auto r5 = sweep_trajectory(qvi_builtin("remark5"), vec({0.5}), 0.01, 20.0);
  CHECK_FALSE(r5.diverged);
  CHECK(std::abs(r5.states.back()[0] - (-0.3168)) <= 1e-2);
  // The state lands on the solution after one step; the residual is gone from then on.
  for (std::size_t k = 1; k < r5.residuals.size(); ++k) CHECK(r5.residuals[k] <= 1e-12);
  CHECK(r5.residuals[0] > 0.1);

  CHECK_THROWS_AS(sweep_trajectory(still, vec({0, 0}), 0.0, 1.0), ContractError);
}

TEST_CASE("property: velocity and residual decay along the example1 sweep") {
  const auto tr = sweep_trajectory(qvi_builtin("example1"), vec({6, 2}), 0.01, 30.0);
  CHECK_FALSE(tr.diverged);
  const RateFit residual_fit = fit_linear_rate(tr.residuals);
  CHECK(residual_fit.r_squared >= 0.9);
  CHECK(continuous_rate(residual_fit, 0.01) > 0.0);
  const std::vector<double> speeds(tr.speeds.begin() + 1, tr.speeds.end());
  const RateFit speed_fit = fit_linear_rate(speeds);
  CHECK(speed_fit.r_squared >= 0.9);
  CHECK(speed_fit.slope < 0.0);
}
