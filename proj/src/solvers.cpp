#include "qvi/solvers.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qvi/errors.hpp"

namespace qvi {
namespace {

constexpr std::size_t kGrowthWindow = 100;
constexpr double kGrowthFactor = 10.0;

// Shared driver: evaluates the residual of the current iterate, stops on
// tolerance, divergence or the cap, otherwise takes one step.
template <typename Residual, typename Step>
SolveReport iterate(const Vector& x0, double h, const SolverConfig& cfg, Residual residual, Step step) {
  SolveReport report;
  report.h_used = h;
  std::vector<double> history;
  Vector x = x0;
  std::size_t n = 0;
  for (;; ++n) {
    double r = 0.0;
    try {
      r = residual(x);
    } catch (const EvalError&) {
      report.diverged = true;
      break;
    }
    history.push_back(r);
    if (cfg.record != Record::None) report.residuals.push_back(r);
    if (cfg.record == Record::Iterates) report.iterates.push_back(x);
    report.final_residual = r;
    if (!std::isfinite(r)) {
      report.diverged = true;
      break;
    }
    if (r <= cfg.tol) {
      report.converged = true;
      break;
    }
    if (n >= kGrowthWindow && r > kGrowthFactor * history[n - kGrowthWindow]) {
      report.diverged = true;
      break;
    }
    if (n >= cfg.max_iter) break;
    Vector next;
    try {
      next = step(x);
    } catch (const EvalError&) {
      report.diverged = true;
      break;
    }
    if (!all_finite(next) || next.norm() > cfg.divergence_guard) {
      report.diverged = true;
      ++n;
      break;
    }
    report.final_step = (next - x).norm();
    x = std::move(next);
  }
  report.iterations = n;
  report.x_final = x;
  try {
    report.rate_estimate = fit_linear_rate(history).factor;
  } catch (const DiagnosticsError&) {
    report.rate_estimate.reset();
  }
  return report;
}

double resolve_step(const QviProblem& problem, const SolverConfig& cfg) {
  if (cfg.h) {
    if (!(*cfg.h > 0.0) || !std::isfinite(*cfg.h)) throw ConfigError("step size must be positive");
    return *cfg.h;
  }
  return auto_step(problem, cfg.plan);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(divergence_guard > 0.0)) throw ConfigError("divergence guard must be positive");
}

Status SolveReport::status() const {
  if (converged) return Status::Converged;
  if (diverged) return Status::Diverged;
  return Status::IterationCap;
}

double auto_step(const QviProblem& problem, const SamplingPlan& plan) {
  const ConstantEstimates c = estimate_constants(problem, plan);
  if (!c.gamma || !c.L) throw ConfigError("automatic step needs gamma and L");
  const double gamma = conservative(*c.gamma);
  const double L = conservative(*c.L);
  if (!(gamma > 0.0)) {
    throw ConfigError("automatic step needs a positive pair modulus gamma; " + to_string(c.gamma->source) +
                      " value is " + std::to_string(c.gamma->value));
  }
  if (!(L > 0.0)) throw ConfigError("automatic step needs a positive Lipschitz constant L");
  return gamma / (L * L);
}

double auto_step_tseng(const QviProblem& problem, const SamplingPlan& plan) {
  const ConstantEstimates c = estimate_constants(problem, plan);
  if (!c.L || !c.l_tilde) throw ConfigError("automatic Tseng step needs L and l_tilde");
  const double L = conservative(*c.L);
  const double lt = conservative(*c.l_tilde);
  if (!(L > 0.0) || !(lt > 0.0)) throw ConfigError("automatic Tseng step needs positive L and l_tilde");
  return 0.9 / (L * lt);
}

Vector alg1_step(const QviProblem& problem, const Vector& x, double h) {
  if (!(h > 0.0)) throw ContractError("step size must be positive");
  const Vector y = problem.to_y(x);
  return problem.inverse().invert(problem.set().project(y - h * problem.f()(x)));
}

Vector catching_up_step(const QviProblem& problem, const Vector& x, double h) {
  if (!(h > 0.0)) throw ContractError("step size must be positive");
  return project_moving(problem, x, x - h * problem.f()(x));
}

SolveReport solve_alg1(const QviProblem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  require_vector(x0, problem.dim(), "x0");
  const double h = resolve_step(problem, config);
  return iterate(
      x0, h, config, [&](const Vector& x) { return natural_residual(problem, x, h); },
      [&](const Vector& x) { return alg1_step(problem, x, h); });
}

SolveReport solve_catching_up(const QviProblem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  require_vector(x0, problem.dim(), "x0");
  const double h = resolve_step(problem, config);
  return iterate(
      x0, h, config, [&](const Vector& x) { return natural_residual(problem, x, h); },
      [&](const Vector& x) { return catching_up_step(problem, x, h); });
}

SolveReport solve_tseng(const QviProblem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  require_vector(x0, problem.dim(), "x0");
  double h = 0.0;
  if (config.h) {
    h = *config.h;
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("step size must be positive");
  } else {
    h = auto_step_tseng(problem, config.plan);
  }
  const InverseSpec& inv = problem.inverse();
  const ConvexSet& set = problem.set();
  const VectorField& f = problem.f();
  const bool literal = config.tseng_variant == TsengVariant::Literal;

  return iterate(
      x0, h, config, [&](const Vector& x) { return natural_residual(problem, x, h); },
      [&](const Vector& x) -> Vector {
        const Vector y = problem.to_y(x);
        const Vector fx = f(x);
        const Vector y_bar = set.project(y - h * fx);
        const Vector f_bar = f(inv.invert(y_bar));
        if (literal) return inv.invert(Vector(y + h * (fx - f_bar)));
        return inv.invert(Vector(y_bar - h * (f_bar - fx)));
      });
}

ZeroProblem::ZeroProblem(std::string name, VectorField f, InverseSpec w_spec)
    : name_(std::move(name)), f_(std::move(f)), w_spec_(std::move(w_spec)) {
  if (f_.dim() != w_spec_.dim()) throw ContractError("zero problem: f and w must share a dimension");
  if (const auto* lin = std::get_if<InverseSpec::LinearExact>(&w_spec_.variant())) {
    a_ = Matrix(Matrix::Identity(lin->v.rows(), lin->v.cols()) - lin->v);
  }
}

ZeroProblem ZeroProblem::with_matrix(std::string name, VectorField f, const Matrix& a) {
  if (a.rows() != a.cols()) throw ContractError("w must be a square matrix");
  const Matrix v = Matrix::Identity(a.rows(), a.cols()) - a;
  ZeroProblem p(std::move(name), std::move(f), InverseSpec::linear_exact(v));
  p.a_ = a;
  return p;
}

std::optional<Matrix> ZeroProblem::w_matrix() const { return a_; }

SolveReport solve_zero_alg3(const ZeroProblem& problem, const Vector& x0, double h, const SolverConfig& config,
                            Alg3Path path) {
  config.validate();
  require_vector(x0, problem.dim(), "x0");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("step size must be positive");
  const VectorField& f = problem.f();
  auto residual = [&](const Vector& x) { return f(x).norm(); };

  if (path == Alg3Path::Matrix) {
    const auto a = problem.w_matrix();
    if (!a) throw ConfigError("matrix path needs a linear w");
    const Eigen::FullPivLU<Matrix> lu(*a);
    if (!lu.isInvertible()) throw SingularLinearPart("w matrix is singular");
    return iterate(x0, h, config, residual, [&](const Vector& x) -> Vector { return x - h * lu.solve(f(x)); });
  }
  // w evaluated in its natural form when linear: A x rather than x − (I − A) x.
  const auto a = problem.w_matrix();
  const InverseSpec& inv = problem.w_spec();
  return iterate(x0, h, config, residual, [&](const Vector& x) -> Vector {
    const Vector wx = a ? Vector(*a * x) : problem.w(x);
    return inv.invert(Vector(wx - h * f(x)));
  });
}

Trajectory sweep_trajectory(const QviProblem& problem, const Vector& x0, double h, double t_end, SweepScheme scheme,
                            double divergence_guard) {
  require_vector(x0, problem.dim(), "x0");
  if (!(h > 0.0) || !std::isfinite(h)) throw ContractError("sweep step must be positive");
  if (!(t_end >= h)) throw ContractError("sweep horizon must be at least one step");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  Vector x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.speeds.push_back(0.0);
  traj.residuals.push_back(natural_residual(problem, x, h));
  for (std::size_t k = 1; k <= steps; ++k) {
    Vector next;
    try {
      next = scheme == SweepScheme::Modified ? alg1_step(problem, x, h) : catching_up_step(problem, x, h);
    } catch (const EvalError&) {
      traj.diverged = true;
      break;
    }
    if (!all_finite(next) || next.norm() > divergence_guard) {
      traj.diverged = true;
      break;
    }
    double r = 0.0;
    try {
      r = natural_residual(problem, next, h);
    } catch (const EvalError&) {
      traj.diverged = true;
      break;
    }
    traj.speeds.push_back((next - x).norm() / h);
    traj.times.push_back(static_cast<double>(k) * h);
    traj.residuals.push_back(r);
    traj.states.push_back(next);
    x = std::move(next);
  }
  return traj;
}

double kappa_rate(double gamma, double L, double l, double l_tilde) {
  const double alpha = gamma / ((1.0 + l) * (1.0 + l));
  const double q = alpha * alpha / (L * L * l_tilde * l_tilde);
  return std::sqrt(std::max(0.0, 1.0 - q));
}

double rho_rate(double gamma, double L, double l) {
  const double q = gamma * gamma / (L * L * (1.0 + l) * (1.0 + l));
  return std::sqrt(std::max(0.0, 1.0 - q));
}

}  // namespace qvi
