#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qvi/analysis.hpp"
#include "qvi/inverse.hpp"
#include "qvi/problem.hpp"
#include "qvi/rate.hpp"

namespace qvi {

enum class Record { None, Residuals, Iterates };
// Literal updates x_{n+1} = (Id−v)⁻¹(y_n + h(f(x_n) − f(z_n))) without the
// projected point that the standard scheme keeps.
enum class TsengVariant { Standard, Literal };
enum class Status { Converged, Diverged, IterationCap };

struct SolverConfig {
  std::optional<double> h;  // nullopt = automatic step
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  Record record = Record::Residuals;
  double divergence_guard = 1e12;
  SamplingPlan plan;  // used only when an automatic step needs sampled constants
  TsengVariant tseng_variant = TsengVariant::Standard;

  void validate() const;
};

struct SolveReport {
  Vector x_final;
  bool converged = false;
  bool diverged = false;
  std::size_t iterations = 0;
  std::vector<double> residuals;  // residual of iterate k, k = 0..iterations
  std::vector<Vector> iterates;   // iterate k, k = 0..iterations
  std::optional<double> rate_estimate;
  double h_used = 0.0;
  double final_residual = 0.0;
  double final_step = 0.0;  // ‖x_n − x_{n−1}‖ of the last step taken

  Status status() const;
};

/// γ/L² from declared/spectral constants, or sampled ones after safety factors.
/// Throws ConfigError when γ is unavailable or not positive.
double auto_step(const QviProblem& problem, const SamplingPlan& plan = {});
/// 0.9/(L·l̃), the step used by the Tseng-type solver.
double auto_step_tseng(const QviProblem& problem, const SamplingPlan& plan = {});

/// (Id−v)⁻¹(proj_C(x − v(x) − h f(x)))
Vector alg1_step(const QviProblem& problem, const Vector& x, double h);
/// proj_{K(x)}(x − h f(x))
Vector catching_up_step(const QviProblem& problem, const Vector& x, double h);

SolveReport solve_alg1(const QviProblem& problem, const Vector& x0, const SolverConfig& config);
SolveReport solve_catching_up(const QviProblem& problem, const Vector& x0, const SolverConfig& config);
/// Tseng's forward-backward-forward method on the VI in y = x − v(x). The
/// pair (f, Id−v) should be (pseudo-)monotone; that is not checked.
SolveReport solve_tseng(const QviProblem& problem, const Vector& x0, const SolverConfig& config);

/// f(x) = 0 with a transform w such that (f, w) is strongly monotone. w is
/// given through an inverse spec for v = Id − w, so w(x) = x − v(x) and
/// w⁻¹ = invert.
class ZeroProblem {
 public:
  ZeroProblem(std::string name, VectorField f, InverseSpec w_spec);
  /// w = A; throws SingularLinearPart for singular A.
  static ZeroProblem with_matrix(std::string name, VectorField f, const Matrix& a);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return f_.dim(); }
  const VectorField& f() const noexcept { return f_; }
  const InverseSpec& w_spec() const noexcept { return w_spec_; }
  Vector w(const Vector& x) const { return x - w_spec_.displacement()(x); }
  /// A when w is linear, nullopt otherwise.
  std::optional<Matrix> w_matrix() const;

 private:
  std::string name_;
  VectorField f_;
  InverseSpec w_spec_;
  std::optional<Matrix> a_;
};

enum class Alg3Path { General, Matrix };

/// x_{n+1} = w⁻¹(w(x_n) − h f(x_n)), stopping on ‖f(x_n)‖ ≤ tol. The Matrix
/// path computes x_n − h A⁻¹ f(x_n) directly and needs a linear w.
SolveReport solve_zero_alg3(const ZeroProblem& problem, const Vector& x0, double h, const SolverConfig& config,
                            Alg3Path path = Alg3Path::General);

enum class SweepScheme {
  Modified,    // semi-implicit in y = x − v(x), the step of solve_alg1
  CatchingUp,  // x_{k+1} = proj_{K(x_k)}(x_k − h f(x_k))
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> speeds;     // ‖x_k − x_{k−1}‖/h, 0 at k = 0
  std::vector<double> residuals;  // natural residual of each state
  bool diverged = false;
};

/// States at t_k = k·h for k = 0..round(T_end/h).
Trajectory sweep_trajectory(const QviProblem& problem, const Vector& x0, double h, double t_end,
                            SweepScheme scheme = SweepScheme::Modified, double divergence_guard = 1e12);

/// Theoretical rates from constants: κ for h = α/(L² l̃²), α = γ/(1+l)², and
/// ρ = √(1 − γ²/(L²(1+l)²)) for h = γ/L².
double kappa_rate(double gamma, double L, double l, double l_tilde);
double rho_rate(double gamma, double L, double l);

}  // namespace qvi
