#include "qvi/problem.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qvi/errors.hpp"

namespace qvi {

void ProblemConstants::validate() const {
  auto check = [](const std::optional<double>& c, const char* name) {
    if (c && !(*c > 0.0 && std::isfinite(*c))) {
      throw ContractError(std::string("constant ") + name + " must be strictly positive");
    }
  };
  check(L, "L");
  check(l, "l");
  check(l_tilde, "l_tilde");
  check(gamma, "gamma");
  check(mu, "mu");
}

std::optional<double> ProblemConstants::composed_modulus() const {
  if (!gamma || !l) return std::nullopt;
  return *gamma / ((1.0 + *l) * (1.0 + *l));
}

QviProblem::QviProblem(std::string name, VectorField f, InverseSpec inverse, ConvexSet set, ProblemConstants constants)
    : name_(std::move(name)),
      f_(std::move(f)),
      inverse_(std::move(inverse)),
      set_(std::move(set)),
      constants_(constants) {
  constants_.validate();
  if (f_.dim() != inverse_.dim() || f_.dim() != set_.dim()) {
    throw ContractError("problem '" + name_ + "': f, v and C must share one dimension");
  }
  // Round-trip a handful of points near the origin.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    Vector x(static_cast<Eigen::Index>(dim()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
    const Vector back = inverse_.invert(to_y(x));
    if ((back - x).norm() > 1e-6 * std::max(1.0, x.norm())) {
      throw ContractError("problem '" + name_ + "': inverse spec does not invert Id - v");
    }
  }
}

Vector QviProblem::to_y(const Vector& x) const { return x - v()(x); }

Vector project_moving(const QviProblem& problem, const Vector& base, const Vector& z) {
  require_vector(base, problem.dim(), "project_moving base");
  require_vector(z, problem.dim(), "project_moving point");
  const Vector shift = problem.v()(base);
  return shift + problem.set().project(z - shift);
}

double natural_residual(const QviProblem& problem, const Vector& x, double h) {
  if (!(h > 0.0)) throw ContractError("natural residual needs h > 0");
  require_vector(x, problem.dim(), "natural_residual");
  const Vector y = problem.to_y(x);
  return (y - problem.set().project(y - h * problem.f()(x))).norm();
}

}  // namespace qvi
