#include "qvi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qvi/errors.hpp"
#include "qvi/problem.hpp"

namespace qvi {

void SamplingPlan::validate() const {
  if (count < 2) throw SamplingError("sampling plan needs at least 2 pairs");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw SamplingError("sampling box needs finite lo < hi");
  if (!(min_separation > 0.0)) throw SamplingError("minimum separation must be positive");
}

std::vector<std::pair<Vector, Vector>> draw_pairs(const SamplingPlan& plan, std::size_t dim) {
  plan.validate();
  const auto n = static_cast<Eigen::Index>(dim);
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> uniform(plan.lo, plan.hi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double delta = 1e-3 * (plan.hi - plan.lo);

  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(plan.count);
  for (std::size_t k = 0; k < plan.count; ++k) {
    Vector x(n);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = uniform(rng);
    if (k % 2 == 0) {
      for (Eigen::Index i = 0; i < n; ++i) y[i] = uniform(rng);
    } else {
      for (Eigen::Index i = 0; i < n; ++i) y[i] = x[i] + delta * normal(rng);
    }
    if ((x - y).norm() < plan.min_separation) continue;
    pairs.emplace_back(std::move(x), std::move(y));
  }
  if (pairs.empty()) throw SamplingError("every sampled pair was closer than the minimum separation");
  return pairs;
}

double pair_modulus_linear(const Matrix& a1, const Matrix& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols() || a1.rows() != a2.rows() || a1.rows() == 0) {
    throw ContractError("pair_modulus_linear needs two square matrices of the same size");
  }
  const Matrix product = a1.transpose() * a2;
  const Matrix sym = 0.5 * (product + product.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double sample_pair_modulus(const VectorField& f, const VectorField& w, const SamplingPlan& plan) {
  if (f.dim() != w.dim()) throw ContractError("pair fields must share a dimension");
  return sample_pair_modulus(Map(f), Map(w), f.dim(), plan);
}

double sample_pair_modulus(const Map& f, const Map& w, std::size_t dim, const SamplingPlan& plan) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : draw_pairs(plan, dim)) {
    const Vector d = x - y;
    best = std::min(best, dot(f(x) - f(y), w(x) - w(y)) / dot(d, d));
  }
  return best;
}

double sample_lipschitz(const VectorField& f, const SamplingPlan& plan) {
  return sample_lipschitz(Map(f), f.dim(), plan);
}

double sample_lipschitz(const Map& f, std::size_t dim, const SamplingPlan& plan) {
  double best = 0.0;
  for (const auto& [x, y] : draw_pairs(plan, dim)) {
    best = std::max(best, (f(x) - f(y)).norm() / (x - y).norm());
  }
  return best;
}

PseudoPairReport check_pseudo_pair(const VectorField& f, const VectorField& w, const SamplingPlan& plan) {
  if (f.dim() != w.dim()) throw ContractError("pair fields must share a dimension");
  constexpr double kSlack = 1e-12;
  constexpr std::size_t kMaxWitnesses = 5;
  PseudoPairReport report;
  auto check = [&](const Vector& x, const Vector& y) {
    ++report.pairs_checked;
    const Vector dw = w(y) - w(x);
    if (dot(f(x), dw) < -kSlack) return;
    ++report.premise_held;
    if (dot(f(y), dw) < -kSlack) {
      ++report.violations;
      if (report.witnesses.size() < kMaxWitnesses) report.witnesses.emplace_back(x, y);
    }
  };
  for (const auto& [x, y] : draw_pairs(plan, f.dim())) {
    check(x, y);
    check(y, x);
  }
  return report;
}

double composition_modulus_bound(double gamma, double l) {
  if (!(gamma > 0.0)) throw ContractError("composition bound needs gamma > 0");
  if (!(l >= 0.0)) throw ContractError("composition bound needs l >= 0");
  return gamma / ((1.0 + l) * (1.0 + l));
}

std::string to_string(ConstantSource s) {
  switch (s) {
    case ConstantSource::Declared: return "declared";
    case ConstantSource::Spectral: return "spectral";
    case ConstantSource::Sampled: return "sampled";
  }
  return "?";
}

std::string to_string(Bias b) {
  switch (b) {
    case Bias::Exact: return "exact";
    case Bias::LowerBound: return "lower bound";
    case Bias::UpperBound: return "upper bound";
  }
  return "?";
}

double conservative(const Estimate& e) {
  if (e.source != ConstantSource::Sampled) return e.value;
  if (e.bias == Bias::UpperBound) return kSampledGammaSafety * e.value;
  if (e.bias == Bias::LowerBound) return kSampledLipschitzSafety * e.value;
  return e.value;
}

ConstantEstimates estimate_constants(const QviProblem& problem, const SamplingPlan& plan, bool use_declared) {
  const ProblemConstants declared = use_declared ? problem.constants() : ProblemConstants{};
  const VectorField& f = problem.f();
  const VectorField& v = problem.v();
  const std::size_t n = problem.dim();
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  ConstantEstimates out;

  if (declared.L) {
    out.L = Estimate{*declared.L, ConstantSource::Declared, Bias::Exact};
  } else if (f.is_linear()) {
    out.L = Estimate{operator_norm(f.linear_part()), ConstantSource::Spectral, Bias::Exact};
  } else {
    out.L = Estimate{sample_lipschitz(f, plan), ConstantSource::Sampled, Bias::LowerBound};
  }

  if (declared.l) {
    out.l = Estimate{*declared.l, ConstantSource::Declared, Bias::Exact};
  } else if (v.is_linear()) {
    out.l = Estimate{operator_norm(v.linear_part()), ConstantSource::Spectral, Bias::Exact};
  } else {
    out.l = Estimate{sample_lipschitz(v, plan), ConstantSource::Sampled, Bias::LowerBound};
  }

  if (declared.l_tilde) {
    out.l_tilde = Estimate{*declared.l_tilde, ConstantSource::Declared, Bias::Exact};
  } else {
    const auto& spec = problem.inverse().variant();
    const bool sampled = std::holds_alternative<InverseSpec::ScalarBracket>(spec);
    const bool bound = std::holds_alternative<InverseSpec::PicardContraction>(spec) ||
                       std::holds_alternative<InverseSpec::Semilinear>(spec);
    out.l_tilde = Estimate{problem.inverse().lipschitz_of_inverse(),
                           sampled ? ConstantSource::Sampled : ConstantSource::Spectral,
                           sampled ? Bias::LowerBound : (bound ? Bias::UpperBound : Bias::Exact)};
  }

  if (declared.gamma) {
    out.gamma = Estimate{*declared.gamma, ConstantSource::Declared, Bias::Exact};
  } else if (f.is_linear() && v.is_linear()) {
    out.gamma = Estimate{pair_modulus_linear(f.linear_part(), id - v.linear_part()), ConstantSource::Spectral,
                         Bias::Exact};
  } else {
    out.gamma = Estimate{sample_pair_modulus(f, VectorField::identity_minus(v), plan), ConstantSource::Sampled,
                         Bias::UpperBound};
  }
  return out;
}

}  // namespace qvi
