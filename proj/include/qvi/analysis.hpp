#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvi/field.hpp"
#include "qvi/linalg.hpp"

namespace qvi {

class QviProblem;

/// Any map ℝⁿ → ℝⁿ; VectorField converts implicitly.
using Map = std::function<Vector(const Vector&)>;

/// Seeded pair sampling over [lo, hi]ⁿ. Half of the pairs are drawn
/// independently from the box; the other half are local pairs
/// (x, x + δ·u) with δ = 1e-3·(hi − lo) and u standard normal, which is what
/// lets the estimators see derivative-level constants.
struct SamplingPlan {
  std::uint64_t seed = 42;
  std::size_t count = 10000;
  double lo = -10.0;
  double hi = 10.0;
  double min_separation = 1e-6;

  /// Throws SamplingError on count < 2 or lo ≥ hi.
  void validate() const;
};

/// Deterministic given the plan; pairs closer than min_separation are dropped.
std::vector<std::pair<Vector, Vector>> draw_pairs(const SamplingPlan& plan, std::size_t dim);

/// Smallest eigenvalue of the symmetric part of A1ᵀA2. Positive ⇒ the linear
/// pair (A1, A2) is strongly monotone with that modulus.
double pair_modulus_linear(const Matrix& a1, const Matrix& a2);

/// min ⟨f(x)−f(y), w(x)−w(y)⟩ / ‖x−y‖² over sampled pairs. An UPPER bound on
/// the true modulus.
double sample_pair_modulus(const VectorField& f, const VectorField& w, const SamplingPlan& plan);
double sample_pair_modulus(const Map& f, const Map& w, std::size_t dim, const SamplingPlan& plan);

/// max ‖f(x)−f(y)‖ / ‖x−y‖ over sampled pairs. A LOWER bound on the true
/// Lipschitz constant.
double sample_lipschitz(const VectorField& f, const SamplingPlan& plan);
double sample_lipschitz(const Map& f, std::size_t dim, const SamplingPlan& plan);

struct PseudoPairReport {
  std::size_t pairs_checked = 0;
  std::size_t premise_held = 0;
  std::size_t violations = 0;
  std::vector<std::pair<Vector, Vector>> witnesses;  // first few violating (x, y)
};

/// Counts ordered pairs with ⟨f(x), w(y)−w(x)⟩ ≥ 0 but ⟨f(y), w(y)−w(x)⟩ < 0,
/// both up to 1e-12.
PseudoPairReport check_pseudo_pair(const VectorField& f, const VectorField& w, const SamplingPlan& plan);

/// γ/(1+l)²: strong-monotonicity modulus of f∘(Id−v)⁻¹ given a γ-strongly
/// monotone pair (f, Id−v) and l-Lipschitz v. Throws ContractError for γ ≤ 0 or l < 0.
double composition_modulus_bound(double gamma, double l);

enum class ConstantSource { Declared, Spectral, Sampled };
enum class Bias { Exact, LowerBound, UpperBound };

std::string to_string(ConstantSource s);
std::string to_string(Bias b);

struct Estimate {
  double value = 0.0;
  ConstantSource source = ConstantSource::Declared;
  Bias bias = Bias::Exact;
};

/// Estimates of the problem constants with provenance. Declared values win,
/// then spectral (linear maps), then sampled.
struct ConstantEstimates {
  std::optional<Estimate> L;        // Lipschitz of f
  std::optional<Estimate> l;        // Lipschitz of v
  std::optional<Estimate> l_tilde;  // Lipschitz of (Id−v)⁻¹
  std::optional<Estimate> gamma;    // modulus of the pair (f, Id−v)
};

/// With `use_declared` false every constant is computed from the data.
ConstantEstimates estimate_constants(const QviProblem& problem, const SamplingPlan& plan, bool use_declared = true);

/// Safety factors applied to sampled estimates before they feed step sizes.
inline constexpr double kSampledGammaSafety = 0.9;
inline constexpr double kSampledLipschitzSafety = 1.1;

/// Conservative value for step-size use: sampled γ̂ ×0.9, sampled L̂ ×1.1.
double conservative(const Estimate& e);

}  // namespace qvi
