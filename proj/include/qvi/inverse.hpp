#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qvi/field.hpp"
#include "qvi/linalg.hpp"

namespace qvi {

/// Strategies for x = (Id − v)⁻¹(y).
///
/// | strategy   | v                       | iteration                              |
/// |------------|-------------------------|----------------------------------------|
/// | linear     | V x                     | LU solve of (I − V) x = y + refinement |
/// | picard     | l-contraction, l < 1    | x ← y + v(x)                           |
/// | semilinear | A x + g(x)              | x ← (I − A)⁻¹ (y + g(x))               |
/// | bracket    | scalar, on [a, b]       | bisection on x − v(x) − y              |
///
/// Every call checks ‖x − v(x) − y‖ ≤ inner_tol · max(1, ‖y‖) before returning.
class InverseSpec {
 public:
  struct LinearExact {
    Matrix v;
    Matrix inverse;  // (I − V)⁻¹
    std::shared_ptr<const Eigen::FullPivLU<Matrix>> lu;
  };
  struct PicardContraction {
    VectorField v;
    double l;
  };
  struct Semilinear {
    Matrix a;
    VectorField g;
    double g_lipschitz;
    double contraction;  // ‖(I−A)⁻¹‖·L_g
    Matrix inverse;      // (I − A)⁻¹
    std::shared_ptr<const Eigen::FullPivLU<Matrix>> lu;
  };
  struct ScalarBracket {
    VectorField v;
    double lower;
    double upper;
  };
  using Variant = std::variant<LinearExact, PicardContraction, Semilinear, ScalarBracket>;

  static constexpr double kDefaultInnerTol = 1e-12;
  static constexpr std::size_t kDefaultMaxInner = 100000;

  /// Throws SingularLinearPart when I − V is singular.
  static InverseSpec linear_exact(Matrix v);
  /// Throws ContractError unless 0 ≤ l < 1.
  static InverseSpec picard(VectorField v, double l);
  /// v must be split as A x + g(x). L_g is `g_lipschitz` when given, else
  /// sampled with a 1.1 safety factor. Throws SingularLinearPart, or
  /// ContractError when ‖(I−A)⁻¹‖·L_g ≥ 1.
  static InverseSpec semilinear(VectorField v, std::optional<double> g_lipschitz = std::nullopt);
  /// One-dimensional v with x − v(x) strictly monotone on [lower, upper].
  /// Throws BracketingFailure when x − v(x) takes equal values at the ends.
  static InverseSpec scalar_bracket(VectorField v, double lower, double upper);

  InverseSpec with_tolerances(double inner_tol, std::size_t max_inner) const;

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return spec_; }
  std::string_view strategy_name() const;
  double inner_tol() const noexcept { return inner_tol_; }
  std::size_t max_inner() const noexcept { return max_inner_; }

  /// The displacement map v this spec inverts Id − v for.
  const VectorField& displacement() const noexcept { return v_; }

  /// Throws NoConvergence, BracketingFailure (y outside the bracket's image).
  Vector invert(const Vector& y) const;
  /// Same as invert, additionally appending the inner residual of every
  /// iteration to `trace` (iterative strategies only).
  Vector invert_traced(const Vector& y, std::vector<double>& trace) const;

  /// l̃: exact for linear, 1/(1−l) for picard, the semilinear bound, and a
  /// sampled estimate for bracket.
  double lipschitz_of_inverse() const;

 private:
  InverseSpec(std::size_t dim, VectorField v, Variant spec) : dim_(dim), v_(std::move(v)), spec_(std::move(spec)) {}

  Vector invert_impl(const Vector& y, std::vector<double>* trace) const;

  std::size_t dim_;
  VectorField v_;
  Variant spec_;
  double inner_tol_ = kDefaultInnerTol;
  std::size_t max_inner_ = kDefaultMaxInner;
};

inline Vector invert(const InverseSpec& spec, const Vector& y) { return spec.invert(y); }
inline double lipschitz_of_inverse(const InverseSpec& spec) { return spec.lipschitz_of_inverse(); }

}  // namespace qvi
