#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qvi/expr.hpp"
#include "qvi/linalg.hpp"

namespace qvi {

/// A map ℝⁿ → ℝⁿ, either one expression per component or split as
/// `matrix·x + remainder(x)` (remainder optional). Immutable.
class VectorField {
 public:
  static VectorField from_components(std::vector<expr::Expression> components);
  static VectorField split(Matrix linear, std::vector<expr::Expression> remainder = {});
  static VectorField zero(std::size_t dim);
  static VectorField identity(std::size_t dim);
  static VectorField linear(Matrix m) { return split(std::move(m)); }
  /// x ↦ x − v(x), keeping v's split structure when it has one.
  static VectorField identity_minus(const VectorField& v);

  std::size_t dim() const noexcept { return dim_; }

  /// Throws EvalError naming the offending component on non-finite output.
  Vector operator()(const Vector& x) const;

  bool is_split() const noexcept { return linear_.has_value(); }
  /// Split form without a remainder.
  bool is_linear() const noexcept { return linear_.has_value() && exprs_.empty(); }
  bool is_zero() const;

  /// Matrix of the split form; ContractError when the field is not split.
  const Matrix& linear_part() const;
  /// Per-component expressions: the full components, or the split remainder
  /// (empty when there is none).
  const std::vector<expr::Expression>& expressions() const noexcept { return exprs_; }
  /// The remainder as a field of its own (zero when absent). Only for split fields.
  VectorField remainder_field() const;

  std::optional<double> declared_lipschitz() const noexcept { return declared_lipschitz_; }
  VectorField with_declared_lipschitz(double l) const;

 private:
  VectorField(std::size_t dim, std::optional<Matrix> linear, std::vector<expr::Expression> exprs);

  std::size_t dim_;
  std::optional<Matrix> linear_;
  std::vector<expr::Expression> exprs_;
  std::optional<double> declared_lipschitz_;
};

}  // namespace qvi
