#include "qvi/field.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qvi/errors.hpp"

namespace qvi {

VectorField::VectorField(std::size_t dim, std::optional<Matrix> linear, std::vector<expr::Expression> exprs)
    : dim_(dim), linear_(std::move(linear)), exprs_(std::move(exprs)) {
  if (dim_ == 0) throw ContractError("vector field dimension must be positive");
  if (linear_) {
    if (static_cast<std::size_t>(linear_->rows()) != dim_ || static_cast<std::size_t>(linear_->cols()) != dim_) {
      throw ContractError("linear part must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (!linear_->allFinite()) throw ContractError("linear part has non-finite entries");
  }
  if (!exprs_.empty() && exprs_.size() != dim_) {
    throw ContractError("expected " + std::to_string(dim_) + " component expressions, got " +
                        std::to_string(exprs_.size()));
  }
  for (const auto& e : exprs_) {
    if (e.dim() != dim_) throw ContractError("component expression declared over a different dimension");
  }
}

VectorField VectorField::from_components(std::vector<expr::Expression> components) {
  if (components.empty()) throw ContractError("vector field needs at least one component");
  const std::size_t n = components.size();
  return VectorField(n, std::nullopt, std::move(components));
}

VectorField VectorField::split(Matrix linear, std::vector<expr::Expression> remainder) {
  const auto n = static_cast<std::size_t>(linear.rows());
  return VectorField(n, std::move(linear), std::move(remainder));
}

VectorField VectorField::zero(std::size_t dim) {
  return split(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

VectorField VectorField::identity(std::size_t dim) {
  return split(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

VectorField VectorField::identity_minus(const VectorField& v) {
  const auto n = static_cast<Eigen::Index>(v.dim());
  std::vector<expr::Expression> exprs;
  exprs.reserve(v.exprs_.size());
  if (v.linear_) {
    for (const auto& e : v.exprs_) exprs.push_back(expr::negate(e));
    return split(Matrix::Identity(n, n) - *v.linear_, std::move(exprs));
  }
  for (std::size_t i = 0; i < v.exprs_.size(); ++i) exprs.push_back(expr::variable_minus(i, v.exprs_[i]));
  return from_components(std::move(exprs));
}

bool VectorField::is_zero() const { return is_linear() && linear_->isZero(0.0); }

const Matrix& VectorField::linear_part() const {
  if (!linear_) throw ContractError("vector field has no linear split");
  return *linear_;
}

VectorField VectorField::remainder_field() const {
  if (!linear_) throw ContractError("vector field has no linear split");
  if (exprs_.empty()) return zero(dim_);
  return from_components(exprs_);
}

VectorField VectorField::with_declared_lipschitz(double l) const {
  if (!(l > 0.0) || !std::isfinite(l)) throw ContractError("declared Lipschitz constant must be positive");
  VectorField copy = *this;
  copy.declared_lipschitz_ = l;
  return copy;
}

Vector VectorField::operator()(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw ContractError("field of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                        std::to_string(x.size()));
  }
  Vector out = linear_ ? Vector(*linear_ * x) : Vector::Zero(x.size());
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (std::size_t i = 0; i < exprs_.size(); ++i) {
    try {
      out[static_cast<Eigen::Index>(i)] += exprs_[i].eval(xs);
    } catch (const EvalError& e) {
      throw EvalError("component " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw EvalError("component " + std::to_string(i + 1) + ": non-finite value");
  }
  return out;
}

}  // namespace qvi
