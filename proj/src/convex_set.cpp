#include "qvi/convex_set.hpp"

#include <cmath>
#include <string>

#include "qvi/errors.hpp"

namespace qvi {

ConvexSet ConvexSet::whole_space(std::size_t dim) {
  if (dim == 0) throw ContractError("set dimension must be positive");
  return {dim, WholeSpace{}};
}

ConvexSet ConvexSet::nonnegative_orthant(std::size_t dim) {
  if (dim == 0) throw ContractError("set dimension must be positive");
  return {dim, NonnegativeOrthant{}};
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) throw ContractError("box bounds must have equal positive size");
  if (!all_finite(lower) || !all_finite(upper)) throw ContractError("box bounds must be finite");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) throw ContractError("box lower bound exceeds upper bound in component " + std::to_string(i + 1));
  }
  const auto n = static_cast<std::size_t>(lower.size());
  return {n, Box{std::move(lower), std::move(upper)}};
}

ConvexSet ConvexSet::box(std::size_t dim, double lower, double upper) {
  const auto n = static_cast<Eigen::Index>(dim);
  return box(Vector::Constant(n, lower), Vector::Constant(n, upper));
}

Vector ConvexSet::project(const Vector& z) const {
  require_vector(z, dim_, "project");
  if (std::holds_alternative<WholeSpace>(set_)) return z;
  if (std::holds_alternative<NonnegativeOrthant>(set_)) return z.cwiseMax(0.0);
  const Box& b = std::get<Box>(set_);
  return z.cwiseMax(b.lower).cwiseMin(b.upper);
}

bool ConvexSet::contains(const Vector& z, double tol) const {
  if (static_cast<std::size_t>(z.size()) != dim_ || !all_finite(z)) return false;
  if (std::holds_alternative<WholeSpace>(set_)) return true;
  if (std::holds_alternative<NonnegativeOrthant>(set_)) return (z.array() >= -tol).all();
  const Box& b = std::get<Box>(set_);
  return (z.array() >= b.lower.array() - tol).all() && (z.array() <= b.upper.array() + tol).all();
}

}  // namespace qvi
