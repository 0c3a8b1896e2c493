#pragma once

#include <cstddef>
#include <variant>

#include "qvi/linalg.hpp"

namespace qvi {

struct WholeSpace {};
struct NonnegativeOrthant {};
struct Box {
  Vector lower;
  Vector upper;
};

/// Closed convex set with a closed-form Euclidean projection.
class ConvexSet {
 public:
  using Variant = std::variant<WholeSpace, NonnegativeOrthant, Box>;

  static ConvexSet whole_space(std::size_t dim);
  static ConvexSet nonnegative_orthant(std::size_t dim);
  /// Requires finite bounds with lower ≤ upper componentwise.
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet box(std::size_t dim, double lower, double upper);

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return set_; }

  Vector project(const Vector& z) const;
  bool contains(const Vector& z, double tol = 0.0) const;

 private:
  ConvexSet(std::size_t dim, Variant v) : dim_(dim), set_(std::move(v)) {}

  std::size_t dim_;
  Variant set_;
};

inline Vector project(const ConvexSet& set, const Vector& z) { return set.project(z); }

}  // namespace qvi
