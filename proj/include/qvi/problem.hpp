#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "qvi/convex_set.hpp"
#include "qvi/field.hpp"
#include "qvi/inverse.hpp"
#include "qvi/linalg.hpp"

namespace qvi {

/// Constants stated alongside a problem. All stored values are > 0.
struct ProblemConstants {
  std::optional<double> L;        // Lipschitz of f
  std::optional<double> l;        // Lipschitz of v
  std::optional<double> l_tilde;  // Lipschitz of (Id−v)⁻¹
  std::optional<double> gamma;    // modulus of the pair (f, Id−v)
  std::optional<double> mu;       // strong monotonicity of f

  /// Throws ContractError if any present value is not strictly positive.
  void validate() const;
  /// γ/(1+l)² when both γ and l are present.
  std::optional<double> composed_modulus() const;
};

/// 0 ∈ f(x) + N_{K(x)}(x) with K(x) = C + v(x).
///
/// The displacement v is the one carried by the inverse spec, so the two can
/// not disagree; construction additionally round-trips a few seeded points.
class QviProblem {
 public:
  QviProblem(std::string name, VectorField f, InverseSpec inverse, ConvexSet set, ProblemConstants constants = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& description() const noexcept { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

  std::size_t dim() const noexcept { return f_.dim(); }
  const VectorField& f() const noexcept { return f_; }
  const VectorField& v() const noexcept { return inverse_.displacement(); }
  const InverseSpec& inverse() const noexcept { return inverse_; }
  const ConvexSet& set() const noexcept { return set_; }
  const ProblemConstants& constants() const noexcept { return constants_; }

  /// y = x − v(x)
  Vector to_y(const Vector& x) const;

 private:
  std::string name_;
  std::string description_;
  VectorField f_;
  InverseSpec inverse_;
  ConvexSet set_;
  ProblemConstants constants_;
};

/// proj_{K(base)}(z) = v(base) + proj_C(z − v(base)).
Vector project_moving(const QviProblem& problem, const Vector& base, const Vector& z);

/// ‖y − proj_C(y − h·f(x))‖ with y = x − v(x). Zero exactly at solutions.
double natural_residual(const QviProblem& problem, const Vector& x, double h);

/// VI(T, C) with T = f∘(Id−v)⁻¹; solutions map back through invert.
class VariationalInequality {
 public:
  explicit VariationalInequality(const QviProblem& problem) : problem_(&problem) {}

  Vector T(const Vector& y) const { return problem_->f()(problem_->inverse().invert(y)); }
  const ConvexSet& set() const { return problem_->set(); }
  Vector to_x(const Vector& y) const { return problem_->inverse().invert(y); }

 private:
  const QviProblem* problem_;
};

/// The returned view borrows `problem`.
inline VariationalInequality to_vi(const QviProblem& problem) { return VariationalInequality(problem); }

}  // namespace qvi
