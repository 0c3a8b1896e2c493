#include "qvi/linalg.hpp"

#include <cmath>
#include <string>

#include "qvi/errors.hpp"

namespace qvi {

bool all_finite(const Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

void require_vector(const Vector& x, std::size_t dim, std::string_view what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw ContractError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                        ", got " + std::to_string(x.size()));
  }
  if (!all_finite(x)) throw ContractError(std::string(what) + ": non-finite entry");
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

double power_iteration(const Matrix& gram, Vector u) {
  u.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vector w = gram * u;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = u.dot(w);
    u = w / norm;
    const bool done = it > 2 && std::abs(next - lambda) <= 1e-14 * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return lambda;
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.transpose() * m;
  const Eigen::Index n = gram.cols();
  double lambda = power_iteration(gram, Vector::Ones(n));
  // The all-ones start can be orthogonal to the top singular vector (e.g. rows
  // of the form (a, -a)); a second, alternating start covers that case.
  Vector alt(n);
  for (Eigen::Index i = 0; i < n; ++i) alt[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * static_cast<double>(i));
  lambda = std::max(lambda, power_iteration(gram, alt));
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace qvi
