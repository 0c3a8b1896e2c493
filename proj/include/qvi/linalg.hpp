#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace qvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

bool all_finite(const Vector& x);

/// Throws ContractError naming `what` when x has the wrong size or a
/// non-finite entry.
void require_vector(const Vector& x, std::size_t dim, std::string_view what);

/// Largest singular value by power iteration on MᵀM from the all-ones start
/// vector. Relative accuracy ~1e-10.
double operator_norm(const Matrix& m);

/// Plain sequential dot product; used wherever bit-reproducibility between two
/// expressions matters (e.g. ⟨d,d⟩ vs ‖d‖²).
double dot(const Vector& a, const Vector& b);

}  // namespace qvi
