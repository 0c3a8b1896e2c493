#include "qvi/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qvi/analysis.hpp"
#include "qvi/errors.hpp"

namespace qvi {
namespace {

std::shared_ptr<const Eigen::FullPivLU<Matrix>> factor(const Matrix& m, const char* what) {
  auto lu = std::make_shared<Eigen::FullPivLU<Matrix>>(m);
  if (!lu->isInvertible()) throw SingularLinearPart(std::string(what) + " is singular");
  return lu;
}

Matrix identity_like(const Matrix& m) { return Matrix::Identity(m.rows(), m.cols()); }

double scalar_of(const VectorField& v, double x) { return x - v(Vector::Constant(1, x))[0]; }

// Fixed-point loop shared by the picard and semilinear strategies.
template <typename Step>
Vector fixed_point(const VectorField& v, const Vector& y, Vector x, double target, std::size_t max_inner,
                   std::vector<double>* trace, Step step) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  for (std::size_t k = 0; k < max_inner; ++k) {
    const Vector vx = v(x);
    const double r = (x - vx - y).norm();
    if (trace != nullptr) trace->push_back(r);
    if (r <= target) return x;
    if (r < 0.5 * best) {
      best = r;
      stalled = 0;
    } else if (++stalled > 50) {
      break;  // round-off floor; the caller's a-posteriori check decides
    }
    x = step(x, vx);
    if (!all_finite(x)) throw NoConvergence("inverse iteration produced a non-finite iterate", r);
  }
  return x;
}

}  // namespace

InverseSpec InverseSpec::linear_exact(Matrix v) {
  if (v.rows() != v.cols() || v.rows() == 0) throw ContractError("linear displacement must be a non-empty square matrix");
  const Matrix i_minus_v = identity_like(v) - v;
  auto lu = factor(i_minus_v, "I - V");
  Matrix inverse = lu->inverse();
  const auto n = static_cast<std::size_t>(v.rows());
  VectorField field = VectorField::linear(v);
  return {n, std::move(field), LinearExact{std::move(v), std::move(inverse), std::move(lu)}};
}

InverseSpec InverseSpec::picard(VectorField v, double l) {
  if (!(l >= 0.0 && l < 1.0)) throw ContractError("picard inversion needs a contraction constant in [0, 1), got " + std::to_string(l));
  const std::size_t n = v.dim();
  VectorField copy = v;
  return {n, std::move(copy), PicardContraction{std::move(v), l}};
}

InverseSpec InverseSpec::semilinear(VectorField v, std::optional<double> g_lipschitz) {
  if (!v.is_split()) throw ContractError("semilinear inversion needs v split as A x + g(x)");
  Matrix a = v.linear_part();
  VectorField g = v.remainder_field();
  double lg = 0.0;
  if (g_lipschitz) {
    lg = *g_lipschitz;
  } else if (g.declared_lipschitz()) {
    lg = *g.declared_lipschitz();
  } else if (!g.is_zero()) {
    lg = kSampledLipschitzSafety * sample_lipschitz(g, SamplingPlan{});
  }
  if (!(lg >= 0.0) || !std::isfinite(lg)) throw ContractError("Lipschitz constant of g must be finite and nonnegative");
  auto lu = factor(identity_like(a) - a, "I - A");
  Matrix inverse = lu->inverse();
  const double contraction = operator_norm(inverse) * lg;
  if (contraction >= 1.0) {
    throw ContractError("semilinear inversion is not a contraction: ||(I-A)^-1|| * L_g = " + std::to_string(contraction));
  }
  const std::size_t n = v.dim();
  return {n, v, Semilinear{std::move(a), std::move(g), lg, contraction, std::move(inverse), std::move(lu)}};
}

InverseSpec InverseSpec::scalar_bracket(VectorField v, double lower, double upper) {
  if (v.dim() != 1) throw ContractError("bracket inversion is one-dimensional");
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw ContractError("bracket needs finite lower < upper");
  }
  const double fa = scalar_of(v, lower);
  const double fb = scalar_of(v, upper);
  if (fa == fb) throw BracketingFailure("x - v(x) takes the same value at both bracket ends");
  VectorField copy = v;
  return {1, std::move(copy), ScalarBracket{std::move(v), lower, upper}};
}

InverseSpec InverseSpec::with_tolerances(double inner_tol, std::size_t max_inner) const {
  if (!(inner_tol > 0.0) || max_inner == 0) throw ContractError("inner tolerance and iteration cap must be positive");
  InverseSpec copy = *this;
  copy.inner_tol_ = inner_tol;
  copy.max_inner_ = max_inner;
  return copy;
}

std::string_view InverseSpec::strategy_name() const {
  switch (spec_.index()) {
    case 0: return "linear";
    case 1: return "picard";
    case 2: return "semilinear";
    default: return "bracket";
  }
}

Vector InverseSpec::invert(const Vector& y) const { return invert_impl(y, nullptr); }

Vector InverseSpec::invert_traced(const Vector& y, std::vector<double>& trace) const { return invert_impl(y, &trace); }

Vector InverseSpec::invert_impl(const Vector& y, std::vector<double>* trace) const {
  require_vector(y, dim_, "invert");
  const double tol = inner_tol_ * std::max(1.0, y.norm());
  const double target = 1e-2 * tol;

  Vector x = std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearExact>) {
          Vector sol = s.lu->solve(y);
          const Vector r = y - (sol - s.v * sol);
          sol += s.lu->solve(r);
          return sol;
        } else if constexpr (std::is_same_v<T, PicardContraction>) {
          return fixed_point(v_, y, y, target, max_inner_, trace,
                             [&](const Vector&, const Vector& vx) -> Vector { return y + vx; });
        } else if constexpr (std::is_same_v<T, Semilinear>) {
          const Vector start = s.lu->solve(y);
          return fixed_point(v_, y, start, target, max_inner_, trace, [&](const Vector& xk, const Vector& vx) -> Vector {
            // v(x) − A x recovers g(x) without a second evaluation.
            const Vector gx = vx - s.a * xk;
            return s.lu->solve(Vector(y + gx));
          });
        } else {
          const double yv = y[0];
          double a = s.lower;
          double b = s.upper;
          double ra = scalar_of(v_, a) - yv;
          const double rb = scalar_of(v_, b) - yv;
          if (ra == 0.0) return Vector::Constant(1, a);
          if (rb == 0.0) return Vector::Constant(1, b);
          if ((ra > 0.0) == (rb > 0.0)) {
            throw BracketingFailure("y = " + std::to_string(yv) + " is outside the image of x - v(x) over [" +
                                    std::to_string(s.lower) + ", " + std::to_string(s.upper) + "]");
          }
          double mid = 0.5 * (a + b);
          for (std::size_t k = 0; k < max_inner_; ++k) {
            mid = 0.5 * (a + b);
            const double rm = scalar_of(v_, mid) - yv;
            if (trace != nullptr) trace->push_back(std::abs(rm));
            if (std::abs(rm) <= target || mid <= a || mid >= b) break;
            if ((rm > 0.0) == (ra > 0.0)) {
              a = mid;
              ra = rm;
            } else {
              b = mid;
            }
          }
          return Vector::Constant(1, mid);
        }
      },
      spec_);

  const double residual = (x - v_(x) - y).norm();
  if (!(residual <= tol)) {
    throw NoConvergence(std::string(strategy_name()) + " inversion stopped with residual " + std::to_string(residual) +
                            " above tolerance " + std::to_string(tol),
                        residual);
  }
  return x;
}

double InverseSpec::lipschitz_of_inverse() const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearExact>) {
          return operator_norm(s.inverse);
        } else if constexpr (std::is_same_v<T, PicardContraction>) {
          return 1.0 / (1.0 - s.l);
        } else if constexpr (std::is_same_v<T, Semilinear>) {
          const double m = operator_norm(s.inverse);
          return m / (1.0 - s.contraction);
        } else {
          SamplingPlan plan;
          plan.seed = 0x5eed;
          plan.lo = s.lower;
          plan.hi = s.upper;
          plan.min_separation = 1e-9 * std::max(1.0, s.upper - s.lower);
          double best = 0.0;
          for (const auto& [p, q] : draw_pairs(plan, 1)) {
            const double dy = std::abs(scalar_of(v_, p[0]) - scalar_of(v_, q[0]));
            if (dy > 0.0) best = std::max(best, std::abs(p[0] - q[0]) / dy);
          }
          // Chords at the scale of the bracket miss derivative peaks on wide
          // brackets, so pair each uniform point with a near neighbour too.
          std::mt19937_64 rng(plan.seed);
          std::uniform_real_distribution<double> where(s.lower, s.upper);
          const double delta = 1e-6 * std::max(1.0, s.upper - s.lower);
          for (std::size_t k = 0; k < plan.count; ++k) {
            const double p = where(rng);
            const double q = p + (p + delta <= s.upper ? delta : -delta);
            const double dy = std::abs(scalar_of(v_, p) - scalar_of(v_, q));
            if (dy > 0.0) best = std::max(best, std::abs(p - q) / dy);
          }
          if (best == 0.0) throw SamplingError("no usable pairs for the inverse Lipschitz estimate");
          return best;
        }
      },
      spec_);
}

}  // namespace qvi
