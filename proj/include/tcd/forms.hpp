#ifndef TCD_FORMS_HPP
#define TCD_FORMS_HPP

// Toeplitz objects attached to a matrix tuple: the operator-level block
// Toeplitz form with entries T_k on the k-th subdiagonal, the scalar
// Toeplitz form of a moment vector, the rank-one Toeplitz atoms generated
// by unit-circle points, and the pointwise gauge nu(w).

#include <string>
#include <utility>
#include <vector>

#include "tcd/linalg.hpp"

namespace tcd {

// An ordered d-tuple of n x n complex matrices.
struct MatrixTuple {
  std::vector<Matrix> matrices;

  Index d() const { return static_cast<Index>(matrices.size()); }
  Index n() const { return matrices.empty() ? 0 : matrices.front().rows(); }

  void validate() const {
    if (matrices.empty())
      throw Error(ErrorCode::InvalidInput, "tuple must have d >= 1 entries");
    const Index dim = matrices.front().rows();
    if (dim < 1) throw Error(ErrorCode::InvalidInput, "tuple entries must be n >= 1");
    for (const Matrix& m : matrices) {
      if (m.rows() != m.cols())
        throw Error(ErrorCode::NotSquare, "tuple entries must be square");
      if (m.rows() != dim)
        throw Error(ErrorCode::DimensionMismatch, "tuple entries must share one dimension");
      require_finite(m, "tuple entry");
    }
  }
};

inline MatrixTuple make_tuple(std::vector<Matrix> matrices) {
  MatrixTuple t{std::move(matrices)};
  t.validate();
  return t;
}

inline MatrixTuple zero_tuple(Index d, Index n) {
  std::vector<Matrix> ms(static_cast<std::size_t>(d), Matrix::Zero(n, n));
  return make_tuple(std::move(ms));
}

inline MatrixTuple adjoint_tuple(const MatrixTuple& t) {
  std::vector<Matrix> ms;
  ms.reserve(t.matrices.size());
  for (const Matrix& m : t.matrices) ms.push_back(m.adjoint());
  return make_tuple(std::move(ms));
}

inline MatrixTuple scale_tuple(const MatrixTuple& t, Complex a) {
  std::vector<Matrix> ms;
  ms.reserve(t.matrices.size());
  for (const Matrix& m : t.matrices) ms.push_back(a * m);
  return make_tuple(std::move(ms));
}

inline MatrixTuple subtract_tuples(const MatrixTuple& s, const MatrixTuple& t) {
  if (s.d() != t.d() || s.n() != t.n())
    throw Error(ErrorCode::DimensionMismatch, "tuples must share (d, n)");
  std::vector<Matrix> ms;
  ms.reserve(s.matrices.size());
  for (std::size_t k = 0; k < s.matrices.size(); ++k)
    ms.push_back(s.matrices[k] - t.matrices[k]);
  return make_tuple(std::move(ms));
}

inline MatrixTuple add_tuples(const MatrixTuple& s, const MatrixTuple& t) {
  return subtract_tuples(s, scale_tuple(t, Complex(-1.0, 0.0)));
}

// Entrywise compression X* T_k X for any map X: C^m -> C^n.
inline MatrixTuple compress_tuple(const MatrixTuple& t, const Matrix& x) {
  if (x.rows() != t.n())
    throw Error(ErrorCode::DimensionMismatch, "compression map must act on C^n");
  std::vector<Matrix> ms;
  ms.reserve(t.matrices.size());
  for (const Matrix& m : t.matrices) ms.push_back(x.adjoint() * m * x);
  return make_tuple(std::move(ms));
}

// The (d+1)n Hermitian block Toeplitz matrix with alpha * I_n on the
// diagonal, T_{i-j} at block (i, j) below it, and adjoints mirrored above.
struct BlockToeplitzForm {
  MatrixTuple source;
  double alpha = 0.0;
  Matrix matrix;
};

inline BlockToeplitzForm assemble_block(const MatrixTuple& t, double alpha) {
  t.validate();
  if (!(alpha >= 0.0))
    throw Error(ErrorCode::InvalidInput, "alpha must be nonnegative");
  const Index d = t.d(), n = t.n();
  Matrix m = Matrix::Zero((d + 1) * n, (d + 1) * n);
  for (Index i = 0; i <= d; ++i) {
    m.block(i * n, i * n, n, n) = alpha * Matrix::Identity(n, n);
    for (Index j = 0; j < i; ++j) {
      const Matrix& entry = t.matrices[static_cast<std::size_t>(i - j - 1)];
      m.block(i * n, j * n, n, n) = entry;
      m.block(j * n, i * n, n, n) = entry.adjoint();
    }
  }
  return {t, alpha, std::move(m)};
}

// Scalar case: the (d+1) x (d+1) Toeplitz matrix of a moment vector w.
struct ScalarToeplitzForm {
  Vector moments;
  double alpha = 0.0;
  Matrix matrix;
};

inline ScalarToeplitzForm assemble_scalar(const Vector& w, double alpha) {
  if (w.size() < 1) throw Error(ErrorCode::InvalidInput, "moment vector must be nonempty");
  if (!w.allFinite())
    throw Error(ErrorCode::InvalidInput, "moment vector contains NaN/Inf entries");
  if (!(alpha >= 0.0))
    throw Error(ErrorCode::InvalidInput, "alpha must be nonnegative");
  const Index d = w.size();
  Matrix m = Matrix::Zero(d + 1, d + 1);
  for (Index i = 0; i <= d; ++i) {
    m(i, i) = alpha;
    for (Index j = 0; j < i; ++j) {
      m(i, j) = w(i - j - 1);
      m(j, i) = std::conj(w(i - j - 1));
    }
  }
  return {w, alpha, std::move(m)};
}

// Pointwise gauge: nu(w) = inf{alpha : scalar form is PSD}. Since the
// alpha-form is alpha * I plus the zero-diagonal form, this is just
// -lambda_min of the latter, clamped at zero.
inline double nu(const Vector& w, const Tolerances& tol = {}) {
  const ScalarToeplitzForm form = assemble_scalar(w, 0.0);
  return std::max(0.0, -min_eigenvalue(form.matrix, tol));
}

// Rank-one positive Toeplitz matrix generated by a unit-circle point:
// entry (i, j) = lambda^(i-j), equal to gamma gamma* with gamma_i = lambda^i.
struct ToeplitzAtom {
  Complex lambda;
  Index size = 0;
  Matrix matrix;
  Vector column;
};

inline ToeplitzAtom toeplitz_atom(Complex lambda, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "atom size must be >= 1");
  const double mod = std::abs(lambda);
  if (mod < 1e-6)
    throw Error(ErrorCode::ZeroModulus, "atom point has modulus below 1e-6");
  if (std::abs(mod - 1.0) > 1e-12)
    throw Error(ErrorCode::NotOnUnitCircle, "atom point must lie on the unit circle");
  lambda /= mod;
  Vector gamma(n);
  Complex power(1.0, 0.0);
  for (Index i = 0; i < n; ++i) {
    gamma(i) = power;
    power *= lambda;
  }
  Matrix m = gamma * gamma.adjoint();
  return {lambda, n, std::move(m), std::move(gamma)};
}

// Moment vector (lambda, lambda^2, ..., lambda^d) of a circle point.
inline Vector power_circle_point(Complex lambda, Index d) {
  const double mod = std::abs(lambda);
  if (mod < 1e-6)
    throw Error(ErrorCode::ZeroModulus, "circle point has modulus below 1e-6");
  lambda /= mod;
  Vector w(d);
  Complex power = lambda;
  for (Index k = 0; k < d; ++k) {
    w(k) = power;
    power *= lambda;
  }
  return w;
}

}  // namespace tcd

#endif  // TCD_FORMS_HPP
