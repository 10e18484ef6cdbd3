#ifndef TCD_LINALG_HPP
#define TCD_LINALG_HPP

// Dense complex linear algebra kernel: Hermitian eigendecomposition, PSD
// tests, rank-revealing factorization, operator norms. Everything else in
// the library is built on these few calls. Backed by Eigen's dense solvers;
// the contracts here (residual bounds, tolerance semantics) are what the
// rest of the code relies on, not the particular algorithm.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "tcd/errors.hpp"

namespace tcd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Tolerances {
  double eig_tol = 1e-10;       // relative eigensolver residual
  double psd_tol = 1e-9;        // relative PSD slack
  double rank_tol = 1e-9;       // relative rank cutoff
  double residual_tol = 1e-8;   // dilation verification

  void validate() const {
    if (!(eig_tol > 0 && psd_tol > 0 && rank_tol > 0 && residual_tol > 0))
      throw Error(ErrorCode::InvalidInput, "tolerances must be strictly positive");
  }
};

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m))
    throw Error(ErrorCode::InvalidInput, std::string(what) + " contains NaN/Inf entries");
}

inline Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint());
}

inline Matrix skew_part_over_i(const Matrix& m) {
  return (m - m.adjoint()) / Complex(0.0, 2.0);
}

struct HermitianEigen {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns

  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
  // max |lambda| = spectral norm of the (Hermitian) input
  double spectral_norm() const { return std::max(std::abs(min()), std::abs(max())); }
};

inline HermitianEigen hermitian_eig(const Matrix& m, const Tolerances& tol = {}) {
  tol.validate();
  require_finite(m, "matrix");
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NotSquare, "expected a square matrix, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const double scale = std::max(1.0, m.norm());
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol.eig_tol * scale)
    throw Error(ErrorCode::NotHermitian,
                "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const Matrix& m, const Tolerances& tol = {}) {
  return hermitian_eig(m, tol).min();
}

// True iff lambda_min(M) >= -psd_tol * max(1, ||M||). Relative slack keeps
// boundary fixtures (rank-deficient Toeplitz atoms) from flipping negative.
inline bool is_psd(const Matrix& m, const Tolerances& tol = {}) {
  const HermitianEigen eig = hermitian_eig(m, tol);
  const double scale = std::max(1.0, eig.spectral_norm());
  return eig.min() >= -tol.psd_tol * scale;
}

// Rank-revealing factor F (r x m) of a PSD matrix with F* F = M. Rows kept
// are the eigenvalues >= rank_tol * lambda_max; ties at the cutoff are kept
// since the dilation construction tolerates an overestimated rank far better
// than an underestimated one.
inline Matrix low_rank_factor(const Matrix& m, const Tolerances& tol = {}) {
  const HermitianEigen eig = hermitian_eig(m, tol);
  const double scale = std::max(1.0, eig.spectral_norm());
  if (eig.min() < -tol.psd_tol * scale)
    throw Error(ErrorCode::NotPSD,
                "eigenvalue " + std::to_string(eig.min()) + " below PSD slack");
  const double lambda_max = std::max(0.0, eig.max());
  const double cutoff = tol.rank_tol * lambda_max;
  const Index n = m.rows();
  Index r = 0;
  for (Index i = 0; i < n; ++i)
    if (eig.eigenvalues(i) >= cutoff && eig.eigenvalues(i) > 0.0) ++r;
  Matrix f(r, n);
  Index row = 0;
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda >= cutoff && lambda > 0.0)
      f.row(row++) = std::sqrt(lambda) * eig.eigenvectors.col(i).adjoint();
  }
  return f;
}

// Largest singular value, computed as sqrt(lambda_max(M* M)).
inline double operator_norm(const Matrix& m) {
  require_finite(m, "matrix");
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "singular value computation did not converge");
  return std::sqrt(std::max(0.0, es.eigenvalues()(gram.rows() - 1)));
}

// Kronecker product, block (i,j) = a(i,j) * b.
inline Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace tcd

#endif  // TCD_LINALG_HPP
