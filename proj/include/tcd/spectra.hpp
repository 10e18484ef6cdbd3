#ifndef TCD_SPECTRA_HPP
#define TCD_SPECTRA_HPP

// Joint-spectrum computations for commuting tuples. The working definition
// for matrices: conjugate the tuple to simultaneous upper triangular form by
// one unitary and read joint eigenvalues off the diagonals. Normal tuples
// are simultaneously diagonalized instead, via Hermitian mixtures with
// recursion into degenerate eigenspaces.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "tcd/forms.hpp"
#include "tcd/random.hpp"

namespace tcd {

constexpr double kSpectraTol = 1e-8;

struct TupleClass {
  bool commuting = false;
  bool normal = false;
  bool unitary = false;
  bool power_unitary = false;
  // certifying residuals (relative where a natural scale exists)
  double commutator_residual = 0.0;
  double normality_residual = 0.0;
  double unitarity_residual = 0.0;
  double power_residual = 0.0;
};

inline TupleClass classify(const MatrixTuple& t, double tol = 1e-9) {
  t.validate();
  const Index d = t.d(), n = t.n();
  TupleClass c;
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(d));
  for (const Matrix& m : t.matrices) norms.push_back(operator_norm(m));

  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const Matrix comm = t.matrices[i] * t.matrices[j] - t.matrices[j] * t.matrices[i];
      const double scale = std::max(1.0, norms[i] * norms[j]);
      c.commutator_residual = std::max(c.commutator_residual, operator_norm(comm) / scale);
    }
  c.commuting = c.commutator_residual <= tol;

  for (Index k = 0; k < d; ++k) {
    const Matrix& m = t.matrices[k];
    const Matrix nk = m * m.adjoint() - m.adjoint() * m;
    const double scale = std::max(1.0, norms[k] * norms[k]);
    c.normality_residual = std::max(c.normality_residual, operator_norm(nk) / scale);
    c.unitarity_residual = std::max(
        c.unitarity_residual,
        operator_norm(m.adjoint() * m - Matrix::Identity(n, n)));
  }
  c.normal = c.commuting && c.normality_residual <= tol;
  const bool unitary_each = c.unitarity_residual <= tol;
  c.unitary = c.normal && unitary_each;

  if (c.unitary) {
    Matrix power = Matrix::Identity(n, n);
    for (Index k = 0; k < d; ++k) {
      power = power * t.matrices[0];
      c.power_residual = std::max(c.power_residual, operator_norm(t.matrices[k] - power));
    }
    c.power_unitary = c.power_residual <= tol;
  } else {
    c.power_residual = std::numeric_limits<double>::infinity();
  }
  return c;
}

struct JointSpectrum {
  std::vector<Vector> points;  // joint eigenvalue tuples, with multiplicity
  Matrix basis;                // unitary
  double residual = 0.0;       // max off-triangular (or off-diagonal) norm
};

namespace detail {

inline double strict_lower_norm(const Matrix& m) {
  double sum = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i) sum += std::norm(m(i, j));
  return std::sqrt(sum);
}

inline double off_diagonal_norm(const Matrix& m) {
  double sum = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j) sum += std::norm(m(i, j));
  return std::sqrt(sum);
}

inline double tuple_scale(const MatrixTuple& t) {
  double s = 1.0;
  for (const Matrix& m : t.matrices) s = std::max(s, m.norm());
  return s;
}

// Max deviation of the tuple entries from scalar multiples of the identity.
inline double scalar_deviation(const std::vector<Matrix>& ms) {
  double dev = 0.0;
  for (const Matrix& m : ms) {
    const Complex mean = m.trace() / static_cast<double>(m.rows());
    dev = std::max(dev, (m - mean * Matrix::Identity(m.rows(), m.cols())).norm());
  }
  return dev;
}

// One common eigenvector of a commuting tuple, found by iteratively
// intersecting eigenspaces: the mu-eigenspace of T_k restricted to an
// invariant subspace stays invariant for the rest of the tuple.
inline Vector common_eigenvector(const std::vector<Matrix>& ms, double tol) {
  const Index n = ms.front().rows();
  Matrix basis = Matrix::Identity(n, n);
  for (const Matrix& m : ms) {
    if (basis.cols() == 1) break;
    const Matrix restricted = basis.adjoint() * m * basis;
    const Complex mean = restricted.trace() / static_cast<double>(restricted.rows());
    const double dev =
        (restricted - mean * Matrix::Identity(restricted.rows(), restricted.cols())).norm();
    if (dev <= tol) continue;  // acts as a scalar here, nothing to refine
    Eigen::ComplexSchur<Matrix> schur(restricted);
    if (schur.info() != Eigen::Success)
      throw Error(ErrorCode::TriangularizationFailed, "Schur step failed");
    const Complex mu = schur.matrixT()(0, 0);
    // geometric eigenspace = numerical kernel of (restricted - mu I)
    const Matrix shifted =
        restricted - mu * Matrix::Identity(restricted.rows(), restricted.cols());
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(tol, 1e-13 * std::max(1.0, sv(0)));
    Index kernel = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= cutoff) ++kernel;
    if (kernel == 0) kernel = 1;  // smallest singular direction still best
    basis = basis * svd.matrixV().rightCols(kernel);
    // re-orthonormalize to keep drift out of deep intersections
    Eigen::HouseholderQR<Matrix> qr(basis);
    basis = qr.householderQ() * Matrix::Identity(n, basis.cols());
  }
  return basis.col(0);
}

// Deflation-based joint triangularization: peel off one common eigenvector
// at a time. Slower than a lucky Schur of a generic combination but immune
// to eigenvalue collisions.
inline Matrix triangularize_by_deflation(std::vector<Matrix> ms, double tol) {
  const Index n = ms.front().rows();
  Matrix q = Matrix::Identity(n, n);
  for (Index col = 0; col + 1 < n; ++col) {
    const Index m = n - col;
    std::vector<Matrix> active;
    active.reserve(ms.size());
    for (const Matrix& t : ms) active.push_back(t.bottomRightCorner(m, m));
    const Vector v = common_eigenvector(active, tol);
    // Householder-style unitary sending e_0 to v on the trailing block
    Matrix h = Matrix::Identity(m, m);
    Vector w = v;
    const Complex phase =
        std::abs(w(0)) > 0.0 ? w(0) / std::abs(w(0)) : Complex(1.0, 0.0);
    w(0) += phase;
    const double wn = w.norm();
    if (wn > 1e-14) {
      w /= wn;
      h = -phase * (Matrix::Identity(m, m) - 2.0 * w * w.adjoint());
    }
    // h * e_0 = v up to rounding; apply on the trailing block
    Matrix full = Matrix::Identity(n, n);
    full.bottomRightCorner(m, m) = h;
    q = q * full;
    for (Matrix& t : ms) {
      const Matrix sub = h.adjoint() * t.bottomRightCorner(m, m) * h;
      t.bottomRightCorner(m, m) = sub;
    }
  }
  return q;
}

}  // namespace detail

// Simultaneous unitary triangularization of a commuting tuple; joint
// spectrum = tuples of diagonal entries, ordered by position. Tries Schur
// of a seeded generic linear combination first (re-randomized on residual
// failure), then falls back to eigenvector deflation.
inline JointSpectrum joint_spectrum(const MatrixTuple& t, std::uint64_t seed = 0,
                                    double spectra_tol = kSpectraTol,
                                    double commuting_tol = 1e-9) {
  t.validate();
  const TupleClass cls = classify(t, commuting_tol);
  if (!cls.commuting)
    throw Error(ErrorCode::NotCommuting,
                "tuple commutator residual " + std::to_string(cls.commutator_residual));
  const Index d = t.d(), n = t.n();
  const double scale = detail::tuple_scale(t);
  const double bound = spectra_tol * std::max(1.0, scale);

  auto evaluate = [&](const Matrix& q) {
    double residual = 0.0;
    for (const Matrix& m : t.matrices)
      residual = std::max(residual, detail::strict_lower_norm(q.adjoint() * m * q));
    return residual;
  };

  Matrix best_q = Matrix::Identity(n, n);
  double best_residual = evaluate(best_q);
  for (std::uint64_t attempt = 0; attempt < 8 && best_residual > bound; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    Matrix g = Matrix::Zero(n, n);
    for (Index k = 0; k < d; ++k) g += rng.complex_gaussian() * t.matrices[k];
    Eigen::ComplexSchur<Matrix> schur(g);
    if (schur.info() != Eigen::Success) continue;
    const Matrix q = schur.matrixU();
    const double residual = evaluate(q);
    if (residual < best_residual) {
      best_residual = residual;
      best_q = q;
    }
  }
  if (best_residual > bound) {
    const Matrix q = detail::triangularize_by_deflation(t.matrices, bound);
    const double residual = evaluate(q);
    if (residual < best_residual) {
      best_residual = residual;
      best_q = q;
    }
  }
  if (best_residual > bound)
    throw Error(ErrorCode::TriangularizationFailed,
                "triangularization residual " + std::to_string(best_residual));

  JointSpectrum js;
  js.basis = best_q;
  js.residual = best_residual;
  js.points.reserve(static_cast<std::size_t>(n));
  std::vector<Matrix> conjugated;
  conjugated.reserve(static_cast<std::size_t>(d));
  for (const Matrix& m : t.matrices) conjugated.push_back(best_q.adjoint() * m * best_q);
  for (Index i = 0; i < n; ++i) {
    Vector point(d);
    for (Index k = 0; k < d; ++k) point(k) = conjugated[static_cast<std::size_t>(k)](i, i);
    js.points.push_back(std::move(point));
  }
  return js;
}

namespace detail {

// Recursive refinement: eigendecompose a generic Hermitian mixture of the
// compressed tuple, recurse with fresh mixtures inside eigenvalue clusters.
inline Matrix diagonalizing_basis(const std::vector<Matrix>& ms, Rng rng, int depth,
                                  double scalar_tol) {
  const Index m = ms.front().rows();
  if (m == 1) return Matrix::Identity(1, 1);
  if (scalar_deviation(ms) <= scalar_tol) return Matrix::Identity(m, m);
  if (depth > 8)
    throw Error(ErrorCode::DegeneracyNotResolved,
                "degenerate eigenspaces not resolved after depth 8");

  Matrix h = Matrix::Zero(m, m);
  for (const Matrix& t : ms)
    h += rng.gaussian() * hermitian_part(t) + rng.gaussian() * skew_part_over_i(t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "mixture eigensolver failed");
  const RealVector& ev = es.eigenvalues();
  const double spread = ev(m - 1) - ev(0);
  if (spread <= 1e-14 * std::max(1.0, std::abs(ev(0)))) {
    // uninformative mixture; try again with a fresh one
    return diagonalizing_basis(ms, rng.stream(depth + 101), depth + 1, scalar_tol);
  }
  const double gap_threshold = 1e-8 * spread;

  Matrix basis = Matrix::Identity(m, m);
  Index start = 0;
  Index placed = 0;
  while (start < m) {
    Index end = start + 1;
    while (end < m && ev(end) - ev(end - 1) < gap_threshold) ++end;
    const Index width = end - start;
    const Matrix block = es.eigenvectors().middleCols(start, width);
    if (width == 1) {
      basis.col(placed) = block.col(0);
    } else {
      std::vector<Matrix> compressed;
      compressed.reserve(ms.size());
      for (const Matrix& t : ms) compressed.push_back(block.adjoint() * t * block);
      const Matrix inner =
          diagonalizing_basis(compressed, rng.stream(depth * 31 + start), depth + 1, scalar_tol);
      basis.middleCols(placed, width) = block * inner;
    }
    placed += width;
    start = end;
  }
  return basis;
}

}  // namespace detail

// Simultaneous unitary diagonalization of a commuting normal tuple; the
// joint eigenvalue tuples are the Gelfand spectrum.
inline JointSpectrum simultaneous_diagonalize(const MatrixTuple& t, std::uint64_t seed = 0,
                                              double spectra_tol = kSpectraTol,
                                              double normal_tol = 1e-9) {
  t.validate();
  const TupleClass cls = classify(t, normal_tol);
  if (!cls.normal)
    throw Error(ErrorCode::NotNormalTuple,
                "tuple is not commuting-normal (commutator residual " +
                    std::to_string(cls.commutator_residual) + ", normality residual " +
                    std::to_string(cls.normality_residual) + ")");
  const Index d = t.d(), n = t.n();
  const double scale = detail::tuple_scale(t);
  const Matrix q =
      detail::diagonalizing_basis(t.matrices, Rng(mix_seed(seed, 0x5eed)), 0, 1e-12 * scale);

  JointSpectrum js;
  js.basis = q;
  std::vector<Matrix> conjugated;
  conjugated.reserve(static_cast<std::size_t>(d));
  for (const Matrix& m : t.matrices) conjugated.push_back(q.adjoint() * m * q);
  for (const Matrix& c : conjugated)
    js.residual = std::max(js.residual, detail::off_diagonal_norm(c));
  const double bound = spectra_tol * std::max(1.0, scale);
  if (js.residual > bound)
    throw Error(ErrorCode::DegeneracyNotResolved,
                "diagonalization residual " + std::to_string(js.residual));
  js.points.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Vector point(d);
    for (Index k = 0; k < d; ++k) point(k) = conjugated[static_cast<std::size_t>(k)](i, i);
    js.points.push_back(std::move(point));
  }
  return js;
}

// Greedy minimal-distance matching between two spectra viewed as multisets.
// Returns the largest matched distance, or +inf when the sizes differ.
inline double match_point_multisets(const std::vector<Vector>& a,
                                    const std::vector<Vector>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Vector& pa : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = b.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = (pa - b[j]).norm();
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j == b.size()) return std::numeric_limits<double>::infinity();
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace tcd

#endif  // TCD_SPECTRA_HPP
