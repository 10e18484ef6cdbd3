#ifndef TCD_DILATION_HPP
#define TCD_DILATION_HPP

// Finite-dimensional unitary power dilations of Toeplitz-contractive
// tuples, built from a Gram-factor shift extension of the positive block
// Toeplitz form, and the atomic decomposition (circle points lambda_j with
// PSD weights Q_j summing to the identity) read off the dilation's
// spectral projections.

#include <cstdint>
#include <utility>
#include <vector>

#include "tcd/moduli.hpp"

namespace tcd {

struct Dilation {
  Index r = 0;   // dilation dimension, at most (d+1) n
  Matrix u;      // r x r unitary
  Matrix v;      // r x n isometry
  std::vector<double> residuals;  // per-k ||V* U^k V - T_k||
  double unitarity_defect = 0.0;
  double isometry_defect = 0.0;
  double polar_correction = 0.0;  // distance from the raw shift to its unitary polar factor

  double max_residual() const {
    double worst = 0.0;
    for (double r_k : residuals) worst = std::max(worst, r_k);
    return worst;
  }
};

struct AtomicDecomposition {
  Index d = 0;
  std::vector<std::pair<Complex, Matrix>> atoms;  // (lambda_j on S^1, PSD Q_j)
  double partition_residual = 0.0;                // ||sum Q_j - I||
  std::vector<double> moment_residuals;           // per-k ||sum lambda_j^k Q_j - T_k||

  Index ell() const { return static_cast<Index>(atoms.size()); }
  Index n() const { return atoms.empty() ? 0 : atoms.front().second.rows(); }

  double max_moment_residual() const {
    double worst = 0.0;
    for (double r_k : moment_residuals) worst = std::max(worst, r_k);
    return worst;
  }
};

namespace detail {

struct RangeSplit {
  Matrix range;       // orthonormal basis of the column space
  Matrix complement;  // orthonormal basis of its orthogonal complement
  Matrix pinv_basis;  // V_keep * diag(1/sigma): maps range basis back through the pseudo-inverse
};

inline RangeSplit split_range(const Matrix& m, double sigma_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= sigma_cutoff) ++rank;
  RangeSplit split;
  split.range = svd.matrixU().leftCols(rank);
  split.complement = svd.matrixU().rightCols(m.rows() - rank);
  Matrix scaled = svd.matrixV().leftCols(rank);
  for (Index i = 0; i < rank; ++i) scaled.col(i) /= sv(i);
  split.pinv_basis = scaled;
  return split;
}

inline Matrix nearest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

// Construct a unitary power dilation: factor the unit-diagonal block
// Toeplitz form as F* F, slice F into column blocks F_0..F_d, extend the
// forward shift F_j -> F_{j+1} (well defined because leading and trailing
// Gram blocks agree) to a unitary, and compress its adjoint by V = F_0.
inline Dilation dilate(const MatrixTuple& t, const Tolerances& tol = {}) {
  t.validate();
  tol.validate();
  const Index d = t.d(), n = t.n();
  const Matrix m = assemble_block(t, 1.0).matrix;
  const HermitianEigen eig = hermitian_eig(m, tol);
  const double scale = std::max(1.0, eig.spectral_norm());
  if (eig.min() < -tol.psd_tol * scale)
    throw Error(ErrorCode::NotContractive,
                "block form eigenvalue " + std::to_string(eig.min()) +
                    " below PSD slack; tuple is not Toeplitz-contractive");

  // floor boundary eigenvalues, then keep lambda >= rank_tol * lambda_max
  const double lambda_max = std::max(0.0, eig.max());
  const double cutoff = tol.rank_tol * lambda_max;
  std::vector<Index> kept;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double floored = std::max(0.0, eig.eigenvalues(i));
    if (floored >= cutoff && floored > 0.0) kept.push_back(i);
  }
  const Index r = static_cast<Index>(kept.size());
  Matrix f(r, (d + 1) * n);
  for (Index row = 0; row < r; ++row)
    f.row(row) = std::sqrt(eig.eigenvalues(kept[static_cast<std::size_t>(row)])) *
                 eig.eigenvectors.col(kept[static_cast<std::size_t>(row)]).adjoint();

  const Matrix head = f.leftCols(d * n);    // [F_0 .. F_{d-1}]
  const Matrix tail = f.rightCols(d * n);   // [F_1 .. F_d]

  // Gram identity guard: both Grams equal the same Toeplitz sub-block
  const double gram_gap = operator_norm(head.adjoint() * head - tail.adjoint() * tail);
  if (gram_gap > 100.0 * tol.eig_tol * std::max(1.0, operator_norm(m)))
    throw Error(ErrorCode::VerificationFailed,
                "Gram identity violated by " + std::to_string(gram_gap));

  const double sigma_max = std::max(operator_norm(head), operator_norm(tail));
  const double sigma_cutoff = std::sqrt(tol.rank_tol) * std::max(sigma_max, 1e-300);
  const detail::RangeSplit dom = detail::split_range(head, sigma_cutoff);
  const detail::RangeSplit img = detail::split_range(tail, sigma_cutoff);
  if (dom.complement.cols() != img.complement.cols())
    throw Error(ErrorCode::RankDefect,
                "shift domain and image ranks differ (" +
                    std::to_string(dom.range.cols()) + " vs " +
                    std::to_string(img.range.cols()) + "); block structure broken");

  // partial isometry D v -> R v on range(D), completed on the complements
  const Matrix mapped = tail * dom.pinv_basis;  // images of the range basis
  Matrix shift = mapped * dom.range.adjoint();
  if (dom.complement.cols() > 0) shift += img.complement * dom.complement.adjoint();

  const Matrix unitary_shift = detail::nearest_unitary(shift);
  Dilation dil;
  dil.polar_correction = operator_norm(shift - unitary_shift);
  if (dil.polar_correction > 1e-6)
    throw Error(ErrorCode::VerificationFailed,
                "polar correction " + std::to_string(dil.polar_correction) +
                    " exceeds 1e-6; factorization too inaccurate");

  dil.r = r;
  dil.u = unitary_shift.adjoint();
  dil.v = f.leftCols(n);
  dil.unitarity_defect = operator_norm(dil.u.adjoint() * dil.u - Matrix::Identity(r, r));
  dil.isometry_defect = operator_norm(dil.v.adjoint() * dil.v - Matrix::Identity(n, n));
  Matrix power = Matrix::Identity(r, r);
  dil.residuals.reserve(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    power = power * dil.u;
    dil.residuals.push_back(
        operator_norm(dil.v.adjoint() * power * dil.v - t.matrices[static_cast<std::size_t>(k)]));
  }
  if (dil.max_residual() > tol.residual_tol || dil.unitarity_defect > tol.residual_tol ||
      dil.isometry_defect > tol.residual_tol)
    throw Error(ErrorCode::VerificationFailed,
                "dilation residual " + std::to_string(dil.max_residual()) +
                    " exceeds tolerance");
  return dil;
}

namespace detail {

struct AngularCluster {
  std::vector<Index> members;
};

// Group circle points by angle: walk the sorted angles starting after the
// largest circular gap; a cluster absorbs points within cluster_tol of its
// first member. Boundary gaps below cluster_tol/10 make the assignment
// ambiguous.
inline std::vector<AngularCluster> cluster_circle_points(const std::vector<Complex>& points,
                                                         double cluster_tol) {
  const std::size_t count = points.size();
  std::vector<std::size_t> order(count);
  std::vector<double> angles(count);
  for (std::size_t i = 0; i < count; ++i) {
    angles[i] = std::arg(points[i]);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
  // seam = largest circular gap
  std::size_t seam = 0;
  double largest_gap = -1.0;
  const double two_pi = 2.0 * Rng::pi();
  for (std::size_t i = 0; i < count; ++i) {
    const double a = angles[order[i]];
    const double b = angles[order[(i + 1) % count]] + (i + 1 == count ? two_pi : 0.0);
    if (b - a > largest_gap) {
      largest_gap = b - a;
      seam = (i + 1) % count;
    }
  }
  std::vector<AngularCluster> clusters;
  double cluster_start_angle = 0.0;
  double previous_angle = 0.0;
  for (std::size_t step = 0; step < count; ++step) {
    const std::size_t idx = order[(seam + step) % count];
    double angle = angles[idx];
    if (step > 0 && angle < previous_angle) angle += two_pi;  // unwrap across the seam
    if (step == 0 || angle - cluster_start_angle > cluster_tol) {
      if (step > 0 && angle - previous_angle < cluster_tol / 10.0)
        throw Error(ErrorCode::ClusterAmbiguity,
                    "eigenvalue cluster boundary gap below cluster_tol/10");
      clusters.push_back({});
      cluster_start_angle = angle;
    }
    clusters.back().members.push_back(static_cast<Index>(idx));
    previous_angle = angle;
  }
  return clusters;
}

}  // namespace detail

// Atomic decomposition of a Toeplitz-contractive tuple: dilate, diagonalize
// the unitary, cluster its eigenvalues on the circle, and compress the
// spectral projections back down: Q_j = V* P_j V, T_k = sum lambda_j^k Q_j.
inline AtomicDecomposition decompose(const MatrixTuple& t, double cluster_tol = 1e-7,
                                     const Tolerances& tol = {}) {
  const Dilation dil = dilate(t, tol);
  const Index d = t.d(), n = t.n();
  // the dilation unitary is normal; diagonalize it as a 1-tuple
  const JointSpectrum sd = simultaneous_diagonalize(
      make_tuple({dil.u}), 0x0a70u, kSpectraTol, std::max(1e-9, 10.0 * dil.unitarity_defect));
  std::vector<Complex> eigenvalues(static_cast<std::size_t>(dil.r));
  for (Index i = 0; i < dil.r; ++i) eigenvalues[static_cast<std::size_t>(i)] = sd.points[static_cast<std::size_t>(i)](0);

  const auto clusters = detail::cluster_circle_points(eigenvalues, cluster_tol);
  AtomicDecomposition dec;
  dec.d = d;
  for (const auto& cluster : clusters) {
    Complex mean(0.0, 0.0);
    Matrix projector = Matrix::Zero(dil.r, dil.r);
    for (Index idx : cluster.members) {
      mean += eigenvalues[static_cast<std::size_t>(idx)];
      const Vector q = sd.basis.col(idx);
      projector += q * q.adjoint();
    }
    const double mod = std::abs(mean);
    if (mod < 1e-6)
      throw Error(ErrorCode::ClusterAmbiguity, "cluster mean collapsed to zero");
    dec.atoms.emplace_back(mean / mod, dil.v.adjoint() * projector * dil.v);
  }

  // verify all structural invariants before returning
  Matrix partition = Matrix::Zero(n, n);
  for (const auto& [lambda, q] : dec.atoms) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-10)
      throw Error(ErrorCode::VerificationFailed, "atom off the unit circle");
    if (!is_psd(q, tol))
      throw Error(ErrorCode::VerificationFailed, "atom weight is not PSD");
    partition += q;
  }
  dec.partition_residual = operator_norm(partition - Matrix::Identity(n, n));
  for (Index k = 1; k <= d; ++k) {
    Matrix moment = Matrix::Zero(n, n);
    for (const auto& [lambda, q] : dec.atoms) moment += std::pow(lambda, k) * q;
    dec.moment_residuals.push_back(
        operator_norm(moment - t.matrices[static_cast<std::size_t>(k - 1)]));
  }
  if (dec.partition_residual > tol.residual_tol ||
      dec.max_moment_residual() > tol.residual_tol)
    throw Error(ErrorCode::VerificationFailed,
                "decomposition residual exceeds tolerance (partition " +
                    std::to_string(dec.partition_residual) + ", moments " +
                    std::to_string(dec.max_moment_residual()) + ")");
  if (dec.ell() > (d + 1) * n)
    throw Error(ErrorCode::VerificationFailed, "atom count exceeds (d+1) n");
  return dec;
}

// Compressions of Haar-unitary powers: always Toeplitz-contractive.
inline MatrixTuple random_contractive_tuple(Index d, Index n, Index big_n,
                                            std::uint64_t seed,
                                            const Tolerances& tol = {}) {
  if (d < 1 || n < 1) throw Error(ErrorCode::InvalidInput, "need d >= 1 and n >= 1");
  if (big_n < n)
    throw Error(ErrorCode::InvalidInput, "ambient dimension must be at least n");
  Rng rng(mix_seed(seed, 0xc0521));
  const Matrix u = rng.haar_unitary(big_n);
  const Matrix v = rng.random_isometry(big_n, n);
  std::vector<Matrix> ms;
  ms.reserve(static_cast<std::size_t>(d));
  Matrix power = Matrix::Identity(big_n, big_n);
  for (Index k = 0; k < d; ++k) {
    power = power * u;
    ms.push_back(v.adjoint() * power * v);
  }
  MatrixTuple t = make_tuple(std::move(ms));
  if (!is_toeplitz_contractive(t, tol))
    throw Error(ErrorCode::VerificationFailed,
                "generated tuple failed the contractivity check");
  return t;
}

// Reassemble the tuple T_k = sum_j lambda_j^k Q_j from a decomposition.
inline MatrixTuple tuple_from_decomposition(const AtomicDecomposition& dec,
                                            const Tolerances& tol = {}) {
  if (dec.atoms.empty() || dec.d < 1)
    throw Error(ErrorCode::InvalidDecomposition, "decomposition has no atoms or d < 1");
  const Index n = dec.n();
  Matrix partition = Matrix::Zero(n, n);
  for (const auto& [lambda, q] : dec.atoms) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-10)
      throw Error(ErrorCode::InvalidDecomposition, "atom point off the unit circle");
    if (q.rows() != n || q.cols() != n)
      throw Error(ErrorCode::InvalidDecomposition, "atom weights must share one dimension");
    if (!is_psd(q, tol))
      throw Error(ErrorCode::InvalidDecomposition, "atom weight is not PSD");
    partition += q;
  }
  if (operator_norm(partition - Matrix::Identity(n, n)) > tol.residual_tol)
    throw Error(ErrorCode::InvalidDecomposition, "atom weights do not sum to the identity");
  std::vector<Matrix> ms;
  ms.reserve(static_cast<std::size_t>(dec.d));
  for (Index k = 1; k <= dec.d; ++k) {
    Matrix moment = Matrix::Zero(n, n);
    for (const auto& [lambda, q] : dec.atoms) moment += std::pow(lambda, k) * q;
    ms.push_back(std::move(moment));
  }
  MatrixTuple t = make_tuple(std::move(ms));
  if (!is_toeplitz_contractive(t, tol))
    throw Error(ErrorCode::VerificationFailed,
                "reassembled tuple failed the contractivity check");
  return t;
}

}  // namespace tcd

#endif  // TCD_DILATION_HPP
