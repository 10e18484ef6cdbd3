#ifndef TCD_MODULI_HPP
#define TCD_MODULI_HPP

// The four distance measures on matrix tuples derived from block Toeplitz
// positivity: the Toeplitz modulus rho (closed form via the smallest
// eigenvalue of the zero-diagonal block form), the Toeplitz numerical
// radius omega (nonconvex sphere maximization, reported as a certified
// lower bound), the Toeplitz and Gelfand spectral radii over joint spectra
// of commuting tuples, the symmetrized metric, and the tensor-norm
// inequality checker for contractive tuples.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tcd/forms.hpp"
#include "tcd/parallel.hpp"
#include "tcd/random.hpp"
#include "tcd/spectra.hpp"

namespace tcd {

enum class ModulusKind { Rho, Omega, SpectralRadius, GelfandRadius };

struct Witness {
  enum class Kind { BlockEigenvector, UnitVector, Coefficients, SpectrumPoint };
  Kind kind = Kind::BlockEigenvector;
  Vector vector;
  double achieved = 0.0;  // certified lower bound attained by this witness
};

struct ModulusDiagnostics {
  int restarts = 0;
  int best_start = -1;
  int iterations = 0;
  bool converged = true;        // best start reached its stall criterion
  int unconverged_starts = 0;   // starts that ran into the iteration cap
  std::vector<double> ascent_trace;  // objective after each half-step, best start
  double spectrum_match = 0.0;  // Gelfand: distance between the two spectra
};

struct ModulusReport {
  ModulusKind kind = ModulusKind::Rho;
  double value = 0.0;
  Witness witness;
  std::string method;  // "closed-form" | "multistart" | "spectrum-max"
  ModulusDiagnostics diagnostics;
};

// Toeplitz modulus: inf{alpha : alpha-diagonal block form is PSD}. The
// alpha-form is alpha*I plus the zero-diagonal form, so the infimum is
// -lambda_min of the latter (clamped at zero), and the bottom eigenvector
// certifies it.
inline ModulusReport rho(const MatrixTuple& t, const Tolerances& tol = {}) {
  const BlockToeplitzForm form = assemble_block(t, 0.0);
  const HermitianEigen eig = hermitian_eig(form.matrix, tol);
  ModulusReport report;
  report.kind = ModulusKind::Rho;
  report.value = std::max(0.0, -eig.min());
  report.witness = {Witness::Kind::BlockEigenvector, eig.eigenvectors.col(0), report.value};
  report.method = "closed-form";
  return report;
}

inline bool is_toeplitz_contractive(const MatrixTuple& t, const Tolerances& tol = {}) {
  return is_psd(assemble_block(t, 1.0).matrix, tol);
}

inline bool is_row_contractive(const MatrixTuple& t, const Tolerances& tol = {}) {
  t.validate();
  const Index n = t.n();
  Matrix defect = Matrix::Identity(n, n);
  for (const Matrix& m : t.matrices) defect -= m * m.adjoint();
  return is_psd(defect, tol);
}

// Moment vector of a unit vector xi: m_k = <T_k xi, xi>.
inline Vector moment_vector(const MatrixTuple& t, const Vector& xi) {
  Vector m(t.d());
  for (Index k = 0; k < t.d(); ++k)
    m(k) = (xi.adjoint() * (t.matrices[static_cast<std::size_t>(k)] * xi))(0, 0);
  return m;
}

struct OmegaOptions {
  int starts = 64;
  std::uint64_t seed = 0;
  int max_iters = 500;
  double stall_rel = 1e-12;
  int stall_window = 10;
};

namespace detail {

// Autocorrelation coefficients a_k = sum_j conj(c_{j+k}) c_j of the
// Toeplitz quadratic form; the xi-step Hermitian matrix is
// H(c) = sum_k (a_k T_k + conj(a_k) T_k*).
inline Vector toeplitz_coefficients(const Vector& c, Index d) {
  Vector a(d);
  for (Index k = 1; k <= d; ++k) {
    Complex sum(0.0, 0.0);
    for (Index j = 0; j + k < c.size(); ++j) sum += std::conj(c(j + k)) * c(j);
    a(k - 1) = sum;
  }
  return a;
}

struct OmegaStartResult {
  double value = 0.0;
  Vector xi;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

inline OmegaStartResult omega_single_start(const MatrixTuple& t, Rng rng,
                                           const OmegaOptions& opts,
                                           const Tolerances& tol) {
  const Index d = t.d(), n = t.n();
  OmegaStartResult result;
  Vector xi = rng.unit_vector(n);
  double best_inner = -1.0;
  int stall = 0;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    // exact c-step: bottom eigenvector of the zero-diagonal scalar form
    const Vector m = moment_vector(t, xi);
    const HermitianEigen scalar_eig = hermitian_eig(assemble_scalar(m, 0.0).matrix, tol);
    const Vector c = scalar_eig.eigenvectors.col(0);
    const double f_after_c = std::max(0.0, -scalar_eig.min());
    result.trace.push_back(f_after_c);
    // exact xi-step: bottom eigenvector of H(c)
    const Vector a = toeplitz_coefficients(c, d);
    Matrix h = Matrix::Zero(n, n);
    for (Index k = 0; k < d; ++k) {
      const Matrix& tk = t.matrices[static_cast<std::size_t>(k)];
      h += a(k) * tk + std::conj(a(k)) * tk.adjoint();
    }
    const HermitianEigen h_eig = hermitian_eig(h, tol);
    xi = h_eig.eigenvectors.col(0);
    const double f_after_xi = -h_eig.min();
    result.trace.push_back(f_after_xi);

    if (f_after_xi - best_inner < opts.stall_rel * std::max(1.0, std::abs(f_after_xi)))
      ++stall;
    else
      stall = 0;
    best_inner = std::max(best_inner, f_after_xi);
    if (stall >= opts.stall_window) {
      result.converged = true;
      break;
    }
  }
  result.iterations = iter;
  // certify: the reported value is nu of the witness moments
  result.value = nu(moment_vector(t, xi), tol);
  result.xi = xi;
  return result;
}

}  // namespace detail

// Toeplitz numerical radius: sup over unit xi of nu(<T_k xi, xi>),
// maximized by alternating exact coordinate ascent over (c, xi) with
// multistart. The returned value is a certified lower bound: the witness xi
// reproduces it through nu alone.
inline ModulusReport omega(const MatrixTuple& t, const OmegaOptions& opts = {},
                           const Tolerances& tol = {}) {
  t.validate();
  if (opts.starts < 1)
    throw Error(ErrorCode::InvalidInput, "omega needs at least one start");
  std::vector<detail::OmegaStartResult> results(static_cast<std::size_t>(opts.starts));
  const Rng base(opts.seed);
  parallel_for(static_cast<std::size_t>(opts.starts), [&](std::size_t s) {
    results[s] = detail::omega_single_start(t, base.stream(s), opts, tol);
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s)
    if (results[s].value > results[best].value) best = s;  // ties: first found

  ModulusReport report;
  report.kind = ModulusKind::Omega;
  report.value = results[best].value;
  report.witness = {Witness::Kind::UnitVector, results[best].xi, results[best].value};
  report.method = "multistart";
  report.diagnostics.restarts = opts.starts;
  report.diagnostics.best_start = static_cast<int>(best);
  report.diagnostics.iterations = results[best].iterations;
  report.diagnostics.converged = results[best].converged;
  for (const auto& r : results)
    if (!r.converged) ++report.diagnostics.unconverged_starts;
  report.diagnostics.ascent_trace = results[best].trace;
  return report;
}

namespace detail {

// Maximize a periodic function on [0, 2pi) by a uniform grid followed by
// golden-section refinement inside the top cells.
template <typename F>
double periodic_max(F&& f, int grid, int refine_cells = 2) {
  if (grid < 8) throw Error(ErrorCode::InvalidInput, "grid must be >= 8");
  const double two_pi = 2.0 * Rng::pi();
  std::vector<double> values(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) values[static_cast<std::size_t>(i)] = f(two_pi * i / grid);
  // top cells by value, skipping immediate neighbours of already-chosen ones
  std::vector<int> order(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)]; });
  std::vector<int> chosen;
  for (int idx : order) {
    bool adjacent = false;
    for (int c : chosen) {
      const int dist = std::abs(((idx - c) % grid + grid) % grid);
      if (std::min(dist, grid - dist) <= 1) adjacent = true;
    }
    if (!adjacent) chosen.push_back(idx);
    if (static_cast<int>(chosen.size()) >= refine_cells) break;
  }
  double best = values[static_cast<std::size_t>(order[0])];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int cell : chosen) {
    double lo = two_pi * (cell - 1) / grid;
    double hi = two_pi * (cell + 1) / grid;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90 && hi - lo > 1e-13; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = f(x1);
      }
      best = std::max(best, std::max(f1, f2));
    }
  }
  return best;
}

}  // namespace detail

// Classical numerical radius by circle sweep: max over theta of
// lambda_max(Herm(e^{i theta} T)). Oracle for the d = 1 identity.
inline double classical_numerical_radius(const Matrix& t, int grid = 1024) {
  require_finite(t, "matrix");
  if (t.rows() != t.cols())
    throw Error(ErrorCode::NotSquare, "numerical radius needs a square matrix");
  auto value_at = [&](double theta) {
    const Complex z(std::cos(theta), std::sin(theta));
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(z * t));
    return es.eigenvalues()(t.rows() - 1);
  };
  return std::max(0.0, detail::periodic_max(value_at, grid));
}

// Toeplitz spectral radius of a commuting tuple: max of nu over the joint
// spectrum obtained by simultaneous triangularization.
inline ModulusReport spectral_radius(const MatrixTuple& t, std::uint64_t seed = 0,
                                     const Tolerances& tol = {}) {
  const TupleClass cls = classify(t, tol.psd_tol);
  if (!cls.commuting)
    throw Error(ErrorCode::NotCommuting,
                "spectral radius needs a commuting tuple (commutator residual " +
                    std::to_string(cls.commutator_residual) + ")");
  const JointSpectrum js = joint_spectrum(t, seed, kSpectraTol, tol.psd_tol);
  ModulusReport report;
  report.kind = ModulusKind::SpectralRadius;
  report.method = "spectrum-max";
  report.value = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < js.points.size(); ++i) {
    const double v = nu(js.points[i], tol);
    if (v > report.value) {
      report.value = v;
      arg = i;
    }
  }
  report.witness = {Witness::Kind::SpectrumPoint, js.points[arg], report.value};
  return report;
}

// Gelfand-Toeplitz spectral radius of a normal tuple, over the joint
// eigenvalues from simultaneous diagonalization. For normal tuples the two
// spectra must coincide; the match distance is recorded and enforced.
inline ModulusReport gelfand_spectral_radius(const MatrixTuple& t, std::uint64_t seed = 0,
                                             const Tolerances& tol = {}) {
  const TupleClass cls = classify(t, tol.psd_tol);
  if (!cls.normal)
    throw Error(ErrorCode::NotNormalTuple,
                "Gelfand radius needs a commuting normal tuple");
  const JointSpectrum sd = simultaneous_diagonalize(t, seed, kSpectraTol, tol.psd_tol);
  const JointSpectrum js = joint_spectrum(t, seed, kSpectraTol, tol.psd_tol);
  const double match = match_point_multisets(sd.points, js.points);
  const double scale = std::max(1.0, detail::tuple_scale(t));
  if (!(match <= 1e-7 * scale))
    throw Error(ErrorCode::VerificationFailed,
                "Gelfand and triangular spectra disagree by " + std::to_string(match));
  ModulusReport report;
  report.kind = ModulusKind::GelfandRadius;
  report.method = "spectrum-max";
  report.value = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sd.points.size(); ++i) {
    const double v = nu(sd.points[i], tol);
    if (v > report.value) {
      report.value = v;
      arg = i;
    }
  }
  report.witness = {Witness::Kind::SpectrumPoint, sd.points[arg], report.value};
  report.diagnostics.spectrum_match = match;
  return report;
}

// Symmetrized distance: mean of the two one-sided moduli of differences.
struct MetricReport {
  double forward = 0.0;   // rho(S - T)
  double backward = 0.0;  // rho(T - S)
  double value = 0.0;
};

inline MetricReport metric_drho(const MatrixTuple& s, const MatrixTuple& t,
                                const Tolerances& tol = {}) {
  const MatrixTuple diff = subtract_tuples(s, t);
  const MatrixTuple neg = scale_tuple(diff, Complex(-1.0, 0.0));
  MetricReport report;
  report.forward = rho(diff, tol).value;
  report.backward = rho(neg, tol).value;
  report.value = 0.5 * (report.forward + report.backward);
  return report;
}

// Tensor-norm inequality check: for a Toeplitz-contractive tuple,
//   || I (x) A_0 + sum_k T_k (x) A_k ||  <=  max_{|z|=1} || A_0 + sum_k z^k A_k ||
// for random coefficient matrices. slack = RHS - LHS must stay above a
// small negative tolerance absorbing the circle-grid refinement error.
struct NormCheckOptions {
  int trials = 20;
  int m_max = 3;
  int grid = 2048;
  std::uint64_t seed = 0;
};

struct NormCheckReport {
  int trials = 0;
  int violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
};

inline NormCheckReport check_norm_inequality(const MatrixTuple& t,
                                             const NormCheckOptions& opts = {},
                                             const Tolerances& tol = {}) {
  t.validate();
  if (!is_toeplitz_contractive(t, tol))
    throw Error(ErrorCode::NotContractive,
                "norm inequality check requires a Toeplitz-contractive tuple");
  if (opts.trials < 1 || opts.m_max < 1)
    throw Error(ErrorCode::InvalidInput, "trials and m_max must be >= 1");
  const Index d = t.d(), n = t.n();
  const Rng base(opts.seed);
  std::vector<double> slacks(static_cast<std::size_t>(opts.trials));
  std::vector<double> scales(static_cast<std::size_t>(opts.trials));
  parallel_for(static_cast<std::size_t>(opts.trials), [&](std::size_t trial) {
    Rng rng = base.stream(trial);
    const Index m = 1 + static_cast<Index>(rng.uniform() * opts.m_max) % opts.m_max;
    std::vector<Matrix> coeffs;
    coeffs.reserve(static_cast<std::size_t>(d) + 1);
    for (Index k = 0; k <= d; ++k) coeffs.push_back(rng.gaussian_matrix(m, m));
    Matrix lhs = kronecker(Matrix::Identity(n, n), coeffs[0]);
    for (Index k = 1; k <= d; ++k)
      lhs += kronecker(t.matrices[static_cast<std::size_t>(k - 1)], coeffs[static_cast<std::size_t>(k)]);
    const double lhs_norm = operator_norm(lhs);
    auto rhs_at = [&](double theta) {
      Matrix sum = coeffs[0];
      for (Index k = 1; k <= d; ++k) {
        const Complex zk(std::cos(k * theta), std::sin(k * theta));
        sum += zk * coeffs[static_cast<std::size_t>(k)];
      }
      return operator_norm(sum);
    };
    const double rhs_norm = detail::periodic_max(rhs_at, opts.grid);
    double coeff_scale = 0.0;
    for (const Matrix& a : coeffs) coeff_scale += operator_norm(a);
    slacks[trial] = rhs_norm - lhs_norm;
    scales[trial] = std::max(1.0, coeff_scale);
  });
  NormCheckReport report;
  report.trials = opts.trials;
  for (std::size_t i = 0; i < slacks.size(); ++i) {
    report.worst_slack = std::min(report.worst_slack, slacks[i]);
    if (slacks[i] < -10.0 * tol.psd_tol * scales[i]) ++report.violations;
  }
  return report;
}

}  // namespace tcd

#endif  // TCD_MODULI_HPP
