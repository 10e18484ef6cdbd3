#ifndef TCD_RANDOM_HPP
#define TCD_RANDOM_HPP

// Seeded random generation for matrices, tuples, and sphere/circle points.
// Gaussian sampling is done with an explicit Box-Muller transform on the
// raw 64-bit stream, so identical seeds give identical output on every
// platform (std::normal_distribution is implementation-defined).

#include <cmath>
#include <cstdint>
#include <random>

#include "tcd/linalg.hpp"

namespace tcd {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step over (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), base_(seed) {}

  // Independent deterministic substream, e.g. one per restart index.
  Rng stream(std::uint64_t index) const { return Rng(mix_seed(base_, index)); }

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * pi() * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_gaussian();
    return v;
  }

  Vector unit_vector(Index n) {
    Vector v = gaussian_vector(n);
    double norm = v.norm();
    while (norm < 1e-12) {
      v = gaussian_vector(n);
      norm = v.norm();
    }
    return v / norm;
  }

  Complex unit_circle_point() {
    const double theta = 2.0 * pi() * uniform();
    return Complex(std::cos(theta), std::sin(theta));
  }

  // Haar-distributed unitary: QR of a Gaussian matrix with the usual
  // diagonal phase correction.
  Matrix haar_unitary(Index n) {
    const Matrix g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
      const Complex rii = r(i, i);
      if (std::abs(rii) > 0.0) q.col(i) *= rii / std::abs(rii);
    }
    return q;
  }

  // Isometry C^cols -> C^rows (rows >= cols), orthonormal columns.
  Matrix random_isometry(Index rows, Index cols) {
    if (rows < cols)
      throw Error(ErrorCode::InvalidInput, "isometry needs rows >= cols");
    const Matrix g = gaussian_matrix(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(rows, cols);
  }

  static constexpr double pi() { return 3.14159265358979323846; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t base_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tcd

#endif  // TCD_RANDOM_HPP
