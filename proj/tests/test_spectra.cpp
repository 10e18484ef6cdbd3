#include <doctest.h>

#include "test_support.hpp"

using namespace tcd;
using namespace tcdtest;

TEST_CASE("classify: fixture tuples") {
  const TupleClass sig = classify(sigma_pair());
  CHECK(sig.commuting);
  CHECK(sig.normal);
  CHECK(sig.unitary);
  CHECK(sig.power_unitary);  // sigma^2 = 1

  const TupleClass proj = classify(projection_pair());
  CHECK(proj.commuting);
  CHECK(proj.normal);
  CHECK_FALSE(proj.unitary);
  CHECK_FALSE(proj.power_unitary);

  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  const TupleClass jordan = classify(make_tuple({nil, Matrix::Zero(2, 2)}));
  CHECK(jordan.commuting);
  CHECK_FALSE(jordan.normal);
}

TEST_CASE("classify: implication chain holds on random tuples") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t =
        trial % 2 == 0 ? random_tuple(rng, d, n) : random_commuting_normal(rng, d, n);
    const TupleClass c = classify(t);
    if (c.power_unitary) CHECK(c.unitary);
    if (c.unitary) CHECK(c.normal);
    if (c.normal) CHECK(c.commuting);
  }
}

TEST_CASE("joint_spectrum: diagonal and fixture tuples") {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << Complex(1, 0), Complex(2, 0);
  b.diagonal() << Complex(3, 0), Complex(4, 0);
  const JointSpectrum js = joint_spectrum(make_tuple({a, b}));
  REQUIRE(js.points.size() == 2);
  CHECK(js.residual <= 1e-12);
  Vector p13(2), p24(2);
  p13 << Complex(1, 0), Complex(3, 0);
  p24 << Complex(2, 0), Complex(4, 0);
  CHECK(match_point_multisets(js.points, {p13, p24}) < 1e-9);

  const JointSpectrum sig = joint_spectrum(sigma_pair());
  Vector plus(2), minus(2);
  plus << Complex(1, 0), Complex(1, 0);
  minus << Complex(-1, 0), Complex(1, 0);
  CHECK(match_point_multisets(sig.points, {plus, minus}) < 1e-9);
}

TEST_CASE("joint_spectrum: single normal matrix reduces to its eigenvalues") {
  Rng rng(43);
  const Matrix u = rng.haar_unitary(4);
  Matrix diag = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) diag(i, i) = rng.complex_gaussian();
  const Matrix normal = u * diag * u.adjoint();
  const JointSpectrum js = joint_spectrum(make_tuple({normal}));
  std::vector<Vector> expected;
  for (Index i = 0; i < 4; ++i) {
    Vector p(1);
    p << diag(i, i);
    expected.push_back(p);
  }
  CHECK(match_point_multisets(js.points, expected) < 1e-8);
}

TEST_CASE("joint_spectrum: rejects noncommuting input") {
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  try {
    joint_spectrum(make_tuple({nil, pauli_sigma()}));
    FAIL("expected NotCommuting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCommuting);
  }
}

TEST_CASE("joint_spectrum: triangularizes commuting non-normal tuples") {
  // T and p(T) commute for any polynomial; Jordan blocks make them non-normal
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.uniform() * 3);
    Matrix t = rng.gaussian_matrix(n, n);
    t(0, 0) += 3.0;  // spread the spectrum a little
    const Matrix t2 = t * t;
    const JointSpectrum js = joint_spectrum(make_tuple({t, t2}));
    CHECK(js.residual <= kSpectraTol * std::max(1.0, t.norm() * t.norm()));
    // each point must satisfy the algebraic relation lambda_2 = lambda_1^2
    for (const Vector& p : js.points)
      CHECK(std::abs(p(1) - p(0) * p(0)) < 1e-6 * std::max(1.0, std::abs(p(1))));
  }
}

TEST_CASE("simultaneous_diagonalize: fixtures and planted instances") {
  const JointSpectrum sig = simultaneous_diagonalize(sigma_pair());
  CHECK(sig.residual <= 1e-10);
  Vector plus(2), minus(2);
  plus << Complex(1, 0), Complex(1, 0);
  minus << Complex(-1, 0), Complex(1, 0);
  CHECK(match_point_multisets(sig.points, {plus, minus}) < 1e-9);

  Rng rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 5);
    const Matrix u = rng.haar_unitary(n);
    std::vector<Matrix> diags;
    std::vector<Matrix> conjugated;
    for (Index k = 0; k < d; ++k) {
      Matrix diag = Matrix::Zero(n, n);
      for (Index i = 0; i < n; ++i) diag(i, i) = rng.complex_gaussian();
      diags.push_back(diag);
      conjugated.push_back(u * diag * u.adjoint());
    }
    const JointSpectrum js = simultaneous_diagonalize(make_tuple(conjugated));
    CHECK(js.residual <= 1e-9);
    std::vector<Vector> planted;
    for (Index i = 0; i < n; ++i) {
      Vector p(d);
      for (Index k = 0; k < d; ++k) p(k) = diags[static_cast<std::size_t>(k)](i, i);
      planted.push_back(p);
    }
    CHECK(match_point_multisets(js.points, planted) < 1e-8);
  }
}

TEST_CASE("simultaneous_diagonalize: fully degenerate tuple") {
  const Matrix id = Matrix::Identity(2, 2);
  const JointSpectrum js = simultaneous_diagonalize(make_tuple({id, id}));
  CHECK(js.residual <= 1e-14);
  for (const Vector& p : js.points) {
    CHECK(std::abs(p(0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(p(1) - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("simultaneous_diagonalize: repeated eigenvalues in one entry") {
  // first entry is degenerate, second splits the eigenspace; the recursion
  // must resolve the joint eigenbasis
  Rng rng(59);
  const Matrix u = rng.haar_unitary(4);
  Matrix d1 = Matrix::Zero(4, 4), d2 = Matrix::Zero(4, 4);
  d1.diagonal() << Complex(2, 0), Complex(2, 0), Complex(2, 0), Complex(5, 0);
  d2.diagonal() << Complex(1, 0), Complex(7, 0), Complex(3, 0), Complex(3, 0);
  const MatrixTuple t =
      make_tuple({u * d1 * u.adjoint(), u * d2 * u.adjoint()});
  const JointSpectrum js = simultaneous_diagonalize(t);
  CHECK(js.residual <= 1e-9);
  std::vector<Vector> planted;
  for (Index i = 0; i < 4; ++i) {
    Vector p(2);
    p << d1(i, i), d2(i, i);
    planted.push_back(p);
  }
  CHECK(match_point_multisets(js.points, planted) < 1e-8);
}

TEST_CASE("simultaneous_diagonalize: rejects non-normal tuples") {
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  try {
    simultaneous_diagonalize(make_tuple({nil}));
    FAIL("expected NotNormalTuple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalTuple);
  }
}

TEST_CASE("property: the two spectra agree on random normal tuples") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_commuting_normal(rng, d, n);
    const JointSpectrum tri = joint_spectrum(t, trial);
    const JointSpectrum dia = simultaneous_diagonalize(t, trial);
    CHECK(match_point_multisets(tri.points, dia.points) < 1e-7);
  }
}

TEST_CASE("property: power-unitary tuples have power-circle spectra") {
  Rng rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = power_tuple(rng.haar_unitary(n), d);
    const JointSpectrum js = joint_spectrum(t, trial);
    for (const Vector& p : js.points) {
      CHECK(std::abs(std::abs(p(0)) - 1.0) < 1e-8);
      for (Index k = 1; k < d; ++k)
        CHECK(std::abs(p(k) - std::pow(p(0), k + 1)) < 1e-7);
    }
  }
}

TEST_CASE("property: joint spectrum is invariant under unitary conjugation") {
  Rng rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_commuting_normal(rng, d, n);
    const Matrix q = rng.haar_unitary(n);
    const MatrixTuple conj = compress_tuple(t, q);
    CHECK(match_point_multisets(joint_spectrum(t, trial).points,
                                joint_spectrum(conj, trial).points) < 1e-7);
  }
}
