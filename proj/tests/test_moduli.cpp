#include <doctest.h>

#include "test_support.hpp"

using namespace tcd;
using namespace tcdtest;

TEST_CASE("rho: fixture values") {
  CHECK(rho(sigma_pair()).value == doctest::Approx(1.0).epsilon(1e-11));

  const MatrixTuple neg = scale_tuple(sigma_pair(), Complex(-1.0, 0.0));
  // block form splits over the sigma eigenspaces into two scalar Toeplitz
  // problems with characteristic polynomials x^3 - 3x -+ 2; both have
  // bottom eigenvalue -2
  CHECK(rho(neg).value == doctest::Approx(2.0).epsilon(1e-11));

  Matrix nil(2, 2);
  nil << 0, 2, 0, 0;
  CHECK(rho(make_tuple({nil})).value == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("rho: closed form agrees with the bisection feasibility oracle") {
  Rng rng(73);
  for (int trial = 0; trial < 25; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 4);
    const Index n = 1 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_tuple(rng, d, n);
    const double closed = rho(t).value;
    const double oracle = rho_bisection_oracle(t);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-7));
  }
  CHECK(rho(sigma_pair()).value ==
        doctest::Approx(rho_bisection_oracle(sigma_pair())).epsilon(1e-8));
}

TEST_CASE("contractivity predicates on the fixture pairs") {
  Rng rng(79);
  const MatrixTuple powers = power_tuple(rng.haar_unitary(3), 2);
  CHECK(is_toeplitz_contractive(powers));
  CHECK_FALSE(is_row_contractive(powers));  // UU* + U^2 U^2* = 2

  CHECK_FALSE(is_toeplitz_contractive(projection_pair()));
  CHECK(is_row_contractive(projection_pair()));

  CHECK(is_toeplitz_contractive(zero_tuple(2, 2)));
  CHECK(is_row_contractive(zero_tuple(2, 2)));
}

TEST_CASE("omega: fixture values") {
  Matrix nil(2, 2);
  nil << 0, 2, 0, 0;
  const ModulusReport nil_report = omega(make_tuple({nil}));
  CHECK(nil_report.value == doctest::Approx(1.0).epsilon(1e-8));

  // commuting normal pair: omega = rho = 1
  CHECK(omega(sigma_pair()).value == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(omega(zero_tuple(2, 3)).value == doctest::Approx(0.0));
}

TEST_CASE("omega: ascent trace is nondecreasing and the witness certifies") {
  Rng rng(83);
  for (int trial = 0; trial < 15; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_tuple(rng, d, n);
    OmegaOptions opts;
    opts.starts = 8;
    opts.seed = static_cast<std::uint64_t>(trial);
    const ModulusReport report = omega(t, opts);
    const auto& trace = report.diagnostics.ascent_trace;
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] >= trace[i - 1] - 1e-10 * std::max(1.0, trace[i]));
    // witness: nu of its moment vector reproduces the reported value
    const Vector m = moment_vector(t, report.witness.vector);
    CHECK(nu(m) == doctest::Approx(report.value).epsilon(1e-9));
    CHECK(report.witness.vector.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("classical_numerical_radius: oracle classes") {
  Matrix herm(3, 3);
  herm << 2, 1, 0, 1, -3, 1, 0, 1, 1;
  const HermitianEigen eig = hermitian_eig(herm);
  CHECK(classical_numerical_radius(herm) ==
        doctest::Approx(eig.spectral_norm()).epsilon(1e-9));

  Matrix nil(2, 2);
  nil << 0, 2, 0, 0;
  CHECK(classical_numerical_radius(nil) == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(89);
  CHECK(classical_numerical_radius(rng.haar_unitary(4)) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("spectral_radius and gelfand_spectral_radius: fixtures") {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << Complex(1, 0), Complex(2, 0);
  b.diagonal() << Complex(3, 0), Complex(4, 0);
  const MatrixTuple diag_pair = make_tuple({a, b});
  Vector p13(2), p24(2);
  p13 << Complex(1, 0), Complex(3, 0);
  p24 << Complex(2, 0), Complex(4, 0);
  const double expected = std::max(nu(p13), nu(p24));
  CHECK(spectral_radius(diag_pair).value == doctest::Approx(expected).epsilon(1e-10));
  CHECK(gelfand_spectral_radius(diag_pair).value == doctest::Approx(expected).epsilon(1e-10));

  CHECK(spectral_radius(sigma_pair()).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gelfand_spectral_radius(sigma_pair()).value == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(spectral_radius(zero_tuple(2, 2)).value == doctest::Approx(0.0));
  CHECK(gelfand_spectral_radius(zero_tuple(2, 2)).value == doctest::Approx(0.0));

  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  try {
    spectral_radius(make_tuple({nil, pauli_sigma()}));
    FAIL("expected NotCommuting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCommuting);
  }
  try {
    gelfand_spectral_radius(make_tuple({nil}));
    FAIL("expected NotNormalTuple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalTuple);
  }
}

TEST_CASE("metric_drho: fixtures") {
  const MatrixTuple t = sigma_pair();
  CHECK(metric_drho(t, t).value == doctest::Approx(0.0));

  // (rho(sigma, 1) + rho(-sigma, -1)) / 2 = (1 + 2) / 2
  const MetricReport asym = metric_drho(t, zero_tuple(2, 2));
  CHECK(asym.forward == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(asym.backward == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(asym.value == doctest::Approx(1.5).epsilon(1e-10));

  Rng rng(97);
  const Matrix s = rng.gaussian_matrix(3, 3);
  const MetricReport single = metric_drho(make_tuple({s}), zero_tuple(1, 3));
  CHECK(single.value == doctest::Approx(operator_norm(s)).epsilon(1e-9));

  CHECK_THROWS_AS(metric_drho(sigma_pair(), zero_tuple(1, 2)), Error);
}

TEST_CASE("metric_drho: symmetry and triangle inequality") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 1 + static_cast<Index>(rng.uniform() * 3);
    const MatrixTuple a = random_tuple(rng, d, n);
    const MatrixTuple b = random_tuple(rng, d, n);
    const MatrixTuple c = random_tuple(rng, d, n);
    CHECK(metric_drho(a, b).value == doctest::Approx(metric_drho(b, a).value));
    CHECK(metric_drho(a, c).value <=
          metric_drho(a, b).value + metric_drho(b, c).value + 1e-10);
  }
}

TEST_CASE("check_norm_inequality: contractive tuples never violate") {
  Rng rng(103);
  const MatrixTuple powers = power_tuple(rng.haar_unitary(3), 2);
  NormCheckOptions opts;
  opts.trials = 20;
  opts.seed = 5;
  const NormCheckReport report = check_norm_inequality(powers, opts);
  CHECK(report.violations == 0);
  CHECK(report.worst_slack >= -1e-7);

  // zero tuple: LHS collapses to ||A_0|| <= RHS, so the slack never dips
  const NormCheckReport zero_report = check_norm_inequality(zero_tuple(2, 2), opts);
  CHECK(zero_report.violations == 0);
  CHECK(zero_report.worst_slack >= -1e-9);

  // fixed-coefficient identity: A_0 = 0, A_1 = 1, A_2 = 0 at m = 1 gives
  // LHS = ||sigma (x) 1|| = 1 and RHS = max |z| = 1
  Matrix one(1, 1);
  one(0, 0) = 1.0;
  CHECK(operator_norm(kronecker(pauli_sigma(), one)) == doctest::Approx(1.0));

  try {
    check_norm_inequality(projection_pair(), opts);
    FAIL("expected NotContractive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotContractive);
  }
}

TEST_CASE("property: rho is adjoint-invariant") {
  Rng rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixTuple t = random_tuple(rng, 1 + static_cast<Index>(rng.uniform() * 4),
                                       1 + static_cast<Index>(rng.uniform() * 4));
    CHECK(rho(adjoint_tuple(t)).value == doctest::Approx(rho(t).value).epsilon(1e-9));
  }
}

TEST_CASE("property: subtuple monotonicity on arithmetic index progressions") {
  // Monotonicity holds for index sets that embed the subtuple's Toeplitz
  // form as a principal block submatrix of the full one: subsequences
  // (T_s, T_2s, ..., T_qs), which include prefixes and all singletons.
  Rng rng(109);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 1 + static_cast<Index>(rng.uniform() * 3);
    const MatrixTuple t = random_tuple(rng, d, n);
    const double full = rho(t).value;
    const Index step = 1 + static_cast<Index>(rng.uniform() * d);
    const Index max_len = d / step;
    const Index len = 1 + static_cast<Index>(rng.uniform() * max_len);
    std::vector<Matrix> sub;
    for (Index a = 1; a <= len; ++a)
      sub.push_back(t.matrices[static_cast<std::size_t>(a * step - 1)]);
    CHECK(rho(make_tuple(sub)).value <= full + 1e-10);
    for (const Matrix& m : t.matrices) CHECK(operator_norm(m) <= full + 1e-10);
  }
}

TEST_CASE("subtuple monotonicity fails for general index subsequences") {
  // (w_2, w_3) of the scalar power tuple of -1: the full tuple (-1, 1, -1)
  // is the circle point with rho = 1, but the re-indexed pair (1, -1) has
  // rho = 2. This is why the property above restricts the index sets.
  Vector full(3);
  full << Complex(-1, 0), Complex(1, 0), Complex(-1, 0);
  Vector pair(2);
  pair << Complex(1, 0), Complex(-1, 0);
  CHECK(nu(full) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu(pair) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("property: compression monotonicity") {
  Rng rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3);
    const Index n_small = 1 + static_cast<Index>(rng.uniform() * (n - 1));
    const MatrixTuple t = random_tuple(rng, d, n);
    const Matrix v = rng.random_isometry(n, n_small);
    CHECK(rho(compress_tuple(t, v)).value <= rho(t).value + 1e-10);
  }
}

TEST_CASE("property: rho vanishes only on the zero tuple") {
  Rng rng(127);
  CHECK(rho(zero_tuple(3, 2)).value == doctest::Approx(0.0));
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixTuple t = random_tuple(rng, 2, 2);
    double largest = 0.0;
    for (const Matrix& m : t.matrices) largest = std::max(largest, operator_norm(m));
    if (largest > 1e-6) CHECK(rho(t).value > 1e-7);
  }
}

TEST_CASE("property: positive homogeneity and subadditivity") {
  Rng rng(131);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 1 + static_cast<Index>(rng.uniform() * 3);
    const MatrixTuple s = random_tuple(rng, d, n);
    const MatrixTuple t = random_tuple(rng, d, n);
    const double a = 3.0 * rng.uniform();
    CHECK(rho(scale_tuple(s, Complex(a, 0.0))).value ==
          doctest::Approx(a * rho(s).value).epsilon(1e-9));
    CHECK(rho(add_tuples(s, t)).value <= rho(s).value + rho(t).value + 1e-10);
  }
}

TEST_CASE("property: omega never exceeds rho") {
  Rng rng(137);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 1 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_tuple(rng, d, n);
    OmegaOptions opts;
    opts.starts = 12;
    opts.seed = static_cast<std::uint64_t>(trial);
    CHECK(omega(t, opts).value <= rho(t).value + 1e-10);
  }
}

TEST_CASE("property: d = 1 closed-form identities") {
  Rng rng(139);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 7);
    const Matrix m = rng.gaussian_matrix(n, n);
    const MatrixTuple t = make_tuple({m});
    CHECK(rho(t).value == doctest::Approx(operator_norm(m)).epsilon(1e-8));
    OmegaOptions opts;
    opts.starts = 48;
    opts.seed = static_cast<std::uint64_t>(trial);
    const double sweep = classical_numerical_radius(m, 2048);
    CHECK(std::abs(omega(t, opts).value - sweep) <= 1e-6 * std::max(1.0, sweep));
  }
}

TEST_CASE("property: normal tuples collapse all four moduli") {
  Rng rng(149);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const MatrixTuple t = random_commuting_normal(rng, d, n);
    const double rho_v = rho(t).value;
    CHECK(std::abs(spectral_radius(t, trial).value - rho_v) <= 1e-7 * std::max(1.0, rho_v));
    CHECK(std::abs(gelfand_spectral_radius(t, trial).value - rho_v) <=
          1e-7 * std::max(1.0, rho_v));
  }
}

TEST_CASE("property: operator convex combinations stay contractive") {
  Rng rng(151);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3);
    const MatrixTuple t1 = random_contractive_tuple(d, n, 2 * n, 1000 + trial);
    const MatrixTuple t2 = random_contractive_tuple(d, n, 2 * n, 2000 + trial);
    // [X1; X2] isometric column stack gives X1* X1 + X2* X2 = I
    const Matrix stack = rng.random_isometry(2 * n, n);
    const Matrix x1 = stack.topRows(n), x2 = stack.bottomRows(n);
    std::vector<Matrix> combined;
    for (Index k = 0; k < d; ++k)
      combined.push_back(x1.adjoint() * t1.matrices[static_cast<std::size_t>(k)] * x1 +
                         x2.adjoint() * t2.matrices[static_cast<std::size_t>(k)] * x2);
    CHECK(rho(make_tuple(combined)).value <= 1.0 + 1e-9);
  }
}

TEST_CASE("property: power tuples of contractions are Toeplitz-contractive") {
  Rng rng(157);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 4);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 4);
    const Matrix t = random_contraction(rng, n, rng.uniform());
    CHECK(is_toeplitz_contractive(power_tuple(t, d)));
  }
}

TEST_CASE("property: halved powers of numerical contractions are contractive") {
  Rng rng(163);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.uniform() * 3);
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3);
    Matrix s = rng.gaussian_matrix(n, n);
    s /= classical_numerical_radius(s, 2048);  // w(s) = 1
    const MatrixTuple halved = scale_tuple(power_tuple(s, d), Complex(0.5, 0.0));
    CHECK(is_toeplitz_contractive(halved));
  }
}

TEST_CASE("property: the pair (T, 0) is contractive iff I - TT* - T*T is PSD") {
  Rng rng(167);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3);
    const Matrix t = 0.8 * rng.gaussian_matrix(n, n) / std::sqrt(static_cast<double>(n));
    Matrix defect = Matrix::Identity(n, n) - t * t.adjoint() - t.adjoint() * t;
    const double margin = min_eigenvalue(defect);
    if (std::abs(margin) < 1e-8) continue;  // skip boundary, predicates use slack
    const MatrixTuple pair = make_tuple({t, Matrix::Zero(n, n)});
    CHECK(is_toeplitz_contractive(pair) == (margin >= 0.0));
    ++checked;
  }
  CHECK(checked >= 20);
}
