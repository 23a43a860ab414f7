#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>
#include <vector>

#include "unifinsler/linalg.hpp"
#include "unifinsler/random.hpp"

using namespace unifinsler;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("op_norm basics") {
  CHECK(op_norm(ComplexMatrix::Zero(3, 3)) == doctest::Approx(0.0));
  CHECK(op_norm(diag2(Complex(0, 3), Complex(0, -2))) == doctest::Approx(3.0));

  // Gram oracle: op_norm(m) = sqrt(op_norm(m* m)).
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const ComplexMatrix m = random_complex_gaussian(rng, n);
    CHECK(std::abs(op_norm(m) - std::sqrt(op_norm(m.adjoint() * m))) <=
          1e-10 * std::max(1.0, op_norm(m)));
  }

  // Independent oracle: largest singular value via Eigen's SVD.
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_complex_gaussian(rng, 5);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    CHECK(op_norm(m) ==
          doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  }
}

TEST_CASE("schatten_norm examples and errors") {
  const ComplexMatrix id4 = ComplexMatrix::Identity(4, 4);
  CHECK(schatten_norm(id4, 2) == doctest::Approx(2.0));
  CHECK(schatten_norm(id4, 2, TraceConvention::normalized) ==
        doctest::Approx(1.0));
  CHECK(schatten_norm(diag2(Complex(1, 0), Complex(-1, 0)), 4) ==
        doctest::Approx(std::pow(2.0, 0.25)));
  CHECK_THROWS_AS(schatten_norm(id4, 3), InvalidP);
  CHECK_THROWS_AS(schatten_norm(id4, 0), InvalidP);
  CHECK_THROWS_AS(schatten_norm(id4, -2), InvalidP);
}

TEST_CASE("unitary invariance of norms") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix m = random_complex_gaussian(rng, n);
    const Unitary u = random_unitary(rng, n, 3.0);
    const Unitary v = random_unitary(rng, n, 3.0);
    const ComplexMatrix rotated = u.mat() * m * v.mat();
    CHECK(std::abs(op_norm(rotated) - op_norm(m)) <= 1e-9);
    for (int p : {2, 4, 6}) {
      CHECK(std::abs(schatten_norm(rotated, p) - schatten_norm(m, p)) <=
            1e-9);
    }
  }
}

TEST_CASE("trace_inner examples and identities") {
  const SkewHermitian x(diag2(Complex(0, 1), Complex(0, -1)));
  CHECK(trace_inner(x, x) == doctest::Approx(2.0));

  const SkewHermitian a(diag2(Complex(0, 1), Complex(0, 0)));
  const SkewHermitian b(diag2(Complex(0, 0), Complex(0, 1)));
  CHECK(trace_inner(a, b) == doctest::Approx(0.0));

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const SkewHermitian y = random_skew(rng, n, rng.uniform(0.1, 2.0));
    for (TraceConvention conv :
         {TraceConvention::standard, TraceConvention::normalized}) {
      const double n2 = schatten_norm(y.mat(), 2, conv);
      CHECK(trace_inner(y, y, conv) == doctest::Approx(n2 * n2));
      // Hessian quadratic form: Q_x(y) = -2 tau(y y) = 2 ||y||_2^2.
      const double q = -2.0 * ((y.mat() * y.mat()).trace().real() /
                               (conv == TraceConvention::normalized
                                    ? static_cast<double>(n)
                                    : 1.0));
      CHECK(q == doctest::Approx(2.0 * n2 * n2));
    }
  }

  const SkewHermitian z3 = SkewHermitian::zero(3);
  CHECK_THROWS_AS(trace_inner(x, z3), DimensionMismatch);
}

TEST_CASE("commutator bound realizing the Hessian estimate") {
  // ||x y - y x||_2 <= 2 ||x||_inf ||y||_2.
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const SkewHermitian x = random_skew(rng, n, rng.uniform(0.1, 3.0));
    const SkewHermitian y = random_skew(rng, n, rng.uniform(0.1, 3.0));
    const ComplexMatrix comm = x.mat() * y.mat() - y.mat() * x.mat();
    CHECK(schatten_norm(comm, 2) <=
          2.0 * op_norm(x.mat()) * schatten_norm(y.mat(), 2) + 1e-9);
  }
}

TEST_CASE("type validation") {
  ComplexMatrix herm = diag2(Complex(1, 0), Complex(2, 0));
  CHECK_THROWS_AS(SkewHermitian{herm}, NotSkewHermitian);
  CHECK_THROWS_AS(Unitary{2.0 * ComplexMatrix::Identity(2, 2)}, NotUnitary);

  ComplexMatrix bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(op_norm(bad), InvalidMatrix);

  ComplexMatrix nan2 = ComplexMatrix::Zero(2, 2);
  nan2(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(Unitary{nan2}, InvalidMatrix);

  // Canonicalization: near-skew input comes out exactly skew.
  Rng rng(15);
  const ComplexMatrix g = random_complex_gaussian(rng, 4);
  const SkewHermitian x((g - g.adjoint()) / 2.0);
  CHECK(op_norm(x.mat() + x.mat().adjoint()) == doctest::Approx(0.0));
}

TEST_CASE("spectral_normal identity and diagonal") {
  const SpectralDecomposition id3 =
      spectral_normal(ComplexMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) {
    CHECK(id3.eigenvalues[i] == Complex(1.0, 0.0));
  }
  CHECK(op_norm(id3.eigenvectors - ComplexMatrix::Identity(3, 3)) ==
        doctest::Approx(0.0));

  // Angle ordering: -pi/6 before pi/3.
  const SpectralDecomposition d = spectral_normal(
      diag2(std::polar(1.0, kPi / 3.0), std::polar(1.0, -kPi / 6.0)));
  CHECK(std::arg(d.eigenvalues[0]) == doctest::Approx(-kPi / 6.0));
  CHECK(std::arg(d.eigenvalues[1]) == doctest::Approx(kPi / 3.0));
}

TEST_CASE("spectral_normal reconstruction on random unitaries") {
  Rng rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 8;
    const Unitary u = exp_skew(random_skew(rng, n, rng.uniform(0.1, 3.0)));
    const SpectralDecomposition s = spectral_normal(u.mat());
    const ComplexMatrix recon = s.eigenvectors *
                                s.eigenvalues.asDiagonal() *
                                s.eigenvectors.adjoint();
    CHECK(op_norm(u.mat() - recon) <= 1e-9);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(std::abs(s.eigenvalues[i]) - 1.0) <= 1e-10 * n);
    }
  }
}

TEST_CASE("spectral_normal agrees with an independent eigensolver") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Unitary u = exp_skew(random_skew(rng, 6, 2.0));
    const SpectralDecomposition s = spectral_normal(u.mat());
    Eigen::ComplexEigenSolver<ComplexMatrix> es(u.mat());
    std::vector<Complex> ours(s.eigenvalues.data(), s.eigenvalues.data() + 6);
    std::vector<Complex> theirs(es.eigenvalues().data(),
                                es.eigenvalues().data() + 6);
    auto by_parts = [](Complex a, Complex b) {
      return std::make_pair(a.real(), a.imag()) <
             std::make_pair(b.real(), b.imag());
    };
    std::sort(ours.begin(), ours.end(), by_parts);
    std::sort(theirs.begin(), theirs.end(), by_parts);
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(ours[i] - theirs[i]) <= 1e-9);
    }
  }
}

TEST_CASE("spectral_normal rejects non-normal input") {
  ComplexMatrix nilpotent = ComplexMatrix::Zero(2, 2);
  nilpotent(0, 1) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(spectral_normal(nilpotent), NotNormal);
}

TEST_CASE("spectral mapping of id - exp(x)") {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const SkewHermitian x = random_skew(rng, n, rng.uniform(0.1, kPi));
    const SpectralDecomposition sx =
        spectral_normal(x.mat(), Tolerances::global(),
                        NormalityCheck::assume);
    const Unitary u = exp_skew(x);
    const SpectralDecomposition sm =
        spectral_normal(ComplexMatrix::Identity(n, n) - u.mat());
    std::vector<Complex> expected;
    for (Eigen::Index i = 0; i < n; ++i) {
      expected.push_back(Complex(1.0, 0.0) - std::exp(sx.eigenvalues[i]));
    }
    std::vector<Complex> got(sm.eigenvalues.data(),
                             sm.eigenvalues.data() + n);
    auto by_parts = [](Complex a, Complex b) {
      return std::make_pair(a.real(), a.imag()) <
             std::make_pair(b.real(), b.imag());
    };
    std::sort(expected.begin(), expected.end(), by_parts);
    std::sort(got.begin(), got.end(), by_parts);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(expected[i] - got[i]) <= 1e-9);
    }
  }
}

TEST_CASE("exp_skew examples") {
  CHECK(op_norm(exp_skew(SkewHermitian::zero(3)).mat() -
                ComplexMatrix::Identity(3, 3)) == doctest::Approx(0.0));

  const SkewHermitian x(diag2(Complex(0, 0.4), Complex(0, -1.1)));
  const Unitary u = exp_skew(x);
  CHECK(std::abs(u.mat()(0, 0) - std::polar(1.0, 0.4)) <= 1e-14);
  CHECK(std::abs(u.mat()(1, 1) - std::polar(1.0, -1.1)) <= 1e-14);

  // ||id - exp(x)||_inf = 2 sin(||x||_inf / 2) for ||x|| <= pi.
  Rng rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const SkewHermitian y = random_skew(rng, n, rng.uniform(0.01, kPi));
    const double lhs =
        op_norm(ComplexMatrix::Identity(n, n) - exp_skew(y).mat());
    CHECK(std::abs(lhs - 2.0 * std::sin(op_norm(y.mat()) / 2.0)) <= 1e-9);
  }
}

TEST_CASE("log_unitary examples, roundtrip, branch flag") {
  const LogResult lid = log_unitary(Unitary::identity(3));
  CHECK(op_norm(lid.tangent.mat()) == doctest::Approx(0.0));
  CHECK_FALSE(lid.branch_ambiguous);

  ComplexMatrix minus_one(1, 1);
  minus_one(0, 0) = Complex(-1.0, 0.0);
  const LogResult lm = log_unitary(Unitary(minus_one));
  CHECK(lm.branch_ambiguous);
  CHECK(std::abs(lm.tangent.mat()(0, 0) - Complex(0.0, kPi)) <= 1e-14);

  Rng rng(20);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const SkewHermitian x =
        random_skew(rng, n, rng.uniform(0.01, kPi - 0.1));
    const LogResult lr = log_unitary(exp_skew(x));
    CHECK(op_norm(lr.tangent.mat() - x.mat()) <= 1e-8);
    CHECK_FALSE(lr.branch_ambiguous);
    CHECK(op_norm(lr.tangent.mat()) <= kPi + 1e-12);
    CHECK(op_norm(exp_skew(lr.tangent).mat() - exp_skew(x).mat()) <=
          1e-8 * static_cast<double>(n));
  }
}

TEST_CASE("deterministic eigenvalue order") {
  Rng rng(21);
  const Unitary u = exp_skew(random_skew(rng, 5, 2.5));
  const SpectralDecomposition a = spectral_normal(u.mat());
  const SpectralDecomposition b = spectral_normal(u.mat());
  CHECK((a.eigenvalues - b.eigenvalues).norm() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
}

TEST_CASE("pure operations evaluate identically across threads") {
  Rng rng(22);
  const Unitary u = exp_skew(random_skew(rng, 6, 2.0));
  const SkewHermitian x = random_skew(rng, 6, 1.0);
  std::vector<double> results(8, 0.0);
  std::vector<std::thread> workers;
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([&results, &u, &x, t] {
      const SpectralDecomposition s = spectral_normal(u.mat());
      results[t] = op_norm(x.mat()) + std::abs(s.eigenvalues[0]);
    });
  }
  for (auto& w : workers) w.join();
  for (int t = 1; t < 8; ++t) CHECK(results[t] == results[0]);
}
