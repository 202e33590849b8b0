#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "angsync/linalg.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace angsync;

namespace {

ComplexMatrix randomHermitian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix b(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) b(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return 0.5 * (b + b.adjoint().eval());
}

RealMatrix pathLaplacian3() {
  RealMatrix l(3, 3);
  l << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  return l;
}

}  // namespace

TEST_CASE("hadamard multiplies entrywise") {
  ComplexMatrix a(2, 2), b(2, 2);
  a << Complex(1, 1), Complex(2, 0), Complex(0, -1), Complex(3, 2);
  b << Complex(2, 0), Complex(0, 1), Complex(1, 1), Complex(-1, 0);
  ComplexMatrix c = hadamard(a, b);
  CHECK(c(0, 0) == Complex(2, 2));
  CHECK(c(0, 1) == Complex(0, 2));
  CHECK(c(1, 0) == Complex(1, -1));
  CHECK(c(1, 1) == Complex(-3, -2));
}

TEST_CASE("hadamard identity and absorbing elements") {
  ComplexMatrix a = randomHermitian(5, 11);
  ComplexMatrix ones = ComplexMatrix::Ones(5, 5);
  ComplexMatrix zeros = ComplexMatrix::Zero(5, 5);
  CHECK(hadamard(a, ones) == a);
  CHECK(hadamard(a, zeros) == zeros);
}

TEST_CASE("hadamard commutes exactly") {
  ComplexMatrix a = randomHermitian(6, 21);
  ComplexMatrix b = randomHermitian(6, 22);
  CHECK(hadamard(a, b) == hadamard(b, a));
}

TEST_CASE("hadamard rejects shape mismatch") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 3);
  ComplexMatrix b = ComplexMatrix::Zero(3, 2);
  CHECK_THROWS_AS(hadamard(a, b), std::invalid_argument);
}

TEST_CASE("sgn normalizes and maps zero to zero") {
  CHECK(sgn(Complex(3, 4)) == Complex(0.6, 0.8));
  CHECK(sgn(Complex(0, 0)) == Complex(0, 0));
  CHECK(sgn(Complex(-2, 0)) == Complex(-1, 0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Complex z(gauss(rng), gauss(rng));
    if (std::abs(z) == 0.0) continue;
    CHECK(std::abs(std::abs(sgn(z)) - 1.0) <= 1e-12);
    // sgn(z) lies on the ray of z: cross term is real and positive.
    CHECK(std::abs((std::conj(z) * sgn(z)).imag()) <= 1e-12 * std::abs(z));
  }
}

TEST_CASE("entrywiseSgn applies sgn per entry") {
  ComplexVector v(3);
  v << Complex(3, 4), Complex(0, 0), Complex(0, -2);
  ComplexVector s = entrywiseSgn(v);
  CHECK(s[0] == Complex(0.6, 0.8));
  CHECK(s[1] == Complex(0, 0));
  CHECK(s[2] == Complex(0, -1));
}

TEST_CASE("HermitianMatrix symmetrizes approximate input") {
  ComplexMatrix a = randomHermitian(4, 31);
  a(1, 2) += Complex(1e-12, -1e-12);  // tiny asymmetry, below tolerance
  HermitianMatrix h = HermitianMatrix::fromApprox(a);
  CHECK((h.mat() - h.mat().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.mat() - a).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("HermitianMatrix rejects non-Hermitian input") {
  ComplexMatrix a = randomHermitian(4, 41);
  a(0, 3) += Complex(0.5, 0.0);
  CHECK_THROWS_AS(HermitianMatrix::fromApprox(a), std::invalid_argument);
}

TEST_CASE("HermitianMatrix mirrors the lower triangle exactly") {
  ComplexMatrix a(3, 3);
  a.setZero();
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = 3.0;
  a(1, 0) = Complex(1, 1);
  a(2, 0) = Complex(0, -2);
  a(2, 1) = Complex(-1, 0);
  a(0, 1) = Complex(99, 99);  // upper triangle is ignored
  HermitianMatrix h = HermitianMatrix::fromLowerTriangle(a);
  CHECK(h.mat()(0, 1) == Complex(1, -1));
  CHECK(h.mat()(0, 2) == Complex(0, 2));
  CHECK(h.mat()(1, 2) == Complex(-1, 0));
  CHECK((h.mat() - h.mat().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("HermitianMatrix rejects a complex diagonal") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = Complex(1, 0.5);
  CHECK_THROWS_AS(HermitianMatrix::fromLowerTriangle(a), std::invalid_argument);
}

TEST_CASE("smallest eigenpair of a diagonal matrix") {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 0.0;
  a(1, 1) = 1.0;
  a(2, 2) = 2.0;
  EigenPair p = smallestEigenpair(HermitianMatrix::fromApprox(a), 2.0);
  CHECK(std::abs(p.value) <= 1e-10);
  CHECK(std::abs(std::abs(p.vector[0]) - 1.0) <= 1e-8);
  CHECK(std::abs(p.vector[1]) <= 1e-8);
  CHECK(std::abs(p.vector[2]) <= 1e-8);
  CHECK(p.residual <= 1e-8);
}

TEST_CASE("smallest eigenpair of the 2x2 graph Laplacian") {
  ComplexMatrix a(2, 2);
  a << 1, -1, -1, 1;
  EigenPair p = smallestEigenpair(HermitianMatrix::fromApprox(a), 2.0);
  CHECK(std::abs(p.value) <= 1e-10);
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(p.vector[0]) - inv_sqrt2) <= 1e-8);
  CHECK(std::abs(p.vector[0] - p.vector[1]) <= 1e-8);  // equal up to phase
}

TEST_CASE("identity matrix converges via the invariant-subspace path") {
  ComplexMatrix a = ComplexMatrix::Identity(5, 5);
  EigenPair p = smallestEigenpair(HermitianMatrix::fromApprox(a), 1.0);
  CHECK(std::abs(p.value - 1.0) <= 1e-10);
  CHECK(p.residual <= 1e-10);
}

TEST_CASE("extremal eigenpairs match a dense Jacobi decomposition") {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    ComplexMatrix a = randomHermitian(6, seed);
    HermitianMatrix h = HermitianMatrix::fromApprox(a);
    auto [evals, evecs] = oracles::jacobiHermitian(h.mat());

    EigenPair lo = smallestEigenpair(h, gershgorinBound(h));
    CHECK(std::abs(lo.value - evals[0]) <= 1e-8);
    CHECK(std::abs(lo.vector.dot(evecs.col(0))) >= 1.0 - 1e-8);

    EigenPair hi = leadingEigenpair(h);
    CHECK(std::abs(hi.value - evals[5]) <= 1e-8);
    CHECK(std::abs(hi.vector.dot(evecs.col(5))) >= 1.0 - 1e-8);

    double oracle_norm = std::max(std::abs(evals[0]), std::abs(evals[5]));
    CHECK(std::abs(spectralNorm(h) - oracle_norm) <= 1e-8);
  }
}

TEST_CASE("eigenpairs satisfy the Rayleigh identity") {
  ComplexMatrix a = randomHermitian(12, 55);
  HermitianMatrix h = HermitianMatrix::fromApprox(a);
  EigenPair p = leadingEigenpair(h);
  double rayleigh = p.vector.dot(h.mat() * p.vector).real();
  CHECK(std::abs(rayleigh - p.value) <= 1e-10 * std::max(1.0, std::abs(p.value)));
  CHECK(std::abs(p.vector.norm() - 1.0) <= 1e-12);
  CHECK((h.mat() * p.vector - p.value * p.vector).norm() <=
        1e-8 * std::max(1.0, gershgorinBound(h)));
}

TEST_CASE("second smallest eigenvalue of reference graphs") {
  // Complete graph on 4 vertices: spectrum {0, 4, 4, 4}.
  RealMatrix k4 = 4.0 * RealMatrix::Identity(4, 4) - RealMatrix::Ones(4, 4);
  HermitianMatrix hk4 = HermitianMatrix::fromApprox(k4.cast<Complex>());
  ComplexVector ones4 = ComplexVector::Ones(4);
  CHECK(std::abs(secondSmallestEigenvalue(hk4, ones4) - 4.0) <= 1e-8);

  // Path on 3 vertices: spectrum {0, 1, 3}.
  HermitianMatrix hp3 =
      HermitianMatrix::fromApprox(pathLaplacian3().cast<Complex>());
  ComplexVector ones3 = ComplexVector::Ones(3);
  CHECK(std::abs(secondSmallestEigenvalue(hp3, ones3) - 1.0) <= 1e-8);

  // Cycle on 5 vertices: second eigenvalue 2 - 2cos(2*pi/5).
  RealMatrix c5 = RealMatrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    c5(i, i) = 2.0;
    c5(i, (i + 1) % 5) = -1.0;
    c5((i + 1) % 5, i) = -1.0;
  }
  HermitianMatrix hc5 = HermitianMatrix::fromApprox(c5.cast<Complex>());
  ComplexVector ones5 = ComplexVector::Ones(5);
  double expected = 2.0 - 2.0 * std::cos(2.0 * M_PI / 5.0);
  CHECK(std::abs(secondSmallestEigenvalue(hc5, ones5) - expected) <= 1e-8);
}

TEST_CASE("second smallest eigenvalue vanishes on a disconnected graph") {
  RealMatrix l = RealMatrix::Zero(4, 4);
  l(0, 0) = l(1, 1) = l(2, 2) = l(3, 3) = 1.0;
  l(0, 1) = l(1, 0) = -1.0;
  l(2, 3) = l(3, 2) = -1.0;
  HermitianMatrix h = HermitianMatrix::fromApprox(l.cast<Complex>());
  ComplexVector ones = ComplexVector::Ones(4);
  CHECK(std::abs(secondSmallestEigenvalue(h, ones)) <= 1e-9);
}

TEST_CASE("second smallest eigenvalue rejects a non-null vector") {
  ComplexMatrix ident = ComplexMatrix::Identity(3, 3);
  HermitianMatrix h = HermitianMatrix::fromApprox(ident);
  ComplexVector ones = ComplexVector::Ones(3);
  CHECK_THROWS_AS(secondSmallestEigenvalue(h, ones), std::invalid_argument);
}

TEST_CASE("solver results are deterministic for a fixed seed") {
  ComplexMatrix a = randomHermitian(10, 77);
  HermitianMatrix h = HermitianMatrix::fromApprox(a);
  EigenPair p1 = smallestEigenpair(h, gershgorinBound(h));
  EigenPair p2 = smallestEigenpair(h, gershgorinBound(h));
  CHECK(p1.value == p2.value);
  CHECK(p1.vector == p2.vector);
}

TEST_CASE("exhausted matvec budget raises a convergence error") {
  ComplexMatrix a = randomHermitian(40, 88);
  HermitianMatrix h = HermitianMatrix::fromApprox(a);
  EigsOptions opts;
  opts.max_matvecs = 3;
  CHECK_THROWS_AS(smallestEigenpair(h, gershgorinBound(h), opts),
                  ConvergenceError);
}

TEST_CASE("spectral norm of the zero matrix is zero") {
  HermitianMatrix h = HermitianMatrix::fromApprox(ComplexMatrix::Zero(4, 4));
  CHECK(spectralNorm(h) == 0.0);
}

TEST_CASE("larger random matrices agree with the dense oracle") {
  ComplexMatrix a = randomHermitian(40, 123);
  HermitianMatrix h = HermitianMatrix::fromApprox(a);
  auto [evals, evecs] = oracles::jacobiHermitian(h.mat());
  EigenPair lo = smallestEigenpair(h, gershgorinBound(h));
  CHECK(std::abs(lo.value - evals[0]) <= 1e-8);
  EigenPair hi = leadingEigenpair(h);
  CHECK(std::abs(hi.value - evals[39]) <= 1e-8);
}
