#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "angsync/graph.hpp"
#include "angsync/linalg.hpp"
#include "angsync/solvers.hpp"
#include "angsync/synth.hpp"
#include "support/oracles.hpp"

using namespace angsync;

namespace {

// Distance modulo a global phase: sqrt(|a|^2 + |b|^2 - 2 |b^* a|).
double alignedDistance(const ComplexVector& a, const ComplexVector& b) {
  const double s = a.squaredNorm() + b.squaredNorm() - 2.0 * std::abs(b.dot(a));
  return std::sqrt(std::max(0.0, s));
}

double formValue(const HermitianMatrix& l, const ComplexVector& u) {
  return u.dot(l.mat() * u).real();
}

MeasurementSet bandedInstance(int d, int delta, double alpha_deg,
                              std::uint64_t seed) {
  const GroundTruth gt = randomSignal(d, mixSeed(seed, 1));
  return applyAngularNoise(gt, bandedGraph(d, delta), alpha_deg,
                           mixSeed(seed, 2));
}

RealMatrix completeWeights(int d) {
  RealMatrix w = RealMatrix::Ones(d, d);
  w.diagonal().setZero();
  return w;
}

}  // namespace

TEST_CASE("all solvers recover the signal exactly without noise") {
  const MeasurementSet ms = bandedInstance(16, 3, 0.0, 11);
  for (WeightScheme scheme :
       {WeightScheme::Unit, WeightScheme::Amplitude,
        WeightScheme::SquaredAmplitude}) {
    const std::string scheme_name = toString(scheme);
    CAPTURE(scheme_name);
    const WeightedGraph g = buildWeights(ms, scheme);
    const double scale = std::max(1.0, g.maxDegree() * ms.graph.dim());

    const SolverResult er = solveEr(g, ms.Xhat);
    CHECK(alignedDistance(er.x_round, ms.x) <= 1e-6);
    CHECK(std::abs(er.objective) <= 1e-8 * scale);

    const SolverResult ern = solveErNormalized(g, ms.Xhat);
    CHECK(alignedDistance(ern.x_round, ms.x) <= 1e-6);

    const SolverResult lsp = solveLsp(g, ms.Xhat);
    CHECK(lsp.converged);
    CHECK(alignedDistance(lsp.x_round, ms.x) <= 1e-6);
    CHECK(std::abs(lsp.objective) <= 1e-8 * scale);

    const SdpResult sdp = solveSdp(g, ms.Xhat);
    CHECK(sdp.numerical_rank == 1);
    CHECK(alignedDistance(sdp.x_round, ms.x) <= 1e-6);
    CHECK(std::abs(sdp.objective) <= 1e-6 * scale);
  }
}

TEST_CASE("eigenvector relaxation matches a dense oracle on a built instance") {
  const int d = 3;
  ComplexVector x(d);
  x << Complex(1, 0), std::polar(1.0, 0.7), std::polar(1.0, 2.1);
  const double eta01 = 0.3, eta02 = -0.2, eta12 = 0.15;

  ComplexMatrix xhat = ComplexMatrix::Zero(d, d);
  auto put = [&](int a, int b, double eta) {
    xhat(b, a) = std::polar(1.0, std::arg(x[b]) - std::arg(x[a]) + eta);
    xhat(a, b) = std::conj(xhat(b, a));
  };
  put(0, 1, eta01);
  put(0, 2, eta02);
  put(1, 2, eta12);

  const WeightedGraph g = WeightedGraph::fromWeights(completeWeights(d));
  const HermitianMatrix lap = dataLaplacian(g, xhat);
  const auto [evals, evecs] = oracles::jacobiHermitian(lap.mat());

  const SolverResult er = solveEr(g, xhat);
  CHECK(std::abs(er.objective / d - evals(0)) <=
        1e-8 * std::max(1.0, std::abs(evals(0))));
  const double overlap = std::abs(evecs.col(0).dot(er.z)) / er.z.norm();
  CHECK(overlap >= 1.0 - 1e-8);
}

TEST_CASE("plain and normalized relaxations match dense oracles on random "
          "weighted instances") {
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    CAPTURE(seed);
    const MeasurementSet ms = bandedInstance(6, 2, 20.0, seed);
    const WeightedGraph g = buildWeights(ms, WeightScheme::Amplitude);
    const HermitianMatrix lap = dataLaplacian(g, ms.Xhat);
    const Eigen::Index d = g.dim();

    const auto [evals, evecs] = oracles::jacobiHermitian(lap.mat());
    const SolverResult er = solveEr(g, ms.Xhat);
    CHECK(std::abs(er.objective / d - evals(0)) <=
          1e-8 * std::max(1.0, std::abs(evals(0))));
    CHECK(std::abs(evecs.col(0).dot(er.z)) / er.z.norm() >= 1.0 - 1e-8);

    RealVector dis = g.degrees().cwiseSqrt().cwiseInverse();
    ComplexMatrix norm_mat = dis.asDiagonal() * lap.mat() * dis.asDiagonal();
    const auto [nvals, nvecs] = oracles::jacobiHermitian(norm_mat);
    const SolverResult ern = solveErNormalized(g, ms.Xhat);
    CHECK(std::abs(ern.objective / d - nvals(0)) <=
          1e-8 * std::max(1.0, std::abs(nvals(0))));
    CHECK(std::abs(nvecs.col(0).dot(ern.z)) / ern.z.norm() >= 1.0 - 1e-8);
  }
}

TEST_CASE("normalization is a no-op on a constant-degree band") {
  // Every vertex of the (8, 2) band has degree 2, so the normalized operator
  // is the plain one divided by 2 and both relaxations share eigenvectors.
  const MeasurementSet ms = bandedInstance(8, 2, 15.0, 31);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Unit);

  const SolverResult er = solveEr(g, ms.Xhat);
  const SolverResult ern = solveErNormalized(g, ms.Xhat);
  CHECK(alignedDistance(er.x_round, ern.x_round) <= 1e-5);
  CHECK(alignedDistance(er.z, ern.z) <= 1e-5 * std::sqrt(8.0));
  CHECK(std::abs(2.0 * ern.objective - er.objective) <=
        1e-8 * std::max(1.0, std::abs(er.objective)));
}

TEST_CASE("torus descent is monotone and beats an exhaustive grid at d = 4") {
  for (std::uint64_t seed : {41ull, 42ull, 43ull}) {
    CAPTURE(seed);
    const GroundTruth gt = randomSignal(4, mixSeed(seed, 1));
    const WeightedGraph g = WeightedGraph::fromWeights(completeWeights(4));
    const MeasurementSet ms =
        applyAngularNoise(gt, g, 30.0, mixSeed(seed, 2));

    const SolverResult lsp = solveLsp(g, ms.Xhat);
    CHECK(lsp.converged);
    CHECK(lsp.max_objective_increase <=
          1e-9 * std::max(1.0, std::abs(lsp.objective)));

    const double grid = oracles::lspGridObjective(g.weights(), ms.Xhat, 2.0);
    // The grid scans feasible points only, so its minimum sits at or above
    // the true optimum; a correct descent must end at or below it.
    CHECK(lsp.objective <= grid + 1e-9 * std::max(1.0, std::abs(grid)));
    // And the 2 degree resolution bounds how far above the optimum the grid
    // can land: |grad| <= 2 ||L|| sqrt(d) on the torus, ||L|| <= 2 max deg.
    const double step = std::sqrt(3.0) * M_PI / 180.0;
    const double lmax = 2.0 * g.maxDegree();
    const double slack = 2.0 * lmax * 2.0 * step + lmax * step * step;
    CHECK(grid <= lsp.objective + slack);
  }
}

TEST_CASE("relaxation objectives nest: sphere <= sdp <= torus <= rounding") {
  const MeasurementSet ms = bandedInstance(12, 3, 40.0, 51);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Amplitude);
  const HermitianMatrix lap = dataLaplacian(g, ms.Xhat);
  const double scale = std::max(1.0, 2.0 * g.maxDegree() * 12.0);

  const SolverResult er = solveEr(g, ms.Xhat);
  const SolverResult lsp = solveLsp(g, ms.Xhat);
  const SdpResult sdp = solveSdp(g, ms.Xhat);
  CHECK(lsp.converged);
  CHECK(sdp.converged);

  const double rounded_er = formValue(lap, er.x_round);
  CHECK(lsp.objective <= rounded_er + 1e-8 * scale);
  CHECK(sdp.objective <= lsp.objective + 1e-6 * scale);
  CHECK(er.objective <= sdp.objective + 1e-6 * scale);

  // Reported objectives match dense recomputation.
  CHECK(std::abs(er.objective - formValue(lap, er.z)) <= 1e-8 * scale);
  CHECK(std::abs(lsp.objective - formValue(lap, lsp.x_round)) <= 1e-8 * scale);
}

TEST_CASE("eigenvector relaxation invariants hold on a noisy instance") {
  const MeasurementSet ms = bandedInstance(10, 3, 35.0, 61);
  const WeightedGraph g = buildWeights(ms, WeightScheme::SquaredAmplitude);
  const HermitianMatrix lap = dataLaplacian(g, ms.Xhat);
  const Eigen::Index d = g.dim();

  const SolverResult er = solveEr(g, ms.Xhat);
  CHECK(std::abs(er.z.squaredNorm() - d) <= 1e-8 * d);
  CHECK(er.sup_norm_z ==
        doctest::Approx(er.z.cwiseAbs().maxCoeff()).epsilon(1e-12));
  CHECK(er.c_z ==
        doctest::Approx(std::sqrt(2.0 + 2.0 * er.sup_norm_z * er.sup_norm_z))
            .epsilon(1e-12));
  CHECK(er.c_z >= 2.0 - 1e-9);
  CHECK(er.c_z <= std::sqrt(2.0 + 2.0 * d) + 1e-9);

  // Rayleigh minimality against random competitors of the same norm.
  std::mt19937_64 rng(777);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    ComplexVector u(d);
    for (Eigen::Index i = 0; i < d; ++i) u[i] = Complex(gauss(rng), gauss(rng));
    u *= std::sqrt(double(d)) / u.norm();
    CHECK(er.objective <= formValue(lap, u) + 1e-9 * std::max(1.0, er.objective));
  }
}

TEST_CASE("global phase canonicalization pins the first nonzero entry") {
  ComplexVector v(4);
  v << Complex(0, 0), Complex(-0.3, 0.4), Complex(1, 1), Complex(0, -2);
  const ComplexVector c = canonicalizeGlobalPhase(v);
  CHECK(std::abs(c[1].imag()) <= 1e-12);
  CHECK(c[1].real() > 0.0);
  // Rotating the input moves nothing after canonicalization.
  const ComplexVector rotated = std::polar(1.0, 1.234) * v;
  CHECK((canonicalizeGlobalPhase(rotated) - c).norm() <= 1e-12 * v.norm());

  const MeasurementSet ms = bandedInstance(9, 2, 25.0, 71);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Unit);
  for (const ComplexVector& xr :
       {solveEr(g, ms.Xhat).x_round, solveLsp(g, ms.Xhat).x_round,
        solveSdp(g, ms.Xhat).x_round}) {
    CHECK(std::abs(xr[0].imag()) <= 1e-9);
    CHECK(xr[0].real() > 0.0);
  }
}

TEST_CASE("torus descent accepts a custom starting point") {
  const MeasurementSet ms = bandedInstance(10, 3, 50.0, 81);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Unit);
  const HermitianMatrix lap = dataLaplacian(g, ms.Xhat);

  const SolverResult from_truth = solveLsp(g, ms.Xhat, ms.x);
  CHECK(from_truth.objective <=
        formValue(lap, ms.x) + 1e-8 * std::max(1.0, g.maxDegree() * 10.0));
  CHECK(from_truth.max_objective_increase <=
        1e-9 * std::max(1.0, std::abs(from_truth.objective)));

  ComplexVector wrong_size = ComplexVector::Ones(7);
  CHECK_THROWS_AS(solveLsp(g, ms.Xhat, wrong_size), std::invalid_argument);
}

TEST_CASE("semidefinite solution is feasible") {
  const MeasurementSet ms = bandedInstance(10, 3, 25.0, 91);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Unit);
  const SdpResult sdp = solveSdp(g, ms.Xhat);

  const ComplexMatrix& z = sdp.Z.mat();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    CHECK(std::abs(z(i, i).real() - 1.0) <= 1e-6);
    CHECK(std::abs(z(i, i).imag()) <= 1e-12);
  }
  const auto [evals, evecs] = oracles::jacobiHermitian(z);
  CHECK(evals(0) >= -1e-8);
  CHECK(sdp.numerical_rank >= 1);
  CHECK(sdp.numerical_rank <= z.rows());

  // Reported objective equals tr(L Z) recomputed densely.
  const HermitianMatrix lap = dataLaplacian(g, ms.Xhat);
  const double tr = (lap.mat() * z).trace().real();
  CHECK(std::abs(sdp.objective - tr) <= 1e-7 * std::max(1.0, std::abs(tr)));
}

TEST_CASE("tightness certificate separates clean from heavily noised data") {
  const MeasurementSet clean = bandedInstance(12, 3, 0.0, 101);
  const WeightedGraph gc = buildWeights(clean, WeightScheme::Unit);
  const TightnessCertificate ok = tightnessCertificate(gc, clean.Xhat, clean.x);
  CHECK(ok.holds);
  CHECK(ok.spectral_norm <= 1e-9);
  const double tau = laplacians(gc).connectivity;
  CHECK(ok.threshold ==
        doctest::Approx(tau / (1.0 + std::sqrt(12.0))).epsilon(1e-10));
  CHECK(ok.margin == doctest::Approx(ok.threshold - ok.spectral_norm)
                         .epsilon(1e-12));

  const MeasurementSet noisy = bandedInstance(16, 4, 90.0, 102);
  const WeightedGraph gn = buildWeights(noisy, WeightScheme::Unit);
  const SolverResult lsp = solveLsp(gn, noisy.Xhat);
  const TightnessCertificate bad =
      tightnessCertificate(gn, noisy.Xhat, lsp.x_round);
  CHECK_FALSE(bad.holds);
  CHECK(bad.margin < 0.0);
}

TEST_CASE("certificate spectral norm matches a dense oracle") {
  const MeasurementSet ms = bandedInstance(9, 3, 30.0, 111);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Amplitude);
  const SolverResult lsp = solveLsp(g, ms.Xhat);
  const TightnessCertificate cert =
      tightnessCertificate(g, ms.Xhat, lsp.x_round);

  ComplexMatrix a = ComplexMatrix::Zero(9, 9);
  for (auto [i, j] : g.edges()) {
    const Complex lift = lsp.x_round[j] * std::conj(lsp.x_round[i]);
    a(j, i) = g.weights()(j, i) * (ms.Xhat(j, i) - lift);
    a(i, j) = std::conj(a(j, i));
  }
  const auto [evals, evecs] = oracles::jacobiHermitian(a);
  const double oracle_norm =
      std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1)));
  CHECK(std::abs(cert.spectral_norm - oracle_norm) <=
        1e-10 * std::max(1.0, oracle_norm));

  ComplexVector bad_cand = lsp.x_round;
  bad_cand[0] *= 1.5;
  CHECK_THROWS_AS(tightnessCertificate(g, ms.Xhat, bad_cand),
                  std::invalid_argument);
}

TEST_CASE("solvers are deterministic and reject malformed input") {
  const MeasurementSet ms = bandedInstance(11, 3, 30.0, 121);
  const WeightedGraph g = buildWeights(ms, WeightScheme::Unit);

  const SolverResult er1 = solveEr(g, ms.Xhat);
  const SolverResult er2 = solveEr(g, ms.Xhat);
  CHECK((er1.z.array() == er2.z.array()).all());
  CHECK(er1.objective == er2.objective);

  const SdpResult sdp1 = solveSdp(g, ms.Xhat);
  const SdpResult sdp2 = solveSdp(g, ms.Xhat);
  CHECK((sdp1.x_round.array() == sdp2.x_round.array()).all());
  CHECK(sdp1.objective == sdp2.objective);

  SolveOptions other;
  other.seed = 9999;
  const SdpResult sdp3 = solveSdp(g, ms.Xhat, other);
  CHECK(alignedDistance(sdp3.x_round, sdp1.x_round) <= 1e-5);

  ComplexMatrix bad = ms.Xhat;
  const auto [a, b] = g.edges().front();
  bad(b, a) *= 2.0;
  CHECK_THROWS_AS(solveEr(g, bad), std::invalid_argument);
  bad = ms.Xhat;
  bad(a, b) = Complex(0, 0);
  CHECK_THROWS_AS(solveLsp(g, bad), std::invalid_argument);

  const WeightedGraph empty = bandedGraph(6, 1);
  const ComplexMatrix zeros = ComplexMatrix::Zero(6, 6);
  CHECK_THROWS_AS(solveEr(empty, zeros), GraphError);
}
