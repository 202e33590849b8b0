#pragma once

#include <cstdint>
#include <optional>

#include "angsync/graph.hpp"
#include "angsync/types.hpp"

namespace angsync {

/// Output of the vector-valued estimators. The raw estimate z and its
/// unit-modulus rounding are globally phase-aligned so that the first
/// entry of x_round with nonzero modulus is positive real.
struct SolverResult {
  ComplexVector z;        // raw estimate
  ComplexVector x_round;  // entrywise sgn of z
  double objective = 0.0; // quadratic form value z* (D - W∘Xhat) z
  int iterations = 0;
  bool converged = true;
  double sup_norm_z = 0.0;
  double c_z = 0.0;       // sqrt(2 + 2 sup_norm_z^2)
  /// Largest single-step objective increase seen by an iterative descent
  /// method; stays at rounding level for a correct configuration.
  double max_objective_increase = 0.0;
};

struct SdpResult {
  HermitianMatrix Z;      // feasible point, unit diagonal, PSD
  ComplexVector x_round;  // sgn of the leading eigenvector of Z
  double objective = 0.0; // tr((D - W∘Xhat) Z)
  int numerical_rank = 1; // eigenvalues above 1e-6 * lambda_max(Z)
  int iterations = 0;
  bool converged = true;
  double gradient_norm = 0.0;  // Riemannian gradient norm at exit
};

struct SolveOptions {
  std::uint64_t seed = 0x517cc1b727220a95ull;
};

/// Eigenvector relaxation: sqrt(d) times the smallest eigenvector of the
/// data Laplacian D - W∘xhat. Entries of xhat off the edge set are ignored;
/// edge entries must be unit-modulus and conjugate-symmetric.
SolverResult solveEr(const WeightedGraph& g, const ComplexMatrix& xhat,
                     const SolveOptions& opts = {});

/// Same relaxation on the degree-normalized data Laplacian
/// D^{-1/2} (D - W∘xhat) D^{-1/2}.
SolverResult solveErNormalized(const WeightedGraph& g,
                               const ComplexMatrix& xhat,
                               const SolveOptions& opts = {});

/// Torus least squares by the generalized power method
/// u <- sgn((mu I - L) u) with the Gershgorin shift mu = 2 max degree.
/// Defaults to the rounded eigenvector relaxation as the starting point.
/// The objective never increases along the iteration; it stops once the
/// per-step decrease falls below 1e-12 of the objective (or at 10^4 steps,
/// returning the best iterate with converged = false).
SolverResult solveLsp(const WeightedGraph& g, const ComplexMatrix& xhat,
                      const std::optional<ComplexVector>& init = std::nullopt,
                      const SolveOptions& opts = {});

/// Semidefinite relaxation min tr(L Z) over unit-diagonal PSD Z, solved in
/// the factorized form Z = VV* with ceil(sqrt(2d))+1 columns and unit-norm
/// rows, by Riemannian gradient descent with Barzilai-Borwein steps and
/// backtracking to a first-order tolerance of 1e-9.
SdpResult solveSdp(const WeightedGraph& g, const ComplexMatrix& xhat,
                   const SolveOptions& opts = {});

struct TightnessCertificate {
  bool holds = false;
  double margin = 0.0;         // threshold - spectral_norm
  double spectral_norm = 0.0;  // ||W∘(xhat - x_cand x_cand*)||_2
  double threshold = 0.0;      // tau_G / (1 + sqrt(d))
};

/// Sufficient condition for the SDP optimum to be the rank-one lift of
/// x_cand. `tau_g` is the connectivity of the weighted graph.
TightnessCertificate tightnessCertificate(const WeightedGraph& g,
                                          const ComplexMatrix& xhat,
                                          const ComplexVector& x_cand,
                                          double tau_g);

/// Convenience overload that computes the connectivity itself.
TightnessCertificate tightnessCertificate(const WeightedGraph& g,
                                          const ComplexMatrix& xhat,
                                          const ComplexVector& x_cand);

/// Rotates v by a global phase so its first nonzero entry is positive real.
ComplexVector canonicalizeGlobalPhase(const ComplexVector& v);

}  // namespace angsync
