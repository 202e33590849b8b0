#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "angsync/types.hpp"

namespace angsync {

/// Entrywise (Hadamard) product. Shapes must match.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

/// sgn(α) = α/|α| for α ≠ 0, and 0 otherwise.
Complex sgn(Complex alpha);
ComplexVector entrywiseSgn(const ComplexVector& v);
ComplexMatrix entrywiseSgn(const ComplexMatrix& a);

/// Hermitian matrix presented as a matvec, so solvers can exploit sparsity
/// without committing the storage format.
struct HermitianOperator {
  Eigen::Index dim = 0;
  std::function<void(const ComplexVector& in, ComplexVector& out)> apply;
  /// Any upper bound on the spectral norm; used to scale residual targets.
  double norm_bound = 1.0;
};

HermitianOperator denseOperator(const HermitianMatrix& a);

enum class SpectrumEnd { Smallest, Largest };

struct EigsOptions {
  double tol = 1e-10;      // residual target, relative to max(1, norm_bound)
  int max_matvecs = 0;     // 0 -> 100 * dim
  std::uint64_t seed = 0x8f1bbcdc2f6d4b01ull;
};

/// Extremal eigenpair of a Hermitian operator by thick-restart Lanczos,
/// deflating against `deflate` (assumed orthonormal after internal cleanup).
/// Deterministic for a fixed seed. Throws ConvergenceError if the matvec
/// budget runs out before the residual contract is met.
EigenPair extremalEigenpair(const HermitianOperator& op, SpectrumEnd end,
                            const std::vector<ComplexVector>& deflate = {},
                            const EigsOptions& opts = {});

/// Minimal eigenpair; `known_upper` must dominate λ_max (callers pass
/// 2·max-degree for Laplacians, by Gershgorin).
EigenPair smallestEigenpair(const HermitianMatrix& a, double known_upper,
                            const EigsOptions& opts = {});

/// λ₂ of a PSD matrix whose null space contains `null_vector`; computed with
/// deflation. Throws std::invalid_argument if the supplied vector is not an
/// (approximate) null vector.
double secondSmallestEigenvalue(const HermitianMatrix& a,
                                const ComplexVector& null_vector,
                                const EigsOptions& opts = {});

EigenPair leadingEigenpair(const HermitianMatrix& a,
                           const EigsOptions& opts = {});

/// Spectral norm max(|λ_max|, |λ_min|) from the two extremal eigenvalues.
double spectralNorm(const HermitianMatrix& a, const EigsOptions& opts = {});

/// Max absolute row sum; a cheap upper bound on the spectral norm.
double gershgorinBound(const HermitianMatrix& a);

}  // namespace angsync
