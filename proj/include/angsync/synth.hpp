#pragma once

#include <cstdint>
#include <string>

#include "angsync/graph.hpp"
#include "angsync/types.hpp"

namespace angsync {

enum class WeightScheme { Unit, Amplitude, SquaredAmplitude };

std::string toString(WeightScheme scheme);
WeightScheme weightSchemeFromString(const std::string& name);

/// Complex Gaussian signal y and its phase vector x = sgn(y).
struct GroundTruth {
  ComplexVector y;
  ComplexVector x;
};

/// y entries have i.i.d. standard normal real and imaginary parts; an exactly
/// zero entry (probability-zero event) is redrawn so x is well defined.
GroundTruth randomSignal(Eigen::Index d, std::uint64_t seed);

/// One synthetic instance. All matrices are supported on the edge set only
/// (zero diagonal, zero off the edges), so Frobenius norms of differences
/// automatically cover the off-diagonal edge entries and nothing else.
struct MeasurementSet {
  WeightedGraph graph;   // edge pattern with unit weights
  ComplexVector y;       // ground-truth signal
  ComplexVector x;       // ground-truth phases, sgn(y)
  ComplexMatrix X;       // clean relative phases x_l * conj(x_j) on edges
  ComplexMatrix Xhat;    // observed phases, X with angular noise applied
  RealMatrix M;          // observed magnitudes |y_l||y_j|, optionally perturbed
  ComplexMatrix Y;       // exact magnitudes times clean phases
  ComplexMatrix Yhat;    // M entrywise-times Xhat
  double alpha = 0.0;    // noise half-width in radians
};

/// Draws one angular noise value uniform on [-alpha, alpha] per unordered
/// edge and mirrors it conjugately, so Xhat stays Hermitian on the edge set
/// and alpha = 0 reproduces X bit for bit. `magnitude_eps` > 0 additionally
/// scales each magnitude by an independent uniform factor in [1-eps, 1+eps]
/// (drawn from a separate stream: the phase noise is unaffected by the knob).
MeasurementSet applyAngularNoise(const GroundTruth& gt,
                                 const WeightedGraph& edges, double alpha_deg,
                                 std::uint64_t seed,
                                 double magnitude_eps = 0.0);

/// Weight matrix for the requested scheme on the instance's edge pattern:
/// unit weights, observed magnitudes |Yhat|, or their squares. Edges whose
/// magnitude vanishes are dropped; throws GraphError if that disconnects
/// the graph.
WeightedGraph buildWeights(const MeasurementSet& ms, WeightScheme scheme);

/// Entrywise square root of the weight matrix, so that R∘R = W exactly.
RealMatrix weightSqrt(const WeightedGraph& g);

/// True when every vertex is reachable through positive-weight edges.
bool isConnected(const WeightedGraph& g);

/// Deterministic 64-bit stream derivation for (master seed, sweep value,
/// trial index) triples.
std::uint64_t mixSeed(std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

}  // namespace angsync
