#pragma once

#include <optional>
#include <string>
#include <vector>

#include "angsync/solvers.hpp"
#include "angsync/synth.hpp"
#include "angsync/types.hpp"

namespace angsync {

/// Distance between phase configurations modulo a global rotation:
/// min over theta of ||a - e^{i theta} b||_2, evaluated in closed form as
/// sqrt(||a||^2 + ||b||^2 - 2 |b* a|). A pseudometric on vectors, a metric
/// on equivalence classes under global phase.
double phaseDistance(const ComplexVector& a, const ComplexVector& b);

/// Norms of the measurement error Delta = Xhat - X. Every matrix involved
/// vanishes off the edge set, so these are edge-restricted norms counting
/// both orientations of each edge.
struct NoiseNorms {
  double phase_fro = 0.0;          // ||Xhat - X||_F
  double weighted_fro = 0.0;       // ||W o (Xhat - X)||_F
  double weighted_spec = 0.0;      // ||W o (Xhat - X)||_2 (spectral)
  double root_weighted_fro = 0.0;  // ||R o (Xhat - X)||_F, R = entrywise sqrt W
  double signal_fro = 0.0;         // ||Yhat - Y||_F
};

/// Empirical errors and every a-priori error bound for one instance.
/// Bounds that only apply under a particular weight scheme are empty
/// under the others (never silently zero); `bound_lsp` rows bound the
/// torus minimizer, `bound_er` rows its eigenvector-rounding counterpart
/// carrying the amplification factor c_z.
struct BoundReport {
  double dist_er = 0.0;
  double dist_lsp = 0.0;
  std::optional<double> dist_sdp;

  std::optional<double> bound_er_normalized;  // unit: 19 nF / (tau_N sqrt(min deg))
  std::optional<double> bound_lsp_unit;       // unit: 2 nF / sqrt(tau_G)
  std::optional<double> bound_er_unit;        // unit: c_z * bound_lsp_unit
  double bound_lsp_spec_sqrt = 0.0;           // 2 sqrt(d ||W o D||_2 / tau_G)
  double bound_lsp_spec = 0.0;                // 4 sqrt(d) ||W o D||_2 / tau_G
  double bound_lsp = 0.0;                     // 2 ||R o D||_F / sqrt(tau_G)
  double bound_er = 0.0;                      // c_z * bound_lsp
  std::optional<double> bound_lsp_amplitude;  // 2 sqrt(2 sF nF) / sqrt(tau_G)
  std::optional<double> bound_er_amplitude;   // c_z * bound_lsp_amplitude
  std::optional<double> bound_lsp_squared;    // 4 sF / sqrt(tau_G)
  std::optional<double> bound_er_squared;     // c_z * bound_lsp_squared
  double naive = 0.0;                         // 2 sqrt(d)
  double rdelta_upper = 0.0;  // sqrt(||W o D||_F ||D||_F) >= ||R o D||_F

  TightnessCertificate tight_sdp;  // evaluated at the torus minimizer
  NoiseNorms noise;
  double c_z = 0.0;
  double tau_g = 0.0;
  double tau_n = 0.0;
};

/// Fills a BoundReport from one consistent instance: the weighted graph of
/// `scheme`, the measurements, and solver results on those measurements.
/// `sdp` may be null when the semidefinite solver was not run.
BoundReport evalBounds(const WeightedGraph& g, WeightScheme scheme,
                       const MeasurementSet& ms, const SolverResult& er,
                       const SolverResult& lsp,
                       const SdpResult* sdp = nullptr);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Evaluates the chain of energy inequalities behind the bounds, on one
/// instance, using the ground truth in `ms`. All of them are proven
/// statements: a violation beyond roundoff indicates a bug.
std::vector<InequalityCheck> checkBoundInequalities(const WeightedGraph& g,
                                                    const MeasurementSet& ms,
                                                    const SolverResult& er,
                                                    const SolverResult& lsp);

}  // namespace angsync
