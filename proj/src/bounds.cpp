#include "angsync/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "angsync/graph.hpp"
#include "angsync/linalg.hpp"

namespace angsync {

double phaseDistance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("phaseDistance: length mismatch");
  }
  const double s =
      a.squaredNorm() + b.squaredNorm() - 2.0 * std::abs(b.dot(a));
  return std::sqrt(std::max(0.0, s));
}

namespace {

// Noise-energy form S(u) = sum over ordered edge pairs of
// w_{l,j} |conj(x_l) u_l - conj(x_j) u_j|^2. Measures how far u is from a
// global rotation of the truth, weighted by the graph.
double alignedEdgeEnergy(const WeightedGraph& g, const ComplexVector& x,
                         const ComplexVector& u) {
  double s = 0.0;
  const RealMatrix& w = g.weights();
  for (auto [a, b] : g.edges()) {
    s += 2.0 * w(b, a) *
         std::norm(std::conj(x[a]) * u[a] - std::conj(x[b]) * u[b]);
  }
  return s;
}

}  // namespace

BoundReport evalBounds(const WeightedGraph& g, WeightScheme scheme,
                       const MeasurementSet& ms, const SolverResult& er,
                       const SolverResult& lsp, const SdpResult* sdp) {
  const Eigen::Index d = g.dim();
  if (ms.x.size() != d || er.x_round.size() != d || lsp.x_round.size() != d) {
    throw std::invalid_argument("evalBounds: inconsistent instance");
  }

  BoundReport rep;
  const LaplacianBundle lap = laplacians(g);
  rep.tau_g = lap.connectivity;
  rep.tau_n = lap.normalized_connectivity;
  rep.c_z = er.c_z;

  const ComplexMatrix delta = ms.Xhat - ms.X;
  const ComplexMatrix wdelta = g.weights().cast<Complex>().cwiseProduct(delta);
  const ComplexMatrix rdelta =
      weightSqrt(g).cast<Complex>().cwiseProduct(delta);
  rep.noise.phase_fro = delta.norm();
  rep.noise.weighted_fro = wdelta.norm();
  rep.noise.root_weighted_fro = rdelta.norm();
  rep.noise.signal_fro = (ms.Yhat - ms.Y).norm();
  rep.noise.weighted_spec =
      rep.noise.weighted_fro == 0.0
          ? 0.0
          : spectralNorm(HermitianMatrix::fromApprox(wdelta));

  rep.dist_er = phaseDistance(er.x_round, ms.x);
  rep.dist_lsp = phaseDistance(lsp.x_round, ms.x);
  if (sdp != nullptr) rep.dist_sdp = phaseDistance(sdp->x_round, ms.x);

  const double sqrt_tau = std::sqrt(rep.tau_g);
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  rep.bound_lsp_spec_sqrt =
      2.0 * std::sqrt(d * rep.noise.weighted_spec / rep.tau_g);
  rep.bound_lsp_spec = 4.0 * sqrt_d * rep.noise.weighted_spec / rep.tau_g;
  rep.bound_lsp = 2.0 * rep.noise.root_weighted_fro / sqrt_tau;
  rep.bound_er = rep.c_z * rep.bound_lsp;
  rep.naive = 2.0 * sqrt_d;
  rep.rdelta_upper =
      std::sqrt(rep.noise.weighted_fro * rep.noise.phase_fro);

  switch (scheme) {
    case WeightScheme::Unit:
      rep.bound_er_normalized =
          19.0 * rep.noise.phase_fro / (rep.tau_n * std::sqrt(lap.min_degree));
      rep.bound_lsp_unit = 2.0 * rep.noise.phase_fro / sqrt_tau;
      rep.bound_er_unit = rep.c_z * *rep.bound_lsp_unit;
      break;
    case WeightScheme::Amplitude:
      rep.bound_lsp_amplitude =
          2.0 * std::sqrt(2.0 * rep.noise.signal_fro * rep.noise.phase_fro) /
          sqrt_tau;
      rep.bound_er_amplitude = rep.c_z * *rep.bound_lsp_amplitude;
      break;
    case WeightScheme::SquaredAmplitude:
      rep.bound_lsp_squared = 4.0 * rep.noise.signal_fro / sqrt_tau;
      rep.bound_er_squared = rep.c_z * *rep.bound_lsp_squared;
      break;
  }

  rep.tight_sdp = tightnessCertificate(g, ms.Xhat, lsp.x_round, rep.tau_g);
  return rep;
}

std::vector<InequalityCheck> checkBoundInequalities(const WeightedGraph& g,
                                                    const MeasurementSet& ms,
                                                    const SolverResult& er,
                                                    const SolverResult& lsp) {
  const double tau_g = laplacians(g).connectivity;
  const ComplexMatrix delta = ms.Xhat - ms.X;
  const double rdelta_sq =
      weightSqrt(g).cast<Complex>().cwiseProduct(delta).squaredNorm();
  const double wdelta_fro =
      g.weights().cast<Complex>().cwiseProduct(delta).norm();

  const double s_er = alignedEdgeEnergy(g, ms.x, er.z);
  const double s_lsp = alignedEdgeEnergy(g, ms.x, lsp.x_round);
  const double dist_er = phaseDistance(er.x_round, ms.x);
  const double dist_lsp = phaseDistance(lsp.x_round, ms.x);

  auto entry = [](std::string name, double lhs, double rhs) {
    InequalityCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    // Proven inequalities; the slack only absorbs roundoff.
    c.holds = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
    return c;
  };

  std::vector<InequalityCheck> out;
  out.push_back(
      entry("lsp_distance_sq_vs_energy", tau_g * dist_lsp * dist_lsp, s_lsp));
  out.push_back(
      entry("er_distance_sq_vs_energy", tau_g * dist_er * dist_er, 4.0 * s_er));
  out.push_back(
      entry("er_energy_vs_weighted_noise", s_er, er.c_z * er.c_z * rdelta_sq));
  out.push_back(entry("lsp_energy_vs_weighted_noise", s_lsp, 4.0 * rdelta_sq));
  out.push_back(entry("hadamard_root_interpolation", rdelta_sq,
                      wdelta_fro * delta.norm()));
  return out;
}

}  // namespace angsync
