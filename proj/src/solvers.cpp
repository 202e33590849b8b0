#include "angsync/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "angsync/linalg.hpp"

namespace angsync {

namespace {

// Data Laplacian as edge arrays, so one matvec costs O(|E|) instead of O(d^2).
struct EdgeData {
  Eigen::Index dim = 0;
  RealVector diag;
  std::vector<int> tail, head;       // edge (a, b) with a < b
  std::vector<Complex> coef;         // lower-triangle entry L(b, a)
  double norm_bound = 0.0;

  void apply(const ComplexVector& in, ComplexVector& out) const {
    out.resize(dim);
    out.real() = diag.cwiseProduct(in.real());
    out.imag() = diag.cwiseProduct(in.imag());
    for (std::size_t k = 0; k < coef.size(); ++k) {
      const int a = tail[k], b = head[k];
      out[b] += coef[k] * in[a];
      out[a] += std::conj(coef[k]) * in[b];
    }
  }

  double quadraticForm(const ComplexVector& v) const {
    ComplexVector buf(dim);
    apply(v, buf);
    return v.dot(buf).real();
  }
};

void validateEdgePhases(const WeightedGraph& g, const ComplexMatrix& xhat) {
  if (xhat.rows() != g.dim() || xhat.cols() != g.dim()) {
    throw std::invalid_argument("solver: phase matrix shape mismatch");
  }
  for (auto [a, b] : g.edges()) {
    if (std::abs(std::abs(xhat(b, a)) - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "solver: phases must have unit modulus on edges");
    }
    if (std::abs(xhat(a, b) - std::conj(xhat(b, a))) > 1e-12) {
      throw std::invalid_argument(
          "solver: phases must be conjugate-symmetric on edges");
    }
  }
}

std::shared_ptr<EdgeData> makeEdgeData(const WeightedGraph& g,
                                       const ComplexMatrix& xhat,
                                       bool normalized) {
  validateEdgePhases(g, xhat);
  auto data = std::make_shared<EdgeData>();
  data->dim = g.dim();
  RealVector deg = g.degrees();
  if (deg.minCoeff() <= 0) {
    throw GraphError("solver: graph has an isolated vertex");
  }
  if (normalized) {
    data->diag = RealVector::Ones(g.dim());
    data->norm_bound = 2.0;
  } else {
    data->diag = deg;
    data->norm_bound = 2.0 * deg.maxCoeff();
  }
  data->tail.reserve(g.edges().size());
  data->head.reserve(g.edges().size());
  data->coef.reserve(g.edges().size());
  for (auto [a, b] : g.edges()) {
    double w = g.weights()(b, a);
    if (normalized) w /= std::sqrt(deg[a] * deg[b]);
    data->tail.push_back(a);
    data->head.push_back(b);
    data->coef.push_back(-w * xhat(b, a));
  }
  return data;
}

HermitianOperator asOperator(const std::shared_ptr<EdgeData>& data) {
  HermitianOperator op;
  op.dim = data->dim;
  op.norm_bound = data->norm_bound;
  op.apply = [data](const ComplexVector& in, ComplexVector& out) {
    data->apply(in, out);
  };
  return op;
}

SolverResult eigenvectorRelaxation(const WeightedGraph& g,
                                   const ComplexMatrix& xhat, bool normalized,
                                   const SolveOptions& opts) {
  auto data = makeEdgeData(g, xhat, normalized);
  EigsOptions eigs;
  eigs.seed = opts.seed;
  EigenPair pair = extremalEigenpair(asOperator(data), SpectrumEnd::Smallest,
                                     {}, eigs);
  const double d = static_cast<double>(g.dim());
  SolverResult res;
  res.z = canonicalizeGlobalPhase(std::sqrt(d) * pair.vector);
  res.x_round = entrywiseSgn(res.z);
  res.objective = data->quadraticForm(res.z);
  res.iterations = pair.iterations;
  res.converged = true;
  res.sup_norm_z = res.z.lpNorm<Eigen::Infinity>();
  res.c_z = std::sqrt(2.0 + 2.0 * res.sup_norm_z * res.sup_norm_z);
  return res;
}

}  // namespace

ComplexVector canonicalizeGlobalPhase(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      return v * std::conj(sgn(v[i]));
    }
  }
  return v;
}

SolverResult solveEr(const WeightedGraph& g, const ComplexMatrix& xhat,
                     const SolveOptions& opts) {
  return eigenvectorRelaxation(g, xhat, false, opts);
}

SolverResult solveErNormalized(const WeightedGraph& g,
                               const ComplexMatrix& xhat,
                               const SolveOptions& opts) {
  return eigenvectorRelaxation(g, xhat, true, opts);
}

SolverResult solveLsp(const WeightedGraph& g, const ComplexMatrix& xhat,
                      const std::optional<ComplexVector>& init,
                      const SolveOptions& opts) {
  auto data = makeEdgeData(g, xhat, false);
  const Eigen::Index d = g.dim();
  const double mu = 2.0 * g.degrees().maxCoeff();

  ComplexVector u;
  if (init) {
    if (init->size() != d) {
      throw std::invalid_argument("solveLsp: init size mismatch");
    }
    u = entrywiseSgn(*init);
  } else {
    u = solveEr(g, xhat, opts).x_round;
  }

  const int max_iters = 10000;
  ComplexVector lu(d);
  data->apply(u, lu);
  double obj = u.dot(lu).real();
  SolverResult res;
  res.converged = false;
  int iter = 0;
  while (iter < max_iters) {
    const ComplexVector shifted = mu * u - lu;
    ComplexVector next = entrywiseSgn(shifted);
    ++iter;
    const bool fixed_point = (next.array() == u.array()).all();
    u = std::move(next);
    data->apply(u, lu);
    double obj_next = u.dot(lu).real();
    double decrease = obj - obj_next;
    if (decrease < 0) {
      res.max_objective_increase =
          std::max(res.max_objective_increase, -decrease);
    }
    obj = obj_next;
    if (fixed_point || decrease <= 1e-12 * std::abs(obj)) {
      res.converged = true;
      break;
    }
  }

  ComplexVector canon = canonicalizeGlobalPhase(u);
  res.z = canon;
  res.x_round = std::move(canon);
  res.objective = obj;
  res.iterations = iter;
  res.sup_norm_z = res.z.lpNorm<Eigen::Infinity>();
  res.c_z = std::sqrt(2.0 + 2.0 * res.sup_norm_z * res.sup_norm_z);
  return res;
}

SdpResult solveSdp(const WeightedGraph& g, const ComplexMatrix& xhat,
                   const SolveOptions& opts) {
  auto data = makeEdgeData(g, xhat, false);
  const Eigen::Index d = g.dim();
  const Eigen::Index p =
      static_cast<Eigen::Index>(std::ceil(std::sqrt(2.0 * d))) + 1;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix v(d, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) v(r, c) = Complex(gauss(rng), gauss(rng));
  }
  for (Eigen::Index r = 0; r < d; ++r) v.row(r).normalize();

  auto applyToColumns = [&](const ComplexMatrix& in, ComplexMatrix& out) {
    ComplexVector col(d), res(d);
    out.resize(d, p);
    for (Eigen::Index c = 0; c < p; ++c) {
      col = in.col(c);
      data->apply(col, res);
      out.col(c) = res;
    }
  };

  auto objectiveOf = [&](const ComplexMatrix& point, ComplexMatrix& lv) {
    applyToColumns(point, lv);
    return point.conjugate().cwiseProduct(lv).sum().real();
  };

  auto riemannianGrad = [&](const ComplexMatrix& point,
                            const ComplexMatrix& lv) {
    ComplexMatrix grad = 2.0 * lv;
    for (Eigen::Index r = 0; r < d; ++r) {
      double radial = point.row(r).conjugate().cwiseProduct(grad.row(r))
                          .sum().real();
      grad.row(r) -= radial * point.row(r);
    }
    return grad;
  };

  // Descend in the degree-induced metric: per-vertex curvature of the
  // objective scales with the vertex degree, which spans several decades
  // for the squared-amplitude scheme, and an unpreconditioned step stalls
  // on the weakly coupled vertices. Scaling row r by 1/deg_r bounds the
  // preconditioned curvature like a normalized Laplacian.
  const RealVector inv_deg = g.degrees().cwiseMax(1e-300).cwiseInverse();
  auto preconditioned = [&](const ComplexMatrix& grad_mat) {
    ComplexMatrix dir = grad_mat;
    for (Eigen::Index r = 0; r < d; ++r) dir.row(r) *= inv_deg[r];
    return dir;
  };

  auto retract = [&](ComplexMatrix point) {
    for (Eigen::Index r = 0; r < d; ++r) {
      double n = point.row(r).norm();
      if (n > 1e-300) {
        point.row(r) /= n;
      } else {
        point.row(r).setZero();
        point(r, 0) = Complex(1.0, 0.0);
      }
    }
    return point;
  };

  ComplexMatrix lv;
  double f = objectiveOf(v, lv);
  ComplexMatrix grad = riemannianGrad(v, lv);
  ComplexMatrix dir = preconditioned(grad);
  double grad_norm = grad.norm();
  auto gradTol = [&]() { return 1e-9 * std::max(1.0, std::abs(f)); };

  const int max_iters = 20000;
  double step = 0.25;  // preconditioned curvature is at most 4
  ComplexMatrix prev_v, prev_grad;
  SdpResult out;
  out.converged = true;
  int iter = 0;

  // The objective is a sum of edge terms of total magnitude ~ sum of
  // degrees, so differences below eps_f are not representable; a line
  // search that stalls while demanding less than that sits at the
  // numerical floor, not at a genuine failure.
  const double eps_f = 8.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(f), g.degrees().sum()});
  bool floor_stall = false;

  while (grad_norm > gradTol() && iter < max_iters) {
    if (iter > 0) {
      // Barzilai-Borwein step from the previous displacement pair, taken
      // in the degree metric (the D^{1/2}/D^{-1/2} factors cancel in sy).
      ComplexMatrix s = v - prev_v;
      ComplexMatrix y = grad - prev_grad;
      double sy = s.conjugate().cwiseProduct(y).sum().real();
      double ss = 0.0;
      for (Eigen::Index r = 0; r < d; ++r) {
        ss += s.row(r).squaredNorm() / inv_deg[r];
      }
      if (sy > 1e-300) step = std::clamp(ss / sy, 1e-12, 1e3);
    }
    prev_v = v;
    prev_grad = grad;

    // Expected decrease along -dir is <grad, dir>, positive by construction.
    const double g2 = grad.conjugate().cwiseProduct(dir).sum().real();
    const double entry_step = step;
    bool stepped = false;
    for (int bt = 0; bt < 50; ++bt) {
      ComplexMatrix cand = retract(prev_v - step * dir);
      ComplexMatrix cand_lv;
      double f_cand = objectiveOf(cand, cand_lv);
      if (f_cand <= f - 1e-4 * step * g2) {
        v = std::move(cand);
        lv = std::move(cand_lv);
        f = f_cand;
        stepped = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!stepped) {
      floor_stall = 1e-4 * entry_step * g2 <= eps_f;
      break;
    }
    grad = riemannianGrad(v, lv);
    dir = preconditioned(grad);
    grad_norm = grad.norm();
  }
  out.converged = grad_norm <= gradTol() || floor_stall;
  out.iterations = iter;
  out.gradient_norm = grad_norm;
  out.objective = f;

  // Spectrum of Z = VV* from the p x p Gram matrix V*V.
  ComplexMatrix gram = v.adjoint() * v;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  const RealVector& evals = es.eigenvalues();
  double lead = evals[p - 1];
  int rank = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (evals[i] > 1e-6 * lead) ++rank;
  }
  out.numerical_rank = std::max(rank, 1);

  ComplexVector leading = v * es.eigenvectors().col(p - 1);
  leading.normalize();
  out.x_round = canonicalizeGlobalPhase(entrywiseSgn(leading));
  out.Z = HermitianMatrix::fromApprox(v * v.adjoint());
  return out;
}

TightnessCertificate tightnessCertificate(const WeightedGraph& g,
                                          const ComplexMatrix& xhat,
                                          const ComplexVector& x_cand,
                                          double tau_g) {
  validateEdgePhases(g, xhat);
  const Eigen::Index d = g.dim();
  if (x_cand.size() != d) {
    throw std::invalid_argument("tightnessCertificate: candidate size mismatch");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(std::abs(x_cand[i]) - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "tightnessCertificate: candidate must be unit-modulus");
    }
  }
  ComplexMatrix lower = ComplexMatrix::Zero(d, d);
  for (auto [a, b] : g.edges()) {
    lower(b, a) =
        g.weights()(b, a) * (xhat(b, a) - x_cand[b] * std::conj(x_cand[a]));
  }
  HermitianMatrix delta = HermitianMatrix::fromLowerTriangle(lower);
  TightnessCertificate cert;
  cert.spectral_norm = spectralNorm(delta);
  cert.threshold = tau_g / (1.0 + std::sqrt(static_cast<double>(d)));
  cert.margin = cert.threshold - cert.spectral_norm;
  cert.holds = cert.spectral_norm < cert.threshold;
  return cert;
}

TightnessCertificate tightnessCertificate(const WeightedGraph& g,
                                          const ComplexMatrix& xhat,
                                          const ComplexVector& x_cand) {
  return tightnessCertificate(g, xhat, x_cand, laplacians(g).connectivity);
}

}  // namespace angsync
