#include "angsync/graph.hpp"

#include <cmath>

#include "angsync/linalg.hpp"

namespace angsync {

namespace {
constexpr double kEdgeEps = 1e-15;
}

WeightedGraph::WeightedGraph(RealMatrix w) : weights_(std::move(w)) {
  const Eigen::Index d = weights_.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = j + 1; i < d; ++i) {
      if (weights_(i, j) > kEdgeEps) {
        edges_.emplace_back(static_cast<int>(j), static_cast<int>(i));
      } else {
        weights_(i, j) = 0.0;
        weights_(j, i) = 0.0;
      }
    }
  }
}

WeightedGraph WeightedGraph::fromWeights(RealMatrix w) {
  const Eigen::Index d = w.rows();
  if (w.cols() != d || d < 1) {
    throw std::invalid_argument("WeightedGraph: weight matrix must be square");
  }
  double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (w(i, i) != 0.0) {
      throw std::invalid_argument("WeightedGraph: diagonal must be zero");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(w(i, j) - w(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("WeightedGraph: weights must be symmetric");
      }
      if (w(i, j) < 0.0 || w(j, i) < 0.0) {
        throw std::invalid_argument("WeightedGraph: weights must be nonnegative");
      }
      w(j, i) = w(i, j);  // exact symmetry from the lower triangle
    }
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph bandedGraph(int d, int delta) {
  return bandedGraph(d, delta, RealMatrix::Ones(d, d));
}

WeightedGraph bandedGraph(int d, int delta, const RealMatrix& weights) {
  if (d < 1) throw std::invalid_argument("bandedGraph: d must be positive");
  if (delta < 1) throw std::invalid_argument("bandedGraph: delta must be positive");
  if (weights.rows() != d || weights.cols() != d) {
    throw std::invalid_argument("bandedGraph: weight shape mismatch");
  }
  RealMatrix w = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      int gap = i - j;
      int cyclic = std::min(gap, d - gap);
      if (cyclic < delta) {
        w(i, j) = weights(i, j);
        w(j, i) = weights(i, j);
      }
    }
  }
  return WeightedGraph::fromWeights(std::move(w));
}

LaplacianBundle laplacians(const WeightedGraph& g) {
  const Eigen::Index d = g.dim();
  LaplacianBundle out;
  out.degree = g.degrees();
  out.min_degree = out.degree.minCoeff();
  out.max_degree = out.degree.maxCoeff();
  if (out.min_degree <= 0.0) {
    throw GraphError("laplacians: graph has an isolated vertex");
  }

  RealMatrix lap = RealMatrix(out.degree.asDiagonal()) - g.weights();
  RealVector inv_sqrt = out.degree.cwiseSqrt().cwiseInverse();
  RealMatrix norm = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();
  out.combinatorial = HermitianMatrix::fromApprox(lap.cast<Complex>());
  out.normalized = HermitianMatrix::fromApprox(norm.cast<Complex>());

  ComplexVector ones = ComplexVector::Ones(d);
  out.connectivity = secondSmallestEigenvalue(out.combinatorial, ones);
  if (out.connectivity <= 1e-10 * out.max_degree) {
    throw GraphError("laplacians: graph is disconnected");
  }
  ComplexVector sqrt_deg = out.degree.cwiseSqrt().cast<Complex>();
  out.normalized_connectivity =
      secondSmallestEigenvalue(out.normalized, sqrt_deg);
  return out;
}

HermitianMatrix dataLaplacian(const WeightedGraph& g,
                              const ComplexMatrix& phases) {
  const Eigen::Index d = g.dim();
  if (phases.rows() != d || phases.cols() != d) {
    throw std::invalid_argument("dataLaplacian: phase shape mismatch");
  }
  RealMatrix mask = RealMatrix::Zero(d, d);
  for (auto [a, b] : g.edges()) {
    mask(a, b) = 1.0;
    mask(b, a) = 1.0;
    if (std::abs(std::abs(phases(b, a)) - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "dataLaplacian: phases must have unit modulus on edges");
    }
    if (std::abs(phases(a, b) - std::conj(phases(b, a))) > 1e-12) {
      throw std::invalid_argument(
          "dataLaplacian: phases must be conjugate-symmetric");
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (mask(i, j) == 0.0 && std::abs(phases(i, j)) > 1e-12) {
        throw std::invalid_argument(
            "dataLaplacian: phases must vanish off the edge set");
      }
    }
  }
  RealVector deg = g.degrees();
  ComplexMatrix lower = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) lower(i, i) = deg[i];
  for (auto [a, b] : g.edges()) {
    lower(b, a) = -g.weights()(b, a) * phases(b, a);
  }
  return HermitianMatrix::fromLowerTriangle(lower);
}

}  // namespace angsync
