#pragma once

#include <utility>
#include <vector>

#include "angsync/types.hpp"

namespace angsync {

/// Undirected weighted graph on vertices 0..d-1: a symmetric nonnegative
/// weight matrix with zero diagonal plus the list of positive-weight edges.
class WeightedGraph {
 public:
  /// Validates and adopts a weight matrix. Entries below 1e-15 in magnitude
  /// count as absent edges.
  static WeightedGraph fromWeights(RealMatrix w);

  Eigen::Index dim() const { return weights_.rows(); }
  const RealMatrix& weights() const { return weights_; }
  /// Edges as (a, b) pairs with a < b.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  RealVector degrees() const { return weights_.rowwise().sum(); }
  double maxDegree() const { return degrees().maxCoeff(); }
  double minDegree() const { return degrees().minCoeff(); }

 private:
  explicit WeightedGraph(RealMatrix w);
  RealMatrix weights_;
  std::vector<std::pair<int, int>> edges_;
};

/// Banded circulant pattern: (l, j) is an edge when the cyclic index distance
/// min(|l-j|, d-|l-j|) is positive and strictly below delta. Unit weights.
WeightedGraph bandedGraph(int d, int delta);

/// Same pattern, weighted: entries of `weights` off the pattern are masked
/// to zero, entries on it are kept (and must be symmetric and nonnegative).
WeightedGraph bandedGraph(int d, int delta, const RealMatrix& weights);

/// Combinatorial and degree-normalized Laplacians of a connected graph with
/// their algebraic connectivities.
struct LaplacianBundle {
  HermitianMatrix combinatorial;  // D - W
  HermitianMatrix normalized;     // D^{-1/2} (D - W) D^{-1/2}
  RealVector degree;
  double connectivity = 0.0;             // second eigenvalue of D - W
  double normalized_connectivity = 0.0;  // second eigenvalue of the normalized form
  double min_degree = 0.0;
  double max_degree = 0.0;
};

/// Throws GraphError on an isolated vertex or a disconnected graph.
LaplacianBundle laplacians(const WeightedGraph& g);

/// Data Laplacian D - W∘P for a relative-phase matrix P supported exactly on
/// the edge set: unit modulus on edges, conjugate-symmetric, zero elsewhere.
HermitianMatrix dataLaplacian(const WeightedGraph& g, const ComplexMatrix& phases);

}  // namespace angsync
