#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace angsync {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Thrown when an iterative solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// Thrown for structurally unusable graphs (isolated vertices, disconnected).
class GraphError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense d×d complex Hermitian matrix. Construction symmetrizes, so
/// `mat() - mat().adjoint()` is exactly zero entrywise.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Accepts a matrix that is Hermitian up to `tol` (relative to its largest
  /// entry) and stores the exact Hermitian part (A + A*)/2.
  static HermitianMatrix fromApprox(const ComplexMatrix& a, double tol = 1e-9);

  /// Trusts the caller: copies the lower triangle and mirrors it.
  static HermitianMatrix fromLowerTriangle(const ComplexMatrix& a);

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

  double frobeniusNorm() const { return mat_.norm(); }

 private:
  explicit HermitianMatrix(ComplexMatrix m) : mat_(std::move(m)) {}

  ComplexMatrix mat_;
};

struct EigenPair {
  double value = 0.0;
  ComplexVector vector;  // unit 2-norm
  double residual = 0.0;
  int iterations = 0;
};

}  // namespace angsync
