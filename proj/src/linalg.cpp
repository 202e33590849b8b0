#include "angsync/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace angsync {

namespace {

constexpr double kAsymTol = 1e-9;

ComplexVector randomUnitVector(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double re = gauss(rng);
    double im = gauss(rng);
    v[i] = Complex(re, im);
  }
  double n = v.norm();
  if (n > 0) v /= n;
  return v;
}

// Two-pass classical Gram-Schmidt against the deflation set and the first
// `n` columns of q, accumulating the basis coefficients (used for Lanczos
// recurrence entries). The deflation purge runs first within each pass: the
// basis columns carry O(eps) components along the deflated directions, so a
// basis pass reinjects them, and for a smallest-end search those components
// would otherwise grow geometrically until a ghost copy of a deflated
// eigenvalue invades the projected spectrum.
RealVector orthogonalizeAgainst(const std::vector<ComplexVector>& defl,
                                const ComplexMatrix& q, Eigen::Index n,
                                ComplexVector& w) {
  RealVector re_coeffs = RealVector::Zero(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : defl) w -= u.dot(w) * u;
    if (n > 0) {
      ComplexVector c = q.leftCols(n).adjoint() * w;
      w.noalias() -= q.leftCols(n) * c;
      for (Eigen::Index i = 0; i < n; ++i) re_coeffs[i] += c[i].real();
    }
  }
  return re_coeffs;
}

void orthogonalizeAgainstSet(const std::vector<ComplexVector>& q,
                             ComplexVector& w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : q) w -= u.dot(w) * u;
  }
}

}  // namespace

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hadamard: shape mismatch");
  }
  return a.cwiseProduct(b);
}

Complex sgn(Complex alpha) {
  double m = std::abs(alpha);
  if (m == 0.0) return Complex(0.0, 0.0);
  return alpha / m;
}

ComplexVector entrywiseSgn(const ComplexVector& v) {
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = sgn(v[i]);
  return out;
}

ComplexMatrix entrywiseSgn(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = sgn(a(i, j));
  }
  return out;
}

HermitianMatrix HermitianMatrix::fromApprox(const ComplexMatrix& a,
                                            double tol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
  double scale = std::max(1.0, a.norm());
  double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw std::invalid_argument(
        "HermitianMatrix: input is not Hermitian within tolerance");
  }
  ComplexMatrix sym = 0.5 * (a + a.adjoint().eval());
  // Exact-real diagonal; the average above can leave ±0 imaginary parts.
  for (Eigen::Index i = 0; i < sym.rows(); ++i) {
    sym(i, i) = Complex(sym(i, i).real(), 0.0);
  }
  return HermitianMatrix(std::move(sym));
}

HermitianMatrix HermitianMatrix::fromLowerTriangle(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
  double scale = std::max(1.0, a.norm());
  ComplexMatrix sym(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (std::abs(a(i, i).imag()) > kAsymTol * scale) {
      throw std::invalid_argument(
          "HermitianMatrix: diagonal has a non-real entry");
    }
    sym(i, i) = Complex(a(i, i).real(), 0.0);
    for (Eigen::Index j = 0; j < i; ++j) {
      sym(i, j) = a(i, j);
      sym(j, i) = std::conj(a(i, j));
    }
  }
  return HermitianMatrix(std::move(sym));
}

HermitianOperator denseOperator(const HermitianMatrix& a) {
  HermitianOperator op;
  op.dim = a.dim();
  op.norm_bound = gershgorinBound(a);
  const ComplexMatrix& m = a.mat();
  op.apply = [&m](const ComplexVector& in, ComplexVector& out) {
    out.noalias() = m * in;
  };
  return op;
}

double gershgorinBound(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return a.mat().cwiseAbs().rowwise().sum().maxCoeff();
}

EigenPair extremalEigenpair(const HermitianOperator& op, SpectrumEnd end,
                            const std::vector<ComplexVector>& deflate,
                            const EigsOptions& opts) {
  const Eigen::Index d = op.dim;
  if (d <= 0) throw std::invalid_argument("extremalEigenpair: empty operator");

  // Orthonormal copy of the deflation set; near-dependent vectors dropped.
  std::vector<ComplexVector> defl;
  defl.reserve(deflate.size());
  for (const auto& raw : deflate) {
    if (raw.size() != d) {
      throw std::invalid_argument("extremalEigenpair: deflation size mismatch");
    }
    ComplexVector u = raw;
    orthogonalizeAgainstSet(defl, u);
    double n = u.norm();
    if (n > 1e-12) defl.push_back(u / n);
  }
  const Eigen::Index eff_dim = d - static_cast<Eigen::Index>(defl.size());
  if (eff_dim <= 0) {
    throw std::invalid_argument(
        "extremalEigenpair: deflation space exhausts the operator");
  }

  const double scale = std::max(1.0, op.norm_bound);
  const double target = opts.tol * scale;
  const double breakdown_eps = 1e-13 * scale;
  const int max_matvecs =
      opts.max_matvecs > 0 ? opts.max_matvecs : static_cast<int>(100 * d);

  const Eigen::Index m_cap = std::min<Eigen::Index>(eff_dim, 48);
  const Eigen::Index n_keep =
      std::max<Eigen::Index>(1, std::min<Eigen::Index>(16, m_cap / 3));

  std::mt19937_64 rng(opts.seed);
  ComplexMatrix basis(d, m_cap);
  RealMatrix proj = RealMatrix::Zero(m_cap, m_cap);
  ComplexVector w(d), av(d);
  int matvecs = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();

  // Fresh start vector in the orthogonal complement of the deflation set.
  {
    ComplexVector v0 = randomUnitVector(d, rng);
    orthogonalizeAgainstSet(defl, v0);
    double n = v0.norm();
    while (n <= 1e-8) {
      v0 = randomUnitVector(d, rng);
      orthogonalizeAgainstSet(defl, v0);
      n = v0.norm();
    }
    basis.col(0) = v0 / n;
  }

  Eigen::Index sz = 1;       // current basis size
  double beta = 0.0;         // coupling norm to the prospective next vector
  bool have_next = false;    // w/beta is a valid next basis vector

  Eigen::SelfAdjointEigenSolver<RealMatrix> small;

  auto wantedIndex = [&](Eigen::Index n_ritz) {
    return end == SpectrumEnd::Smallest ? Eigen::Index{0} : n_ritz - 1;
  };

  // Explicit verification: assemble the Ritz vector, recompute the Rayleigh
  // quotient and true residual. Costs one matvec.
  auto verify = [&](const RealVector& y, double& theta_out,
                    ComplexVector& x_out, double& resid_out) {
    ComplexVector x = basis.leftCols(sz) * y.cast<Complex>();
    orthogonalizeAgainstSet(defl, x);
    double n = x.norm();
    if (n <= 1e-12) return false;
    x /= n;
    op.apply(x, av);
    ++matvecs;
    double theta = x.dot(av).real();  // Rayleigh quotient x^*(Ax)
    double resid = (av - theta * x).norm();
    theta_out = theta;
    x_out = std::move(x);
    resid_out = resid;
    last_residual = resid;
    best_residual = std::min(best_residual, resid);
    return resid <= target;
  };

  while (true) {
    // Expand one Lanczos step from the last basis column.
    op.apply(basis.col(sz - 1), w);
    ++matvecs;
    RealVector coeffs = orthogonalizeAgainst(defl, basis, sz, w);
    proj(sz - 1, sz - 1) = coeffs[sz - 1];
    beta = w.norm();
    have_next = beta > breakdown_eps;

    // Ritz extraction on the projected matrix.
    small.compute(proj.topLeftCorner(sz, sz));
    const RealVector& theta = small.eigenvalues();
    const RealMatrix& y = small.eigenvectors();
    Eigen::Index idx = wantedIndex(sz);
    double est = have_next ? std::abs(beta * y(sz - 1, idx)) : 0.0;
    last_residual = est;
    if (have_next) best_residual = std::min(best_residual, est);

    bool saturated = sz == eff_dim;
    if (est <= target || saturated || !have_next) {
      double th;
      ComplexVector x;
      double resid;
      if (verify(y.col(idx), th, x, resid)) {
        return EigenPair{th, std::move(x), resid, matvecs};
      }
      if (saturated) {
        // The projected problem is exact here; a failed explicit check means
        // the tolerance is numerically unreachable.
        throw ConvergenceError(
            "extremalEigenpair: residual floor above tolerance",
            last_residual);
      }
      if (!have_next) {
        // Invariant subspace that misses the wanted eigenpair: continue the
        // search in the orthogonal complement.
        ComplexVector fresh = randomUnitVector(d, rng);
        orthogonalizeAgainst(defl, basis, sz, fresh);
        double n = fresh.norm();
        if (n > 1e-8 && sz < m_cap) {
          basis.col(sz) = fresh / n;
          // No coupling entry: the closed subspace is invariant, so the
          // projected matrix stays symmetric block-diagonal.
          ++sz;
          continue;
        }
      }
    }

    if (matvecs >= max_matvecs) {
      throw ConvergenceError(
          "extremalEigenpair: matvec budget exhausted",
          std::isfinite(best_residual) ? best_residual : last_residual);
    }

    if (sz < m_cap && have_next) {
      proj(sz - 1, sz) = beta;
      proj(sz, sz - 1) = beta;
      basis.col(sz) = w / beta;
      ++sz;
      continue;
    }

    if (!have_next) {
      // Breakdown at full subspace without convergence: restart thick, the
      // continuation slot is filled with a fresh direction below.
    }

    // Thick restart: keep n_keep Ritz pairs nearest the wanted end.
    Eigen::Index k = std::min(n_keep, sz - 1);
    if (k < 1) k = 1;
    RealMatrix sel(sz, k);
    RealVector kept(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      Eigen::Index src = end == SpectrumEnd::Smallest ? i : sz - 1 - i;
      sel.col(i) = y.col(src);
      kept[i] = theta[src];
    }
    ComplexMatrix newbasis = basis.leftCols(sz) * sel.cast<Complex>();
    basis.leftCols(k) = newbasis;
    proj.setZero();
    for (Eigen::Index i = 0; i < k; ++i) proj(i, i) = kept[i];

    if (have_next) {
      ComplexVector vnext = w / beta;
      for (Eigen::Index i = 0; i < k; ++i) {
        double s = beta * sel(sz - 1, i);
        proj(i, k) = s;
        proj(k, i) = s;
      }
      basis.col(k) = vnext;
    } else {
      ComplexVector fresh = randomUnitVector(d, rng);
      orthogonalizeAgainst(defl, basis, k, fresh);
      double n = fresh.norm();
      while (n <= 1e-8) {
        fresh = randomUnitVector(d, rng);
        orthogonalizeAgainst(defl, basis, k, fresh);
        n = fresh.norm();
      }
      basis.col(k) = fresh / n;
    }
    sz = k + 1;
  }
}

EigenPair smallestEigenpair(const HermitianMatrix& a, double known_upper,
                            const EigsOptions& opts) {
  HermitianOperator op = denseOperator(a);
  op.norm_bound = std::max(std::abs(known_upper), op.norm_bound);
  return extremalEigenpair(op, SpectrumEnd::Smallest, {}, opts);
}

double secondSmallestEigenvalue(const HermitianMatrix& a,
                                const ComplexVector& null_vector,
                                const EigsOptions& opts) {
  if (null_vector.size() != a.dim()) {
    throw std::invalid_argument(
        "secondSmallestEigenvalue: null vector size mismatch");
  }
  double nn = null_vector.norm();
  if (nn <= 0) {
    throw std::invalid_argument("secondSmallestEigenvalue: zero null vector");
  }
  ComplexVector u = null_vector / nn;
  double scale = std::max(1.0, gershgorinBound(a));
  double resid = (a.mat() * u).norm();
  if (resid > 1e-8 * scale) {
    throw std::invalid_argument(
        "secondSmallestEigenvalue: supplied vector is not in the null space");
  }
  HermitianOperator op = denseOperator(a);
  EigenPair p = extremalEigenpair(op, SpectrumEnd::Smallest, {u}, opts);
  return p.value;
}

EigenPair leadingEigenpair(const HermitianMatrix& a, const EigsOptions& opts) {
  return extremalEigenpair(denseOperator(a), SpectrumEnd::Largest, {}, opts);
}

double spectralNorm(const HermitianMatrix& a, const EigsOptions& opts) {
  if (a.dim() == 0) return 0.0;
  HermitianOperator op = denseOperator(a);
  EigenPair lo = extremalEigenpair(op, SpectrumEnd::Smallest, {}, opts);
  EigenPair hi = extremalEigenpair(op, SpectrumEnd::Largest, {}, opts);
  return std::max(std::abs(lo.value), std::abs(hi.value));
}

}  // namespace angsync
