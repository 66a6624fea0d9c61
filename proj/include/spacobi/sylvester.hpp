#pragma once

#include <cmath>
#include <utility>

#include "spacobi/eigen.hpp"
#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// Smallest admissible eigenvalue-pair sum; below this the entrywise
// division in the spectral solution is numerically meaningless.
inline constexpr double kSingularPairThreshold = 1e-12;

// Coefficient matrices of the centroid update: for all-pairs edge sets,
//   M = (1 + n nu1) I_n - nu1 1 1^T
//   N = (p nu2 + nu3) I_p - nu2 1 1^T
// M is positive definite with eigenvalues {1, 1+n*nu1 (n-1 times)};
// N is positive semi-definite with eigenvalues {nu3, p*nu2+nu3 (p-1 times)}.
inline std::pair<DenseMatrix, DenseMatrix> build_mn(std::size_t n, std::size_t p,
                                                    double nu1, double nu2,
                                                    double nu3) {
  if (n < 2 || p < 2) throw BadDimensionError("build_mn: need n, p >= 2");
  if (!(nu1 > 0.0) || !(nu2 > 0.0) || !(nu3 >= 0.0))
    throw BadStepSizeError("build_mn: need nu1, nu2 > 0 and nu3 >= 0");

  DenseMatrix m(n, n, -nu1);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0 + nu1 * double(n) - nu1;
  DenseMatrix nn(p, p, -nu2);
  for (std::size_t j = 0; j < p; ++j)
    nn(j, j) = nu2 * double(p) - nu2 + nu3;
  return {std::move(m), std::move(nn)};
}

// Solve M A + A N = H through precomputed spectral factors of M and N.
// With M = T diag(lambda) T^T and N = S diag(mu) S^T, the transformed
// right-hand side T^T H S is divided entrywise by lambda_i + mu_j and
// rotated back.
inline DenseMatrix solve_sylvester(const SymmetricEigen& em,
                                   const SymmetricEigen& en,
                                   const DenseMatrix& h) {
  const std::size_t n = em.vectors.rows();
  const std::size_t p = en.vectors.rows();
  if (h.rows() != n || h.cols() != p)
    throw DimensionMismatchError("solve_sylvester: H shape mismatch");
  if (em.values.empty() || en.values.empty())
    throw DimensionMismatchError("solve_sylvester: empty factorization");
  if (em.values.front() + en.values.front() <= kSingularPairThreshold)
    throw SingularPairError("solve_sylvester: eigenvalue pair sum ~ 0");

  DenseMatrix ht = matmul(matmul(em.vectors.transposed(), h), en.vectors);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      ht(i, j) /= em.values[i] + en.values[j];
  return matmul(matmul(em.vectors, ht), en.vectors.transposed());
}

// General spectral solve: diagonalizes both coefficient matrices.
inline DenseMatrix solve_sylvester(const DenseMatrix& m, const DenseMatrix& n,
                                   const DenseMatrix& h) {
  if (m.rows() != m.cols()) throw NonSquareError("solve_sylvester: M not square");
  if (n.rows() != n.cols()) throw NonSquareError("solve_sylvester: N not square");
  if (h.rows() != m.rows() || h.cols() != n.rows())
    throw DimensionMismatchError("solve_sylvester: H shape mismatch");
  return solve_sylvester(eig_symmetric(m), eig_symmetric(n), h);
}

// Fast solver for the build_mn pair. Both matrices are diagonal in any
// orthonormal basis whose first vector is 1/sqrt(dim), so the solution
// splits into four spectral blocks obtained from row means, column
// means and the grand mean of H:
//   A = H00/(1+n nu1+p nu2+nu3) + H01/(1+n nu1+nu3)
//     + H10/(1+p nu2+nu3)       + H11/(1+nu3)
// where H11 is the grand-mean component, H10/H01 the centered column/row
// mean components and H00 the doubly centered remainder.
class FusionSylvesterSolver {
 public:
  FusionSylvesterSolver(std::size_t n, std::size_t p, double nu1, double nu2,
                        double nu3)
      : n_(n), p_(p) {
    if (n < 2 || p < 2)
      throw BadDimensionError("FusionSylvesterSolver: need n, p >= 2");
    if (!(nu1 > 0.0) || !(nu2 > 0.0) || !(nu3 >= 0.0))
      throw BadStepSizeError("FusionSylvesterSolver: bad step sizes");
    const double a = 1.0 + double(n) * nu1;   // M eigenvalue off the ones-vector
    const double b = double(p) * nu2 + nu3;   // N eigenvalue off the ones-vector
    d00_ = a + b;
    d01_ = a + nu3;
    d10_ = 1.0 + b;
    d11_ = 1.0 + nu3;
    row_mean_.resize(n);
    col_mean_.resize(p);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }

  void solve_into(const DenseMatrix& h, DenseMatrix& a) {
    if (h.rows() != n_ || h.cols() != p_)
      throw DimensionMismatchError("FusionSylvesterSolver: H shape mismatch");
    if (!a.same_shape(h))
      throw DimensionMismatchError("FusionSylvesterSolver: A shape mismatch");

    double grand = 0.0;
    std::fill(col_mean_.begin(), col_mean_.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* hrow = h.row(i).data();
      double rsum = 0.0;
      for (std::size_t j = 0; j < p_; ++j) {
        rsum += hrow[j];
        col_mean_[j] += hrow[j];
      }
      row_mean_[i] = rsum / double(p_);
      grand += rsum;
    }
    for (double& c : col_mean_) c /= double(n_);
    grand /= double(n_) * double(p_);

    const double w00 = 1.0 / d00_, w01 = 1.0 / d01_;
    const double w10 = 1.0 / d10_, w11 = 1.0 / d11_;
    for (std::size_t i = 0; i < n_; ++i) {
      const double rm = row_mean_[i];
      const double* hrow = h.row(i).data();
      double* arow = &a(i, 0);
      for (std::size_t j = 0; j < p_; ++j) {
        const double cm = col_mean_[j];
        const double h00 = hrow[j] - rm - cm + grand;
        arow[j] = h00 * w00 + (rm - grand) * w01 + (cm - grand) * w10 +
                  grand * w11;
      }
    }
  }

  DenseMatrix solve(const DenseMatrix& h) {
    DenseMatrix a(h.rows(), h.cols());
    solve_into(h, a);
    return a;
  }

 private:
  std::size_t n_, p_;
  double d00_, d01_, d10_, d11_;
  std::vector<double> row_mean_, col_mean_;
};

}  // namespace spacobi
