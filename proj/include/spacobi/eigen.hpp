#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// Eigendecomposition of a symmetric matrix: S = Q diag(values) Q^T.
// Eigenvalues are sorted ascending; columns of `vectors` are the
// corresponding eigenvectors.
struct SymmetricEigen {
  std::vector<double> values;
  DenseMatrix vectors;
};

namespace detail {

inline double offdiag_frobenius(const DenseMatrix& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (i != j) acc += s(i, j) * s(i, j);
  return std::sqrt(acc);
}

}  // namespace detail

// Cyclic Jacobi eigensolver for symmetric matrices. Converged when the
// off-diagonal Frobenius norm falls below 1e-12 * ||S||_F; hard cap of
// 100 sweeps. Input must be square and symmetric to within 1e-12
// relative asymmetry.
inline SymmetricEigen eig_symmetric(const DenseMatrix& s_in) {
  const std::size_t n = s_in.rows();
  if (n != s_in.cols()) throw NonSquareError("eig_symmetric: matrix not square");

  const double snorm = s_in.frobenius_norm();
  {
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = s_in(i, j) - s_in(j, i);
        asym += 2.0 * d * d;
      }
    if (std::sqrt(asym) > 1e-12 * std::max(1.0, snorm))
      throw AsymmetricInputError("eig_symmetric: input not symmetric");
  }

  DenseMatrix s = s_in;
  // Average away representational asymmetry so rotations stay exact.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }

  DenseMatrix q = DenseMatrix::identity(n);
  const double tol = 1e-12 * snorm;
  constexpr int kMaxSweeps = 100;

  bool converged = detail::offdiag_frobenius(s) <= tol;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double spr = s(p, r);
        if (spr == 0.0) continue;
        const double tau = (s(r, r) - s(p, p)) / (2.0 * spr);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;

        // Rotate rows/columns p and r of S.
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p), skr = s(k, r);
          s(k, p) = c * skp - sn * skr;
          s(k, r) = sn * skp + c * skr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k), srk = s(r, k);
          s(p, k) = c * spk - sn * srk;
          s(r, k) = sn * spk + c * srk;
        }
        // Accumulate eigenvectors: Q <- Q * J(p, r, theta).
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - sn * qkr;
          q(k, r) = sn * qkp + c * qkr;
        }
      }
    }
    converged = detail::offdiag_frobenius(s) <= tol;
  }
  if (!converged)
    throw NoConvergenceError("eig_symmetric: Jacobi sweep cap reached");

  // Sort eigenpairs ascending; stable so that ties keep column order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s(a, a) < s(b, b); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = s(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

}  // namespace spacobi
