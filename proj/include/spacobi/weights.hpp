#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

enum class Axis { Rows, Cols };

// One fusion edge (a < b) with its nonnegative weight.
struct WeightedEdge {
  std::size_t a;
  std::size_t b;
  double weight;
};

// Complete weight data for a problem instance: all-pairs row edges, all-pairs
// column edges, and the per-feature group-lasso factors, together with the
// sums each group is rescaled to. Zero-weight edges stay in the lists; they
// still enter the quadratic penalty terms (with an identity prox).
struct WeightSet {
  std::vector<WeightedEdge> row_edges;   // pairs over the n observations
  std::vector<WeightedEdge> col_edges;   // pairs over the p features
  std::vector<double> feature_factors;   // u_j, one per feature
  double row_target = 0.0;               // 1/sqrt(p)
  double col_target = 0.0;               // 1/sqrt(n)
  double factor_target = 0.0;            // 1/sqrt(n)
};

namespace detail {

// Pairwise squared distances between entities along an axis, entity i at
// row i of the returned accessor's matrix.
inline DenseMatrix entities_along(const DenseMatrix& x, Axis axis) {
  return axis == Axis::Rows ? x : x.transposed();
}

// Index set of the m nearest neighbors of each entity (self excluded),
// ties broken toward the smaller index.
inline std::vector<std::vector<std::size_t>> nearest_neighbors(
    const DenseMatrix& e, std::size_t m) {
  const std::size_t len = e.rows();
  std::vector<std::vector<std::size_t>> nn(len);
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < len; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < len; ++j) {
      if (j == i) continue;
      cand.emplace_back(squared_distance(e.row(i), e.row(j)), j);
    }
    std::sort(cand.begin(), cand.end());
    nn[i].reserve(m);
    for (std::size_t k = 0; k < m; ++k) nn[i].push_back(cand[k].second);
    std::sort(nn[i].begin(), nn[i].end());
  }
  return nn;
}

inline bool contains(const std::vector<std::size_t>& sorted, std::size_t v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace detail

// Gaussian-kernel weights on the m-nearest-neighbor graph:
// w = exp(-phi d^2) when either endpoint lies in the other's m-NN list
// (union symmetrization), 0 otherwise. Every pair appears in the output.
inline std::vector<WeightedEdge> knn_gaussian_weights(const DenseMatrix& x,
                                                      Axis axis, std::size_t m,
                                                      double phi) {
  const DenseMatrix e = detail::entities_along(x, axis);
  const std::size_t len = e.rows();
  if (len < 2)
    throw BadDimensionError("knn_gaussian_weights: need >= 2 entities");
  if (m < 1 || m >= len)
    throw BadNeighborCountError("knn_gaussian_weights: need 1 <= m < entities");
  if (!(phi >= 0.0))
    throw BadSpecError("knn_gaussian_weights: phi must be >= 0");

  const auto nn = detail::nearest_neighbors(e, m);
  std::vector<WeightedEdge> edges;
  edges.reserve(len * (len - 1) / 2);
  for (std::size_t a = 0; a < len; ++a) {
    for (std::size_t b = a + 1; b < len; ++b) {
      const bool neighbor =
          detail::contains(nn[a], b) || detail::contains(nn[b], a);
      double w = 0.0;
      if (neighbor)
        w = std::exp(-phi * squared_distance(e.row(a), e.row(b)));
      edges.push_back({a, b, w});
    }
  }
  return edges;
}

// Median pairwise squared distance along an axis. Used as the kernel
// bandwidth normalizer (phi_eff = phi / median) so that fixed phi values
// behave consistently across data scales.
inline double median_squared_distance(const DenseMatrix& x, Axis axis) {
  const DenseMatrix e = detail::entities_along(x, axis);
  const std::size_t len = e.rows();
  if (len < 2)
    throw BadDimensionError("median_squared_distance: need >= 2 entities");
  std::vector<double> d2;
  d2.reserve(len * (len - 1) / 2);
  for (std::size_t a = 0; a < len; ++a)
    for (std::size_t b = a + 1; b < len; ++b)
      d2.push_back(squared_distance(e.row(a), e.row(b)));
  std::nth_element(d2.begin(), d2.begin() + d2.size() / 2, d2.end());
  return d2[d2.size() / 2];
}

// Rescales each weight group to its recorded target sum, preserving
// relative proportions.
inline WeightSet rescale(WeightSet w) {
  const auto scale_edges = [](std::vector<WeightedEdge>& edges, double target,
                              const char* what) {
    double sum = 0.0;
    for (const auto& e : edges) sum += e.weight;
    if (!(sum > 0.0))
      throw AllZeroWeightsError(std::string("rescale: all ") + what +
                                " weights are zero");
    const double s = target / sum;
    for (auto& e : edges) e.weight *= s;
  };
  scale_edges(w.row_edges, w.row_target, "row");
  scale_edges(w.col_edges, w.col_target, "column");

  double sum = std::accumulate(w.feature_factors.begin(),
                               w.feature_factors.end(), 0.0);
  if (!(sum > 0.0))
    throw AllZeroWeightsError("rescale: all feature factors are zero");
  const double s = w.factor_target / sum;
  for (double& u : w.feature_factors) u *= s;
  return w;
}

// Assembles a WeightSet with the paper's scale targets: row weights sum
// to 1/sqrt(p), column weights and feature factors to 1/sqrt(n).
inline WeightSet make_weight_set(std::vector<WeightedEdge> row_edges,
                                 std::vector<WeightedEdge> col_edges,
                                 std::vector<double> feature_factors,
                                 std::size_t n, std::size_t p) {
  WeightSet w;
  w.row_edges = std::move(row_edges);
  w.col_edges = std::move(col_edges);
  w.feature_factors = std::move(feature_factors);
  w.row_target = 1.0 / std::sqrt(double(p));
  w.col_target = 1.0 / std::sqrt(double(n));
  w.factor_target = 1.0 / std::sqrt(double(n));
  return rescale(std::move(w));
}

}  // namespace spacobi
