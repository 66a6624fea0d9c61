#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// Clusters and feature support read off a fitted centroid matrix.
struct BiclusterResult {
  std::vector<std::size_t> row_labels;
  std::vector<std::size_t> col_labels;
  std::vector<bool> feature_mask;  // true = feature retained
  DenseMatrix centroids;           // the A-hat the labels were derived from
  double threshold = 0.0;          // absolute merge/zero threshold used
};

namespace detail {

// Union-find with path compression; labels assigned in order of the
// smallest member index so output is deterministic.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> out(parent_.size());
    std::map<std::size_t, std::size_t> id;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t root = find(i);
      auto [it, inserted] = id.try_emplace(root, id.size());
      out[i] = it->second;
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline double binom2(double k) { return k * (k - 1.0) / 2.0; }

}  // namespace detail

// Groups rows (and columns) of A-hat whose pairwise distance falls below
// eps scaled by the matrix magnitude, closing transitively; features
// whose column norm stays below the same threshold are marked dropped.
inline BiclusterResult extract_clusters(const DenseMatrix& a_hat, double eps = 1e-4) {
  if (!(eps > 0.0)) throw BadSpecError("extract_clusters: eps must be > 0");
  const std::size_t n = a_hat.rows(), p = a_hat.cols();
  const double scale =
      1.0 + a_hat.frobenius_norm() / std::sqrt(double(n) * double(p));
  const double thr = eps * scale;

  BiclusterResult res;
  res.centroids = a_hat;
  res.threshold = thr;

  detail::UnionFind rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::sqrt(squared_distance(a_hat.row(i), a_hat.row(j))) <= thr)
        rows.unite(i, j);
  res.row_labels = rows.labels();

  const DenseMatrix at = a_hat.transposed();
  detail::UnionFind cols(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::sqrt(squared_distance(at.row(i), at.row(j))) <= thr)
        cols.unite(i, j);
  res.col_labels = cols.labels();

  res.feature_mask.resize(p);
  for (std::size_t j = 0; j < p; ++j)
    res.feature_mask[j] = norm2(at.row(j)) > thr;
  return res;
}

// Hubert-Arabie adjusted Rand index between two labelings of the same
// entities. Returns 1 when the partitions agree up to relabeling; the
// degenerate zero-denominator case (both partitions trivial) scores 1 if
// the partitions are identical and 0 otherwise.
template <class LabelA, class LabelB>
double adjusted_rand_index(const std::vector<LabelA>& la,
                           const std::vector<LabelB>& lb) {
  if (la.size() != lb.size())
    throw LengthMismatchError("adjusted_rand_index: label lengths differ");
  if (la.size() < 2)
    throw LengthMismatchError("adjusted_rand_index: need >= 2 entities");
  const double total = double(la.size());

  std::map<LabelA, std::size_t> ia;
  std::map<LabelB, std::size_t> ib;
  for (const auto& v : la) ia.try_emplace(v, ia.size());
  for (const auto& v : lb) ib.try_emplace(v, ib.size());

  std::vector<std::vector<double>> cont(ia.size(),
                                        std::vector<double>(ib.size(), 0.0));
  std::vector<double> asum(ia.size(), 0.0), bsum(ib.size(), 0.0);
  for (std::size_t i = 0; i < la.size(); ++i) {
    const std::size_t r = ia[la[i]], c = ib[lb[i]];
    cont[r][c] += 1.0;
    asum[r] += 1.0;
    bsum[c] += 1.0;
  }

  long double index = 0.0L;
  for (const auto& row : cont)
    for (double v : row) index += detail::binom2(v);
  long double sum_a = 0.0L, sum_b = 0.0L;
  for (double v : asum) sum_a += detail::binom2(v);
  for (double v : bsum) sum_b += detail::binom2(v);
  const long double pairs = detail::binom2(total);
  const long double expected = sum_a * sum_b / pairs;
  const long double max_index = 0.5L * (sum_a + sum_b);

  if (max_index == expected) {
    // Both partitions trivial (all-singletons or single cluster).
    bool same = true;
    for (std::size_t i = 0; i < la.size() && same; ++i)
      for (std::size_t j = i + 1; j < la.size() && same; ++j)
        same = (la[i] == la[j]) == (lb[i] == lb[j]);
    return same ? 1.0 : 0.0;
  }
  return double((index - expected) / (max_index - expected));
}

// False negative and false positive rates of a selected-feature mask
// against the informative truth.
inline std::pair<double, double> selection_rates(const std::vector<bool>& mask,
                                                 const std::vector<bool>& truth) {
  if (mask.size() != truth.size())
    throw LengthMismatchError("selection_rates: mask lengths differ");
  std::size_t informative = 0, noise = 0, missed = 0, retained_noise = 0;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (truth[j]) {
      ++informative;
      if (!mask[j]) ++missed;
    } else {
      ++noise;
      if (mask[j]) ++retained_noise;
    }
  }
  if (informative == 0 || noise == 0)
    throw DegenerateTruthError("selection_rates: truth needs both classes");
  return {double(missed) / double(informative),
          double(retained_noise) / double(noise)};
}

// Trapezoidal area under the (FPR, TPR) points of a sparsity path,
// anchored at (0,0) and (1,1).
inline double selection_auc(std::vector<std::pair<double, double>> path) {
  if (path.size() < 2)
    throw EmptyPathError("selection_auc: need >= 2 path points");
  path.emplace_back(0.0, 0.0);
  path.emplace_back(1.0, 1.0);
  std::sort(path.begin(), path.end());
  double area = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double dx = path[i].first - path[i - 1].first;
    area += dx * 0.5 * (path[i].second + path[i - 1].second);
  }
  return area;
}

// Mean centroid row of each row cluster, indexed by label.
inline DenseMatrix row_cluster_centroids(const DenseMatrix& a_hat,
                                         const std::vector<std::size_t>& labels) {
  const std::size_t k =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  DenseMatrix centroids(k, a_hat.cols(), 0.0);
  std::vector<double> count(k, 0.0);
  for (std::size_t i = 0; i < a_hat.rows(); ++i) {
    const std::size_t c = labels[i];
    count[c] += 1.0;
    for (std::size_t j = 0; j < a_hat.cols(); ++j)
      centroids(c, j) += a_hat(i, j);
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < a_hat.cols(); ++j) centroids(c, j) /= count[c];
  return centroids;
}

// Assigns each row of X to the nearest centroid row (Euclidean); ties go
// to the smaller label.
inline std::vector<std::size_t> nearest_centroid_assign(
    const DenseMatrix& x, const DenseMatrix& centroids) {
  if (x.cols() != centroids.cols())
    throw DimensionMismatchError("nearest_centroid_assign: width mismatch");
  std::vector<std::size_t> labels(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(x.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    labels[i] = arg;
  }
  return labels;
}

}  // namespace spacobi
