#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"
#include "spacobi/rng.hpp"

namespace spacobi {

// Checkerboard benchmark parameters. The first p_true features are
// informative (block-constant means over a K x R grid); the remaining
// features are pure noise.
struct SimSpec {
  std::size_t n = 60;
  std::size_t p = 200;
  std::size_t p_true = 40;
  std::size_t k_row_clusters = 4;
  std::size_t r_col_clusters = 4;
  int mean_grid_lo = -10;
  int mean_grid_hi = 10;
  double sigma = 3.0;           // informative-feature standard deviation
  double noise_variance = 9.0;  // variance of the noise features
  std::uint64_t seed = 0;
};

struct CheckerboardData {
  DenseMatrix x;
  std::vector<std::size_t> row_truth;        // size n
  std::vector<std::size_t> col_truth;        // size p_true
  std::vector<bool> informative_mask;        // size p
  DenseMatrix mean_table;                    // K x R mu values drawn
};

inline void validate_spec(const SimSpec& s) {
  if (s.n < 2 || s.p < 2) throw BadSpecError("SimSpec: need n, p >= 2");
  if (s.p_true > s.p) throw BadSpecError("SimSpec: p_true > p");
  if (s.p_true < 1) throw BadSpecError("SimSpec: need p_true >= 1");
  if (s.k_row_clusters < 1 || s.k_row_clusters > s.n)
    throw BadSpecError("SimSpec: need 1 <= K <= n");
  if (s.r_col_clusters < 1 || s.r_col_clusters > s.p_true)
    throw BadSpecError("SimSpec: need 1 <= R <= p_true");
  if (s.mean_grid_hi < s.mean_grid_lo) throw BadSpecError("SimSpec: empty mean grid");
  if (!(s.sigma >= 0.0)) throw BadSpecError("SimSpec: sigma must be >= 0");
  if (!(s.noise_variance > 0.0))
    throw BadSpecError("SimSpec: noise variance must be > 0");
}

namespace detail {

// Uniform class labels over {0..k-1}; redrawn until every class occurs.
inline std::vector<std::size_t> sample_classes(Rng& rng, std::size_t count,
                                               std::size_t k) {
  std::vector<std::size_t> labels(count);
  while (true) {
    std::vector<bool> seen(k, false);
    for (auto& l : labels) {
      l = std::size_t(rng.uniform_below(k));
      seen[l] = true;
    }
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) break;
  }
  return labels;
}

struct CheckerboardStructure {
  std::vector<std::size_t> row_truth;
  std::vector<std::size_t> col_truth;
  DenseMatrix mean_table;
};

inline CheckerboardStructure draw_structure(Rng& rng, const SimSpec& s) {
  CheckerboardStructure st;
  st.row_truth = sample_classes(rng, s.n, s.k_row_clusters);
  st.col_truth = sample_classes(rng, s.p_true, s.r_col_clusters);
  const std::size_t grid =
      std::size_t(s.mean_grid_hi - s.mean_grid_lo) + 1;
  st.mean_table = DenseMatrix(s.k_row_clusters, s.r_col_clusters);
  for (std::size_t k = 0; k < s.k_row_clusters; ++k)
    for (std::size_t r = 0; r < s.r_col_clusters; ++r)
      st.mean_table(k, r) =
          double(s.mean_grid_lo) + double(rng.uniform_below(grid));
  return st;
}

// Entries drawn row-major: informative cells N(mu_kr, sigma^2), noise
// cells N(0, noise_variance).
inline DenseMatrix draw_entries(Rng& rng, const SimSpec& s,
                                const CheckerboardStructure& st) {
  DenseMatrix x(s.n, s.p);
  const double noise_sd = std::sqrt(s.noise_variance);
  for (std::size_t i = 0; i < s.n; ++i) {
    const std::size_t k = st.row_truth[i];
    for (std::size_t j = 0; j < s.p; ++j) {
      if (j < s.p_true)
        x(i, j) = rng.normal(st.mean_table(k, st.col_truth[j]), s.sigma);
      else
        x(i, j) = rng.normal(0.0, noise_sd);
    }
  }
  return x;
}

inline CheckerboardData assemble(const SimSpec& s, CheckerboardStructure st,
                                 DenseMatrix x) {
  CheckerboardData out;
  out.x = std::move(x);
  out.row_truth = std::move(st.row_truth);
  out.col_truth = std::move(st.col_truth);
  out.mean_table = std::move(st.mean_table);
  out.informative_mask.assign(s.p, false);
  for (std::size_t j = 0; j < s.p_true; ++j) out.informative_mask[j] = true;
  return out;
}

}  // namespace detail

inline CheckerboardData generate(const SimSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);
  auto st = detail::draw_structure(rng, spec);
  auto x = detail::draw_entries(rng, spec, st);
  return detail::assemble(spec, std::move(st), std::move(x));
}

// Training/validation pair sharing one structure (labels and mean table)
// with independent noise. The training half equals generate(spec) exactly:
// structure, then training entries, then validation entries are drawn from
// a single stream.
inline std::pair<CheckerboardData, CheckerboardData> generate_pair(
    const SimSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);
  auto st = detail::draw_structure(rng, spec);
  auto x_train = detail::draw_entries(rng, spec, st);
  auto x_val = detail::draw_entries(rng, spec, st);
  auto train = detail::assemble(spec, st, std::move(x_train));
  auto val = detail::assemble(spec, std::move(st), std::move(x_val));
  return {std::move(train), std::move(val)};
}

}  // namespace spacobi
