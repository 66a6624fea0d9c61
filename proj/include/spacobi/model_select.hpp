#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "spacobi/admm.hpp"
#include "spacobi/clusters.hpp"
#include "spacobi/errors.hpp"
#include "spacobi/parallel.hpp"
#include "spacobi/pipeline.hpp"
#include "spacobi/rng.hpp"

namespace spacobi {

enum class GridMode { TwoParameter, ThreeParameter };

// Tuning grid: a gamma ladder (applied to both fusion penalties in
// two-parameter mode, crossed with itself in three-parameter mode) times
// a gamma3 ladder.
struct GridSpec {
  std::vector<double> gamma_ladder;
  std::vector<double> gamma3_ladder;
  GridMode mode = GridMode::TwoParameter;
};

inline std::vector<double> log_ladder(double e_lo, double e_hi,
                                      std::size_t count) {
  if (count < 1) throw BadSpecError("log_ladder: need count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = std::exp(e_lo);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(e_lo + (e_hi - e_lo) * double(i) / double(count - 1));
  return out;
}

inline void validate_grid(const GridSpec& g) {
  if (g.gamma_ladder.empty() || g.gamma3_ladder.empty())
    throw BadSpecError("GridSpec: empty ladder");
  for (double v : g.gamma_ladder)
    if (!(v > 0.0)) throw BadSpecError("GridSpec: gamma ladder must be positive");
  if (!(g.gamma3_ladder.front() >= 0.0))
    throw BadSpecError("GridSpec: gamma3 ladder must be nonnegative");
  for (std::size_t i = 1; i < g.gamma_ladder.size(); ++i)
    if (!(g.gamma_ladder[i] > g.gamma_ladder[i - 1]))
      throw BadSpecError("GridSpec: gamma ladder not strictly increasing");
  for (std::size_t i = 1; i < g.gamma3_ladder.size(); ++i)
    if (!(g.gamma3_ladder[i] > g.gamma3_ladder[i - 1]))
      throw BadSpecError("GridSpec: gamma3 ladder not strictly increasing");
}

struct GridPoint {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  bool two_parameter = true;  // gamma1 == gamma2 == the combined gamma
  double gamma() const { return gamma1; }
};

struct GridPointResult {
  GridPoint point;
  bool ok = false;
  std::string error;
  FitReport report;
};

struct GridSearchOptions {
  bool warm_start = true;
  bool adaptive = true;  // per-ladder pilot fit supplies the u factors
};

namespace detail {

struct Ladder {
  double gamma1, gamma2;
};

inline std::vector<Ladder> enumerate_ladders(const GridSpec& grid) {
  std::vector<Ladder> ladders;
  if (grid.mode == GridMode::TwoParameter) {
    for (double g : grid.gamma_ladder) ladders.push_back({g, g});
  } else {
    for (double g1 : grid.gamma_ladder)
      for (double g2 : grid.gamma_ladder) ladders.push_back({g1, g2});
  }
  return ladders;
}

}  // namespace detail

// Runs the full grid. Each ladder fixes the fusion penalties, computes the
// adaptive factors from its gamma3 = 0 pilot, then walks the gamma3 ladder
// in ascending order, warm-starting every fit from the previous converged
// state. A failed point is flagged and the ladder continues from the last
// good state. Distinct ladders run concurrently; results are ordered by
// grid index regardless of scheduling.
inline std::vector<GridPointResult> grid_search(
    const DenseMatrix& x, const GridSpec& grid, const PenaltyConfig& base,
    const GridSearchOptions& opt = {}) {
  validate_grid(grid);
  const auto ladders = detail::enumerate_ladders(grid);
  const std::size_t per = grid.gamma3_ladder.size();
  std::vector<GridPointResult> results(ladders.size() * per);

  parallel_for_index(ladders.size(), [&](std::size_t li) {
    const auto& lad = ladders[li];
    PenaltyConfig cfg = base;
    cfg.combined_gamma.reset();
    if (grid.mode == GridMode::TwoParameter) {
      cfg.gamma1 = cfg.gamma2 = 0.0;
      cfg.combined_gamma = lad.gamma1;
    } else {
      cfg.gamma1 = lad.gamma1;
      cfg.gamma2 = lad.gamma2;
    }

    std::optional<AdmmState> carry;
    if (opt.adaptive) {
      auto af = adaptive_factors_with_pilot(x, cfg);
      cfg.weights.feature_factors = std::move(af.factors);
      if (opt.warm_start) carry = std::move(af.pilot.state);
    }

    for (std::size_t gi = 0; gi < per; ++gi) {
      GridPointResult& slot = results[li * per + gi];
      slot.point.gamma1 = lad.gamma1;
      slot.point.gamma2 = lad.gamma2;
      slot.point.gamma3 = grid.gamma3_ladder[gi];
      slot.point.two_parameter = grid.mode == GridMode::TwoParameter;
      cfg.gamma3 = grid.gamma3_ladder[gi];
      try {
        slot.report = fit(x, cfg, opt.warm_start ? carry : std::nullopt);
        slot.ok = true;
        if (opt.warm_start) carry = slot.report.state;
      } catch (const Error& e) {
        slot.ok = false;
        slot.error = e.what();
      }
    }
  });
  return results;
}

// Empirical clustering distance between two labelings of the same
// entities: the fraction of entity pairs on which the co-membership
// indicators disagree. Zero iff the partitions coincide up to relabeling.
inline double clustering_distance(const std::vector<std::size_t>& l1,
                                  const std::vector<std::size_t>& l2) {
  if (l1.size() != l2.size())
    throw LengthMismatchError("clustering_distance: label lengths differ");
  const std::size_t n = l1.size();
  if (n < 2) return 0.0;
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool s1 = l1[i] == l1[j];
      const bool s2 = l2[i] == l2[j];
      if (s1 != s2) ++disagree;
    }
  return double(disagree) / (double(n) * double(n - 1) / 2.0);
}

// Above this entity count the stability distance is estimated on a
// random pair subsample instead of all C(n,2) pairs.
inline constexpr std::size_t kExactPairLimit = 500;
inline constexpr std::size_t kPairSubsample = 100000;

namespace detail {

inline double clustering_distance_sampled(const std::vector<std::size_t>& l1,
                                          const std::vector<std::size_t>& l2,
                                          Rng& rng) {
  const std::size_t n = l1.size();
  std::size_t disagree = 0;
  for (std::size_t t = 0; t < kPairSubsample; ++t) {
    const std::size_t i = std::size_t(rng.uniform_below(n));
    std::size_t j = std::size_t(rng.uniform_below(n - 1));
    if (j >= i) ++j;
    const bool s1 = l1[i] == l1[j];
    const bool s2 = l2[i] == l2[j];
    if (s1 != s2) ++disagree;
  }
  return double(disagree) / double(kPairSubsample);
}

// Extends a fitted clustering to arbitrary rows via nearest centroid.
inline std::vector<std::size_t> extend_clustering(const DenseMatrix& fit_a,
                                                  const std::vector<std::size_t>& fit_labels,
                                                  const DenseMatrix& x) {
  return nearest_centroid_assign(x, row_cluster_centroids(fit_a, fit_labels));
}

}  // namespace detail

struct StabilityScore {
  GridPoint point;
  double dhat = 1.0;        // mean clustering distance, in [0, 1]
  std::size_t pair_count = 0;  // bootstrap pairs averaged
  bool ok = false;
};

struct StabilitySelection {
  GridPoint best;
  std::size_t best_index = 0;
  std::vector<StabilityScore> scores;
};

// Stability selection over the grid: B independent pairs of row
// bootstrap samples are fit at every grid point; each fitted clustering
// is extended to the original rows by nearest centroid, and the pairwise
// clustering distance is averaged. The most stable point wins; ties
// prefer smaller gamma3, then smaller gamma.
inline StabilitySelection stability_select(const DenseMatrix& x,
                                           const GridSpec& grid, std::size_t b,
                                           std::uint64_t seed,
                                           const PenaltyConfig& base,
                                           const WeightOptions& wopt = {},
                                           const GridSearchOptions& gopt = {}) {
  if (b < 1) throw BadSpecError("stability_select: need B >= 1");
  validate_grid(grid);
  const std::size_t n = x.rows();

  // All resampling happens up front so concurrent fits never touch the seed
  // stream.
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> draws(2 * b);
  for (auto& d : draws) {
    d.resize(n);
    for (auto& i : d) i = std::size_t(rng.uniform_below(n));
  }

  const auto ladders = detail::enumerate_ladders(grid);
  const std::size_t points = ladders.size() * grid.gamma3_ladder.size();

  // extended[run][point] = labels on the original rows.
  std::vector<std::vector<std::vector<std::size_t>>> extended(
      2 * b, std::vector<std::vector<std::size_t>>(points));
  std::vector<std::vector<bool>> run_ok(2 * b,
                                        std::vector<bool>(points, false));

  parallel_for_index(2 * b, [&](std::size_t run) {
    DenseMatrix xb(n, x.cols());
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = x.row(draws[run][i]);
      std::copy(src.begin(), src.end(), xb.row(i).begin());
    }
    PenaltyConfig cfg = base;
    cfg.weights = build_weight_set(xb, wopt);
    GridSearchOptions inner = gopt;
    const auto fits = grid_search(xb, grid, cfg, inner);
    for (std::size_t pt = 0; pt < points; ++pt) {
      if (!fits[pt].ok) continue;
      const auto clusters = extract_clusters(fits[pt].report.state.a);
      extended[run][pt] =
          detail::extend_clustering(fits[pt].report.state.a,
                                    clusters.row_labels, x);
      run_ok[run][pt] = true;
    }
  });

  Rng pair_rng(seed ^ 0x5deece66dULL);
  StabilitySelection sel;
  sel.scores.resize(points);
  for (std::size_t pt = 0; pt < points; ++pt) {
    StabilityScore& sc = sel.scores[pt];
    const std::size_t li = pt / grid.gamma3_ladder.size();
    const std::size_t gi = pt % grid.gamma3_ladder.size();
    sc.point.gamma1 = ladders[li].gamma1;
    sc.point.gamma2 = ladders[li].gamma2;
    sc.point.gamma3 = grid.gamma3_ladder[gi];
    sc.point.two_parameter = grid.mode == GridMode::TwoParameter;

    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t pair = 0; pair < b; ++pair) {
      if (!run_ok[2 * pair][pt] || !run_ok[2 * pair + 1][pt]) continue;
      const auto& la = extended[2 * pair][pt];
      const auto& lb = extended[2 * pair + 1][pt];
      total += n <= kExactPairLimit
                   ? clustering_distance(la, lb)
                   : detail::clustering_distance_sampled(la, lb, pair_rng);
      ++used;
    }
    sc.pair_count = used;
    sc.ok = used > 0;
    if (sc.ok) sc.dhat = total / double(used);
  }

  bool have_best = false;
  for (std::size_t pt = 0; pt < points; ++pt) {
    const auto& sc = sel.scores[pt];
    if (!sc.ok) continue;
    if (!have_best) {
      sel.best = sc.point;
      sel.best_index = pt;
      have_best = true;
      continue;
    }
    const auto& cur = sel.scores[sel.best_index];
    const auto key = [](const StabilityScore& s) {
      return std::tuple<double, double, double>(s.dhat, s.point.gamma3,
                                                s.point.gamma1);
    };
    if (key(sc) < key(cur)) {
      sel.best = sc.point;
      sel.best_index = pt;
    }
  }
  if (!have_best)
    throw Error("stability_select: every grid point failed to fit");
  return sel;
}

struct AriScore {
  GridPoint point;
  double validation_ari = -1.0;
  double train_ari = -1.0;
  bool ok = false;
};

struct AriTuneResult {
  GridPoint best;
  std::size_t best_index = 0;
  std::vector<AriScore> scores;
  std::vector<GridPointResult> fits;  // training-matrix fits per point
};

// Oracle-style tuning on a validation matrix sharing the training truth:
// each training fit's row clustering is carried to the validation rows by
// nearest centroid and scored against the validation labels. The max-ARI
// point wins; ties prefer the sparser model (larger gamma3, then larger
// gamma).
inline AriTuneResult ari_tune(const DenseMatrix& x_train,
                              const DenseMatrix& x_val,
                              const std::vector<std::size_t>& val_row_labels,
                              const GridSpec& grid, const PenaltyConfig& base,
                              const GridSearchOptions& gopt = {}) {
  if (x_val.rows() != val_row_labels.size())
    throw LengthMismatchError("ari_tune: validation labels length mismatch");
  if (x_val.cols() != x_train.cols())
    throw DimensionMismatchError("ari_tune: train/validation widths differ");

  AriTuneResult out;
  out.fits = grid_search(x_train, grid, base, gopt);
  out.scores.resize(out.fits.size());

  for (std::size_t pt = 0; pt < out.fits.size(); ++pt) {
    AriScore& sc = out.scores[pt];
    sc.point = out.fits[pt].point;
    if (!out.fits[pt].ok) continue;
    const DenseMatrix& a_hat = out.fits[pt].report.state.a;
    const auto clusters = extract_clusters(a_hat);
    const auto val_assigned =
        detail::extend_clustering(a_hat, clusters.row_labels, x_val);
    sc.validation_ari = adjusted_rand_index(val_assigned, val_row_labels);
    sc.train_ari = adjusted_rand_index(clusters.row_labels, val_row_labels);
    sc.ok = true;
  }

  bool have_best = false;
  for (std::size_t pt = 0; pt < out.scores.size(); ++pt) {
    const auto& sc = out.scores[pt];
    if (!sc.ok) continue;
    const auto key = [](const AriScore& s) {
      return std::tuple<double, double, double>(s.validation_ari,
                                                s.point.gamma3, s.point.gamma1);
    };
    if (!have_best || key(sc) > key(out.scores[out.best_index])) {
      out.best = sc.point;
      out.best_index = pt;
      have_best = true;
    }
  }
  if (!have_best) throw Error("ari_tune: every grid point failed to fit");
  return out;
}

struct PathPoint {
  double gamma3 = 0.0;
  double fnr = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  bool converged = false;
};

struct SelectionPath {
  std::vector<PathPoint> points;
  double auc = 0.0;
};

// FNR/FPR path of the selected-feature mask along an ascending gamma3
// ladder at fixed fusion penalty. eps is the mask threshold handed to
// extract_clusters.
inline SelectionPath selection_path(const DenseMatrix& x, double gamma,
                                    const std::vector<double>& gamma3_ladder,
                                    const std::vector<bool>& truth_mask,
                                    const PenaltyConfig& base,
                                    const GridSearchOptions& gopt = {},
                                    double eps = 1e-4) {
  GridSpec grid;
  grid.gamma_ladder = {gamma};
  grid.gamma3_ladder = gamma3_ladder;
  grid.mode = GridMode::TwoParameter;
  const auto fits = grid_search(x, grid, base, gopt);

  SelectionPath path;
  std::vector<std::pair<double, double>> roc;
  for (const auto& f : fits) {
    if (!f.ok) throw Error("selection_path: fit failed: " + f.error);
    const auto clusters = extract_clusters(f.report.state.a, eps);
    const auto [fnr, fpr] = selection_rates(clusters.feature_mask, truth_mask);
    path.points.push_back(
        {f.point.gamma3, fnr, fpr, 1.0 - fnr, f.report.converged});
    roc.emplace_back(fpr, 1.0 - fnr);
  }
  path.auc = selection_auc(roc);
  return path;
}

}  // namespace spacobi
