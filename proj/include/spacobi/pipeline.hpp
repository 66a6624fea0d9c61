#pragma once

#include <cmath>
#include <vector>

#include "spacobi/admm.hpp"
#include "spacobi/weights.hpp"

namespace spacobi {

// How the Gaussian-kernel bandwidth is applied. Raw uses phi on the
// squared distances directly (the literal kernel definition); Median
// divides the squared distances by their per-axis median first, so a
// fixed phi keeps working across data scales. On data whose pairwise
// squared distances run into the thousands the raw kernel underflows to
// an all-zero weight set, hence Median is the default for the pipeline.
enum class BandwidthRule { Raw, Median };

struct WeightOptions {
  std::size_t m = 5;
  double phi = 0.5;
  BandwidthRule bandwidth = BandwidthRule::Median;
};

// Builds the full weight set for a data matrix: m-NN Gaussian weights on
// both axes, uniform feature factors, all groups rescaled to the standard
// targets. The neighbor count is clamped to axis length - 1 so small
// matrices stay usable.
inline WeightSet build_weight_set(const DenseMatrix& x,
                                  const WeightOptions& opt = {}) {
  double phi_rows = opt.phi;
  double phi_cols = opt.phi;
  if (opt.bandwidth == BandwidthRule::Median) {
    const double med_r = median_squared_distance(x, Axis::Rows);
    const double med_c = median_squared_distance(x, Axis::Cols);
    if (med_r > 0.0) phi_rows = opt.phi / med_r;
    if (med_c > 0.0) phi_cols = opt.phi / med_c;
  }
  const std::size_t m_rows = std::min(opt.m, x.rows() - 1);
  const std::size_t m_cols = std::min(opt.m, x.cols() - 1);
  auto row_edges = knn_gaussian_weights(x, Axis::Rows, m_rows, phi_rows);
  auto col_edges = knn_gaussian_weights(x, Axis::Cols, m_cols, phi_cols);
  std::vector<double> factors(x.cols(), 1.0);
  return make_weight_set(std::move(row_edges), std::move(col_edges),
                         std::move(factors), x.rows(), x.cols());
}

// Norm floor below which a pilot-estimate feature counts as null; its
// factor is capped at the reciprocal 1e8.
inline constexpr double kAdaptiveNormFloor = 1e-8;

// Adaptive group-lasso factors u_j = 1 / ||a_j^(0)||_2 from the gamma3 = 0
// pilot fit, capped at the norm floor and rescaled to the factor target.
// The returned fit lets callers reuse the pilot as a warm start.
struct AdaptiveFactors {
  std::vector<double> factors;  // rescaled, sum = 1/sqrt(n)
  FitReport pilot;
};

inline AdaptiveFactors adaptive_factors_with_pilot(const DenseMatrix& x,
                                                   const PenaltyConfig& cfg) {
  PenaltyConfig pilot_cfg = cfg;
  pilot_cfg.gamma3 = 0.0;
  AdaptiveFactors out;
  out.pilot = fit(x, pilot_cfg);

  const DenseMatrix& a0 = out.pilot.state.a;
  const std::size_t p = a0.cols();
  out.factors.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a0.rows(); ++i) s += a0(i, j) * a0(i, j);
    out.factors[j] = 1.0 / std::max(std::sqrt(s), kAdaptiveNormFloor);
  }

  WeightSet scaled = cfg.weights;
  scaled.feature_factors = out.factors;
  scaled = rescale(std::move(scaled));
  out.factors = std::move(scaled.feature_factors);
  return out;
}

inline std::vector<double> adaptive_factors(const DenseMatrix& x,
                                            const PenaltyConfig& cfg) {
  return adaptive_factors_with_pilot(x, cfg).factors;
}

}  // namespace spacobi
