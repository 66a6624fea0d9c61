#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// Norm selector for the fusion penalties.
enum class ProxKind { L1 = 1, L2 = 2, Linf = 3 };

// Euclidean projection of y onto the L1 ball of radius 1 (sort-based,
// exact in finitely many steps).
inline std::vector<double> project_l1_ball(std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  double l1 = 0.0;
  for (double v : out) l1 += std::fabs(v);
  if (l1 <= 1.0) return out;

  std::vector<double> mags(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) mags[i] = std::fabs(out[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    cumsum += mags[k];
    const double cand = (cumsum - 1.0) / double(k + 1);
    if (mags[k] - cand > 0.0)
      theta = cand;
    else
      break;
  }
  for (double& v : out) {
    const double shrunk = std::max(std::fabs(v) - theta, 0.0);
    v = std::copysign(shrunk, v);
  }
  return out;
}

namespace detail {

inline void prox_l1_span(std::span<double> x, double sigma) noexcept {
  for (double& v : x) {
    const double shrunk = std::fabs(v) - sigma;
    v = shrunk > 0.0 ? std::copysign(shrunk, v) : 0.0;
  }
}

// Group soft-threshold: (1 - sigma/||x||)_+ x, with the zero vector
// returned when ||x|| <= sigma (subgradient optimality at 0).
inline void prox_l2_span(std::span<double> x, double sigma) noexcept {
  const double nrm = norm2(x);
  if (nrm <= sigma) {
    for (double& v : x) v = 0.0;
    return;
  }
  const double scale = 1.0 - sigma / nrm;
  for (double& v : x) v *= scale;
}

// Moreau decomposition: prox_{sigma ||.||_inf}(x) = x - sigma P_B1(x/sigma).
inline void prox_linf_span(std::span<double> x, double sigma) {
  if (sigma == 0.0) return;
  std::vector<double> scaled(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] / sigma;
  const std::vector<double> proj = project_l1_ball(scaled);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= sigma * proj[i];
}

inline void prox_span(std::span<double> x, double sigma, ProxKind q) {
  if (sigma == 0.0) return;
  switch (q) {
    case ProxKind::L1:
      prox_l1_span(x, sigma);
      break;
    case ProxKind::L2:
      prox_l2_span(x, sigma);
      break;
    case ProxKind::Linf:
      prox_linf_span(x, sigma);
      break;
  }
}

}  // namespace detail

// prox_{sigma ||.||_q}(x) = argmin_v 1/2 ||v - x||^2 + sigma ||v||_q
// for q in {1, 2, inf}.
inline std::vector<double> prox_norm(std::span<const double> x, double sigma,
                                     ProxKind q) {
  if (sigma < 0.0) throw NegativeSigmaError("prox_norm: sigma must be >= 0");
  for (double v : x)
    if (!std::isfinite(v)) throw NonFiniteError("prox_norm: x not finite");
  std::vector<double> out(x.begin(), x.end());
  detail::prox_span({out.data(), out.size()}, sigma, q);
  return out;
}

}  // namespace spacobi
