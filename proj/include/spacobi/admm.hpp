#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"
#include "spacobi/prox.hpp"
#include "spacobi/sylvester.hpp"
#include "spacobi/weights.hpp"

namespace spacobi {

// Any iterate entry beyond this magnitude aborts the fit.
inline constexpr double kDivergenceGuard = 1e12;

// Tuning parameters and step sizes for one fit. Either (gamma1, gamma2)
// or combined_gamma is active; setting combined_gamma selects the
// two-parameter formulation with gamma1 = gamma2 = combined_gamma.
struct PenaltyConfig {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  std::optional<double> combined_gamma;
  double nu1 = 1.0;
  double nu2 = 1.0;
  double nu3 = 1.0;
  ProxKind q = ProxKind::L2;
  WeightSet weights;
  double tol = 1e-5;
  std::size_t max_iter = 10000;

  double effective_gamma1() const {
    return combined_gamma ? *combined_gamma : gamma1;
  }
  double effective_gamma2() const {
    return combined_gamma ? *combined_gamma : gamma2;
  }
};

// One iteration's convergence diagnostics: the largest slack residual in
// each block and the relative Frobenius change of the centroid matrix.
struct ResidualRecord {
  double r_v = 0.0;
  double r_z = 0.0;
  double r_g = 0.0;
  double a_change = 0.0;
};

// Full ADMM iterate. V rows follow the row-edge list, Z rows the
// column-edge list; G row j holds the j-th feature vector g_j (length n).
// Dual blocks mirror the primal shapes.
struct AdmmState {
  DenseMatrix a;
  DenseMatrix v;
  DenseMatrix z;
  DenseMatrix g;
  DenseMatrix lambda1;
  DenseMatrix lambda2;
  DenseMatrix lambda3;
  std::size_t iteration = 0;
  std::vector<ResidualRecord> history;
};

struct FitReport {
  AdmmState state;
  double objective = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double wall_seconds = 0.0;
};

namespace detail {

inline double norm_q(std::span<const double> x, ProxKind q) {
  switch (q) {
    case ProxKind::L1: {
      double s = 0.0;
      for (double v : x) s += std::fabs(v);
      return s;
    }
    case ProxKind::L2:
      return norm2(x);
    case ProxKind::Linf: {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::fabs(v));
      return m;
    }
  }
  return 0.0;
}

inline void require_all_pairs(const std::vector<WeightedEdge>& edges,
                              std::size_t len, const char* what) {
  if (edges.size() != len * (len - 1) / 2)
    throw ShapeMismatchError(std::string(what) +
                             " edge list is not the all-pairs set");
  std::size_t e = 0;
  for (std::size_t a = 0; a < len; ++a)
    for (std::size_t b = a + 1; b < len; ++b, ++e) {
      if (edges[e].a != a || edges[e].b != b)
        throw ShapeMismatchError(std::string(what) +
                                 " edges not in canonical pair order");
      if (!(edges[e].weight >= 0.0))
        throw ShapeMismatchError(std::string(what) + " negative edge weight");
    }
}

}  // namespace detail

inline void validate_config(const PenaltyConfig& cfg, std::size_t n,
                            std::size_t p) {
  if (cfg.combined_gamma && (cfg.gamma1 != 0.0 || cfg.gamma2 != 0.0))
    throw BadSpecError(
        "PenaltyConfig: combined_gamma and (gamma1, gamma2) both set");
  if (cfg.effective_gamma1() < 0.0 || cfg.effective_gamma2() < 0.0 ||
      cfg.gamma3 < 0.0)
    throw BadSpecError("PenaltyConfig: negative penalty parameter");
  if (!(cfg.nu1 > 0.0) || !(cfg.nu2 > 0.0) || !(cfg.nu3 > 0.0))
    throw BadStepSizeError("PenaltyConfig: step sizes must be positive");
  if (!(cfg.tol > 0.0)) throw BadSpecError("PenaltyConfig: tol must be > 0");
  if (cfg.max_iter < 1) throw BadSpecError("PenaltyConfig: max_iter must be >= 1");
  if (cfg.weights.feature_factors.size() != p)
    throw ShapeMismatchError("PenaltyConfig: feature factor count != p");
  detail::require_all_pairs(cfg.weights.row_edges, n, "row");
  detail::require_all_pairs(cfg.weights.col_edges, p, "column");
}

inline void validate_state(const AdmmState& s, std::size_t n, std::size_t p,
                           std::size_t e1, std::size_t e2) {
  const bool ok = s.a.rows() == n && s.a.cols() == p && s.v.rows() == e1 &&
                  s.v.cols() == p && s.z.rows() == e2 && s.z.cols() == n &&
                  s.g.rows() == p && s.g.cols() == n &&
                  s.lambda1.same_shape(s.v) && s.lambda2.same_shape(s.z) &&
                  s.lambda3.same_shape(s.g);
  if (!ok) throw ShapeMismatchError("AdmmState: block shapes inconsistent");
  if (!s.a.all_finite() || !s.v.all_finite() || !s.z.all_finite() ||
      !s.g.all_finite() || !s.lambda1.all_finite() ||
      !s.lambda2.all_finite() || !s.lambda3.all_finite())
    throw NonFiniteError("AdmmState: non-finite entry");
}

// Feasible cold start: A = X, slack blocks at their constraint values,
// duals at zero.
inline AdmmState cold_start(const DenseMatrix& x, const PenaltyConfig& cfg) {
  const std::size_t n = x.rows(), p = x.cols();
  const std::size_t e1 = cfg.weights.row_edges.size();
  const std::size_t e2 = cfg.weights.col_edges.size();

  AdmmState s;
  s.a = x;
  s.v = DenseMatrix(e1, p);
  s.z = DenseMatrix(e2, n);
  s.g = DenseMatrix(p, n);
  s.lambda1 = DenseMatrix(e1, p);
  s.lambda2 = DenseMatrix(e2, n);
  s.lambda3 = DenseMatrix(p, n);

  for (std::size_t e = 0; e < e1; ++e) {
    const auto& ed = cfg.weights.row_edges[e];
    for (std::size_t j = 0; j < p; ++j)
      s.v(e, j) = x(ed.a, j) - x(ed.b, j);
  }
  for (std::size_t e = 0; e < e2; ++e) {
    const auto& ed = cfg.weights.col_edges[e];
    for (std::size_t i = 0; i < n; ++i)
      s.z(e, i) = x(i, ed.a) - x(i, ed.b);
  }
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) s.g(j, i) = x(i, j);
  return s;
}

// Objective value of the penalized problem evaluated at the feasible
// point of state.a (slack variables substituted by their constraints).
inline double objective(const DenseMatrix& x, const AdmmState& state,
                        const PenaltyConfig& cfg) {
  const std::size_t n = x.rows(), p = x.cols();
  if (state.a.rows() != n || state.a.cols() != p)
    throw ShapeMismatchError("objective: A and X shapes differ");
  if (cfg.weights.feature_factors.size() != p)
    throw ShapeMismatchError("objective: feature factor count != p");

  const DenseMatrix& a = state.a;
  double fidelity = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data()[i] - a.data()[i];
    fidelity += d * d;
  }
  double value = 0.5 * fidelity;

  const double g1 = cfg.effective_gamma1();
  const double g2 = cfg.effective_gamma2();
  std::vector<double> buf(std::max(n, p));

  if (g1 > 0.0) {
    double pen = 0.0;
    for (const auto& ed : cfg.weights.row_edges) {
      if (ed.weight == 0.0) continue;
      for (std::size_t j = 0; j < p; ++j)
        buf[j] = a(ed.a, j) - a(ed.b, j);
      pen += ed.weight * detail::norm_q({buf.data(), p}, cfg.q);
    }
    value += g1 * pen;
  }
  if (g2 > 0.0) {
    double pen = 0.0;
    for (const auto& ed : cfg.weights.col_edges) {
      if (ed.weight == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i)
        buf[i] = a(i, ed.a) - a(i, ed.b);
      pen += ed.weight * detail::norm_q({buf.data(), n}, cfg.q);
    }
    value += g2 * pen;
  }
  if (cfg.gamma3 > 0.0) {
    double pen = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
      pen += cfg.weights.feature_factors[j] * std::sqrt(s);
    }
    value += cfg.gamma3 * pen;
  }
  return value;
}

// Right-hand side of the Sylvester update, assembled from the current
// slack and dual blocks:
//   H = X + sum_l (e_l1 - e_l2)(lambda_1l + nu1 v_l)^T
//         + sum_k (lambda_2k + nu2 z_k)(e*_k1 - e*_k2)^T
//         + sum_j (lambda_3j + nu3 g_j)(e*_j)^T
inline DenseMatrix assemble_h(const DenseMatrix& x, const AdmmState& state,
                              const PenaltyConfig& cfg) {
  const std::size_t n = x.rows(), p = x.cols();
  DenseMatrix h = x;
  for (std::size_t e = 0; e < cfg.weights.row_edges.size(); ++e) {
    const auto& ed = cfg.weights.row_edges[e];
    double* h1 = &h(ed.a, 0);
    double* h2 = &h(ed.b, 0);
    const double* lam = state.lambda1.row(e).data();
    const double* v = state.v.row(e).data();
    for (std::size_t j = 0; j < p; ++j) {
      const double t = lam[j] + cfg.nu1 * v[j];
      h1[j] += t;
      h2[j] -= t;
    }
  }
  // Column-side contributions accumulate transposed, then fold in once;
  // the fused fit loop uses the identical order.
  DenseMatrix hc(p, n, 0.0);
  for (std::size_t e = 0; e < cfg.weights.col_edges.size(); ++e) {
    const auto& ed = cfg.weights.col_edges[e];
    const double* lam = state.lambda2.row(e).data();
    const double* z = state.z.row(e).data();
    double* hc1 = &hc(ed.a, 0);
    double* hc2 = &hc(ed.b, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = lam[i] + cfg.nu2 * z[i];
      hc1[i] += t;
      hc2[i] -= t;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    const double* lam = state.lambda3.row(j).data();
    const double* g = state.g.row(j).data();
    double* hcj = &hc(j, 0);
    for (std::size_t i = 0; i < n; ++i) hcj[i] += lam[i] + cfg.nu3 * g[i];
  }
  for (std::size_t j = 0; j < p; ++j) {
    const double* hcj = &hc(j, 0);
    for (std::size_t i = 0; i < n; ++i) h(i, j) += hcj[i];
  }
  return h;
}

// Centroid update: solves M A + A N = H for the all-pairs M, N.
inline DenseMatrix a_update(const DenseMatrix& x, const AdmmState& state,
                            const PenaltyConfig& cfg) {
  FusionSylvesterSolver solver(x.rows(), x.cols(), cfg.nu1, cfg.nu2, cfg.nu3);
  return solver.solve(assemble_h(x, state, cfg));
}

// Slack updates: each block is the proximal map of its penalty norm at
// the dual-shifted constraint value, e.g.
//   v_l = prox_{(gamma1 w_l / nu1) ||.||_q}(A_l1. - A_l2. - lambda_1l / nu1).
inline void vzg_update(AdmmState& state, const PenaltyConfig& cfg) {
  const std::size_t n = state.a.rows(), p = state.a.cols();
  const double g1 = cfg.effective_gamma1();
  const double g2 = cfg.effective_gamma2();

  for (std::size_t e = 0; e < cfg.weights.row_edges.size(); ++e) {
    const auto& ed = cfg.weights.row_edges[e];
    double* v = state.v.row(e).data();
    const double* lam = state.lambda1.row(e).data();
    const double* a1 = state.a.row(ed.a).data();
    const double* a2 = state.a.row(ed.b).data();
    for (std::size_t j = 0; j < p; ++j)
      v[j] = a1[j] - a2[j] - lam[j] / cfg.nu1;
    detail::prox_span({v, p}, g1 * ed.weight / cfg.nu1, cfg.q);
  }
  for (std::size_t e = 0; e < cfg.weights.col_edges.size(); ++e) {
    const auto& ed = cfg.weights.col_edges[e];
    double* z = state.z.row(e).data();
    const double* lam = state.lambda2.row(e).data();
    for (std::size_t i = 0; i < n; ++i)
      z[i] = state.a(i, ed.a) - state.a(i, ed.b) - lam[i] / cfg.nu2;
    detail::prox_span({z, n}, g2 * ed.weight / cfg.nu2, cfg.q);
  }
  for (std::size_t j = 0; j < p; ++j) {
    double* g = state.g.row(j).data();
    const double* lam = state.lambda3.row(j).data();
    for (std::size_t i = 0; i < n; ++i)
      g[i] = state.a(i, j) - lam[i] / cfg.nu3;
    detail::prox_l2_span({g, n},
                         cfg.gamma3 * cfg.weights.feature_factors[j] / cfg.nu3);
  }
}

// Dual ascent on the three constraint blocks.
inline void dual_update(AdmmState& state, const PenaltyConfig& cfg) {
  const std::size_t n = state.a.rows(), p = state.a.cols();
  for (std::size_t e = 0; e < cfg.weights.row_edges.size(); ++e) {
    const auto& ed = cfg.weights.row_edges[e];
    double* lam = state.lambda1.row(e).data();
    const double* v = state.v.row(e).data();
    const double* a1 = state.a.row(ed.a).data();
    const double* a2 = state.a.row(ed.b).data();
    for (std::size_t j = 0; j < p; ++j)
      lam[j] += cfg.nu1 * (v[j] - (a1[j] - a2[j]));
  }
  for (std::size_t e = 0; e < cfg.weights.col_edges.size(); ++e) {
    const auto& ed = cfg.weights.col_edges[e];
    double* lam = state.lambda2.row(e).data();
    const double* z = state.z.row(e).data();
    for (std::size_t i = 0; i < n; ++i)
      lam[i] += cfg.nu2 * (z[i] - (state.a(i, ed.a) - state.a(i, ed.b)));
  }
  for (std::size_t j = 0; j < p; ++j) {
    double* lam = state.lambda3.row(j).data();
    const double* g = state.g.row(j).data();
    for (std::size_t i = 0; i < n; ++i)
      lam[i] += cfg.nu3 * (g[i] - state.a(i, j));
  }
}

// Full ADMM fit. Each iteration refreshes V, Z, G and the duals from the
// current centroids in one fused pass that also assembles the Sylvester
// right-hand side, then solves for the next A. Convergence is declared
// when the relative Frobenius change of A drops to tol. From the feasible
// cold start an unpenalized problem therefore converges on iteration one,
// while any active penalty moves the slack blocks first and the change
// measured always reflects a full cycle.
inline FitReport fit(const DenseMatrix& x, const PenaltyConfig& cfg,
                     const std::optional<AdmmState>& init = std::nullopt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = x.rows(), p = x.cols();
  if (n < 2 || p < 2) throw BadDimensionError("fit: need n, p >= 2");
  if (!x.all_finite()) throw NonFiniteError("fit: X has non-finite entries");
  validate_config(cfg, n, p);

  const auto& row_edges = cfg.weights.row_edges;
  const auto& col_edges = cfg.weights.col_edges;
  const std::size_t e1 = row_edges.size(), e2 = col_edges.size();

  FitReport report;
  if (init) {
    validate_state(*init, n, p, e1, e2);
    report.state = *init;
  } else {
    report.state = cold_start(x, cfg);
  }
  AdmmState& s = report.state;
  s.history.clear();
  s.iteration = 0;

  const double g1 = cfg.effective_gamma1();
  const double g2 = cfg.effective_gamma2();
  FusionSylvesterSolver solver(n, p, cfg.nu1, cfg.nu2, cfg.nu3);

  DenseMatrix h(n, p);
  DenseMatrix at(p, n);
  DenseMatrix hc(p, n);
  DenseMatrix a_prev(n, p);
  std::vector<double> diff(std::max(n, p));

  s.history.reserve(std::min<std::size_t>(cfg.max_iter, 4096));

  for (std::size_t m = 1; m <= cfg.max_iter; ++m) {
    s.a.transpose_into(at);

    // Fused slack + dual pass; assembles H for the solve below.
    h = x;
    hc.fill(0.0);
    ResidualRecord rec;

    for (std::size_t e = 0; e < e1; ++e) {
      const auto& ed = row_edges[e];
      double* v = &s.v(e, 0);
      double* lam = &s.lambda1(e, 0);
      const double* a1 = &s.a(ed.a, 0);
      const double* a2 = &s.a(ed.b, 0);
      for (std::size_t j = 0; j < p; ++j) {
        diff[j] = a1[j] - a2[j];
        v[j] = diff[j] - lam[j] / cfg.nu1;
      }
      detail::prox_span({v, p}, g1 * ed.weight / cfg.nu1, cfg.q);
      double res2 = 0.0;
      double* h1 = &h(ed.a, 0);
      double* h2 = &h(ed.b, 0);
      for (std::size_t j = 0; j < p; ++j) {
        const double r = v[j] - diff[j];
        res2 += r * r;
        lam[j] += cfg.nu1 * r;
        const double t = lam[j] + cfg.nu1 * v[j];
        h1[j] += t;
        h2[j] -= t;
      }
      rec.r_v = std::max(rec.r_v, std::sqrt(res2));
    }

    for (std::size_t e = 0; e < e2; ++e) {
      const auto& ed = col_edges[e];
      double* z = &s.z(e, 0);
      double* lam = &s.lambda2(e, 0);
      const double* c1 = &at(ed.a, 0);
      const double* c2 = &at(ed.b, 0);
      for (std::size_t i = 0; i < n; ++i) {
        diff[i] = c1[i] - c2[i];
        z[i] = diff[i] - lam[i] / cfg.nu2;
      }
      detail::prox_span({z, n}, g2 * ed.weight / cfg.nu2, cfg.q);
      double res2 = 0.0;
      double* hc1 = &hc(ed.a, 0);
      double* hc2 = &hc(ed.b, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = z[i] - diff[i];
        res2 += r * r;
        lam[i] += cfg.nu2 * r;
        const double t = lam[i] + cfg.nu2 * z[i];
        hc1[i] += t;
        hc2[i] -= t;
      }
      rec.r_z = std::max(rec.r_z, std::sqrt(res2));
    }

    for (std::size_t j = 0; j < p; ++j) {
      double* g = &s.g(j, 0);
      double* lam = &s.lambda3(j, 0);
      const double* aj = &at(j, 0);
      for (std::size_t i = 0; i < n; ++i) g[i] = aj[i] - lam[i] / cfg.nu3;
      detail::prox_l2_span({g, n},
                           cfg.gamma3 * cfg.weights.feature_factors[j] / cfg.nu3);
      double res2 = 0.0;
      double* hcj = &hc(j, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g[i] - aj[i];
        res2 += r * r;
        lam[i] += cfg.nu3 * r;
        hcj[i] += lam[i] + cfg.nu3 * g[i];
      }
      rec.r_g = std::max(rec.r_g, std::sqrt(res2));
    }

    for (std::size_t j = 0; j < p; ++j) {
      const double* hcj = &hc(j, 0);
      for (std::size_t i = 0; i < n; ++i) h(i, j) += hcj[i];
    }

    a_prev = s.a;
    solver.solve_into(h, s.a);

    double change2 = 0.0, prev2 = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const double an = s.a.data()[i];
      const double ap = a_prev.data()[i];
      if (!(std::fabs(an) <= kDivergenceGuard)) finite = false;
      change2 += (an - ap) * (an - ap);
      prev2 += ap * ap;
    }
    if (!finite)
      throw NonFiniteError("fit: iterate diverged past the magnitude guard");
    rec.a_change = std::sqrt(change2) / std::max(1.0, std::sqrt(prev2));

    s.iteration = m;
    s.history.push_back(rec);
    if (rec.a_change <= cfg.tol) {
      report.converged = true;
      break;
    }
  }

  report.iterations = s.iteration;
  report.objective = objective(x, s, cfg);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace spacobi
