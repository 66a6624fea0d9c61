// spacobi: sparse convex biclustering from the command line.
//
// Subcommands: fit, simulate, tune, path, eval, heatmap.
// Exit codes: 0 success, 1 parse/validation failure, 2 fit did not
// converge (artifacts are still written), 3 I/O failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "spacobi/spacobi.hpp"

namespace fs = std::filesystem;
using namespace spacobi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitIo = 3;

// Values shared by the fitting subcommands.
struct FitOptions {
  double gamma = -1.0;  // combined mode when >= 0
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double nu1 = 1.0;
  double nu2 = 1.0;
  double nu3 = 1.0;
  std::string q = "2";
  double tol = 1e-5;
  std::size_t max_iter = 10000;
  std::size_t m = 5;
  double phi = 0.5;
  bool raw_phi = false;
  bool no_adaptive = false;
  double eps = 1e-4;
};

ProxKind parse_q(const std::string& q) {
  if (q == "1") return ProxKind::L1;
  if (q == "2") return ProxKind::L2;
  if (q == "inf") return ProxKind::Linf;
  throw BadSpecError("--q must be one of 1, 2, inf");
}

void add_fit_options(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--gamma", o.gamma,
                  "Combined fusion penalty (two-parameter mode)");
  cmd->add_option("--gamma1", o.gamma1, "Row fusion penalty");
  cmd->add_option("--gamma2", o.gamma2, "Column fusion penalty");
  cmd->add_option("--gamma3", o.gamma3, "Feature sparsity penalty");
  cmd->add_option("--nu1", o.nu1, "ADMM step size for the row block");
  cmd->add_option("--nu2", o.nu2, "ADMM step size for the column block");
  cmd->add_option("--nu3", o.nu3, "ADMM step size for the feature block");
  cmd->add_option("--q", o.q, "Fusion norm: 1, 2 or inf")
      ->check(CLI::IsMember({"1", "2", "inf"}));
  cmd->add_option("--tol", o.tol, "Relative-change convergence tolerance");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap");
  cmd->add_option("--m", o.m, "Nearest-neighbor count for the weights");
  cmd->add_option("--phi", o.phi, "Gaussian kernel bandwidth parameter");
  cmd->add_flag("--raw-phi", o.raw_phi,
                "Apply phi to raw squared distances (no median scaling)");
  cmd->add_flag("--no-adaptive", o.no_adaptive,
                "Use uniform feature factors instead of the pilot-based ones");
  cmd->add_option("--eps", o.eps, "Cluster extraction threshold");
}

// Config-file merge: any option the command line left untouched picks up
// the value found in the JSON config (keys are long option names without
// the leading dashes).
void merge_config(CLI::App* cmd, const json& cfg) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      continue;
    }
    if (opt->count() > 0) continue;
    std::string text;
    if (it.value().is_string())
      text = it.value().get<std::string>();
    else
      text = it.value().dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

PenaltyConfig penalty_from_options(const DenseMatrix& x, const FitOptions& o) {
  WeightOptions wopt;
  wopt.m = o.m;
  wopt.phi = o.phi;
  wopt.bandwidth = o.raw_phi ? BandwidthRule::Raw : BandwidthRule::Median;

  PenaltyConfig cfg;
  cfg.weights = build_weight_set(x, wopt);
  if (o.gamma >= 0.0) {
    cfg.combined_gamma = o.gamma;
  } else {
    cfg.gamma1 = o.gamma1;
    cfg.gamma2 = o.gamma2;
  }
  cfg.gamma3 = o.gamma3;
  cfg.nu1 = o.nu1;
  cfg.nu2 = o.nu2;
  cfg.nu3 = o.nu3;
  cfg.q = parse_q(o.q);
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  return cfg;
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
}

json metrics_against_truth(const BiclusterResult& clusters,
                           const json& truth) {
  json m;
  const auto row_truth = truth.at("row_truth").get<std::vector<std::size_t>>();
  const auto col_truth = truth.at("col_truth").get<std::vector<std::size_t>>();
  const auto mask_int = truth.at("informative_mask").get<std::vector<int>>();
  std::vector<bool> truth_mask(mask_int.begin(), mask_int.end());

  m["row_ari"] = adjusted_rand_index(clusters.row_labels, row_truth);

  // Column agreement is scored on the informative features only; the
  // truth defines no column classes for noise features.
  std::vector<std::size_t> fitted_cols, product_fit, product_truth;
  for (std::size_t j = 0; j < truth_mask.size(); ++j)
    if (truth_mask[j]) fitted_cols.push_back(clusters.col_labels[j]);
  m["col_ari"] = adjusted_rand_index(fitted_cols, col_truth);

  const std::size_t n = clusters.row_labels.size();
  std::size_t ncol = 0;
  for (auto c : clusters.col_labels) ncol = std::max(ncol, c + 1);
  std::size_t tcol = 0;
  for (auto c : col_truth) tcol = std::max(tcol, c + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t jt = 0;
    for (std::size_t j = 0; j < truth_mask.size(); ++j) {
      if (!truth_mask[j]) continue;
      product_fit.push_back(clusters.row_labels[i] * ncol +
                            clusters.col_labels[j]);
      product_truth.push_back(row_truth[i] * tcol + col_truth[jt]);
      ++jt;
    }
  }
  m["product_ari"] = adjusted_rand_index(product_fit, product_truth);

  const auto [fnr, fpr] = selection_rates(clusters.feature_mask, truth_mask);
  m["fnr"] = fnr;
  m["fpr"] = fpr;
  return m;
}

json point_params(const GridPoint& pt) {
  json j;
  if (pt.two_parameter) {
    j["gamma"] = pt.gamma();
  } else {
    j["gamma1"] = pt.gamma1;
    j["gamma2"] = pt.gamma2;
  }
  j["gamma3"] = pt.gamma3;
  return j;
}

// ---------------------------------------------------------------- fit --

int run_fit(const std::string& input, const fs::path& out,
            const FitOptions& o, const std::string& truth_path,
            const std::string& init_state_path, bool save_state,
            bool heatmap) {
  const DataMatrix dm = read_csv(input);
  PenaltyConfig cfg = penalty_from_options(dm.values, o);

  if (!o.no_adaptive && cfg.gamma3 > 0.0)
    cfg.weights.feature_factors = adaptive_factors(dm.values, cfg);

  std::optional<AdmmState> init;
  if (!init_state_path.empty())
    init = state_from_json(load_json(init_state_path));

  const FitReport report = fit(dm.values, cfg, init);
  const BiclusterResult clusters = extract_clusters(report.state.a, o.eps);

  ensure_out_dir(out);
  json result;
  result["version"] = 1;
  result["params"] = {{"gamma1", cfg.effective_gamma1()},
                      {"gamma2", cfg.effective_gamma2()},
                      {"gamma3", cfg.gamma3},
                      {"nu1", cfg.nu1},
                      {"nu2", cfg.nu2},
                      {"nu3", cfg.nu3},
                      {"q", o.q},
                      {"tol", cfg.tol}};
  result["fit"] = fit_summary_to_json(report);
  result["clusters"] = bicluster_to_json(clusters);
  if (!truth_path.empty())
    result["metrics"] = metrics_against_truth(clusters, load_json(truth_path));
  save_json(result, out / "result.json");

  DataMatrix a_out;
  a_out.values = report.state.a;
  a_out.col_labels = dm.col_labels;
  write_csv(a_out, out / "A_hat.csv");

  if (save_state) save_json(state_to_json(report.state), out / "state.json");
  if (heatmap) render_heatmap(report.state.a, out / "heatmap.pgm");

  if (!report.converged) {
    std::cerr << "spacobi: fit did not converge within " << cfg.max_iter
              << " iterations\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// ----------------------------------------------------------- simulate --

int run_simulate(const SimSpec& base, std::size_t replicates, bool pair,
                 const fs::path& out) {
  ensure_out_dir(out);
  for (std::size_t r = 0; r < replicates; ++r) {
    SimSpec spec = base;
    spec.seed = base.seed + r;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "rep%03zu", r);

    DataMatrix dm;
    if (pair) {
      const auto [train, val] = generate_pair(spec);
      dm.values = train.x;
      write_csv(dm, out / (std::string(tag) + ".csv"));
      DataMatrix vm;
      vm.values = val.x;
      write_csv(vm, out / (std::string(tag) + ".val.csv"));
      save_json(truth_to_json(spec, train), out / (std::string(tag) + ".truth.json"));
    } else {
      const auto data = generate(spec);
      dm.values = data.x;
      write_csv(dm, out / (std::string(tag) + ".csv"));
      save_json(truth_to_json(spec, data), out / (std::string(tag) + ".truth.json"));
    }
  }
  return kExitOk;
}

// --------------------------------------------------------------- tune --

struct LadderOptions {
  std::vector<double> gamma_ladder;
  std::vector<double> gamma3_ladder;
  double gamma_lo = 0.5, gamma_hi = 5.5;
  std::size_t gamma_count = 5;
  double gamma3_lo = 0.0, gamma3_hi = 7.5;
  std::size_t gamma3_count = 10;
};

GridSpec grid_from(const LadderOptions& lo) {
  GridSpec grid;
  grid.gamma_ladder = lo.gamma_ladder.empty()
                          ? log_ladder(lo.gamma_lo, lo.gamma_hi, lo.gamma_count)
                          : lo.gamma_ladder;
  grid.gamma3_ladder =
      lo.gamma3_ladder.empty()
          ? log_ladder(lo.gamma3_lo, lo.gamma3_hi, lo.gamma3_count)
          : lo.gamma3_ladder;
  grid.mode = GridMode::TwoParameter;
  return grid;
}

int run_tune(const std::string& input, const fs::path& out, const FitOptions& o,
             const LadderOptions& lo, const std::string& method,
             const std::string& validation_path, const std::string& truth_path,
             std::size_t bootstrap, std::uint64_t seed, bool compare_cold,
             bool no_warm) {
  const DataMatrix dm = read_csv(input);
  PenaltyConfig base = penalty_from_options(dm.values, o);
  base.combined_gamma.reset();
  base.gamma1 = base.gamma2 = base.gamma3 = 0.0;

  const GridSpec grid = grid_from(lo);
  GridSearchOptions gopt;
  gopt.adaptive = !o.no_adaptive;
  gopt.warm_start = !no_warm;

  WeightOptions wopt;
  wopt.m = o.m;
  wopt.phi = o.phi;
  wopt.bandwidth = o.raw_phi ? BandwidthRule::Raw : BandwidthRule::Median;

  const auto fits = grid_search(dm.values, grid, base, gopt);

  json report;
  report["version"] = 1;
  report["method"] = method;
  report["mode"] = "two-parameter";
  report["seed"] = seed;
  json points = json::array();
  std::size_t total_iterations = 0;
  bool all_converged = true;
  for (const auto& f : fits) {
    json pj = point_params(f.point);
    pj["ok"] = f.ok;
    if (f.ok) {
      pj["iterations"] = f.report.iterations;
      pj["objective"] = f.report.objective;
      pj["converged"] = f.report.converged;
      total_iterations += f.report.iterations;
      all_converged = all_converged && f.report.converged;
    } else {
      pj["error"] = f.error;
      all_converged = false;
    }
    points.push_back(pj);
  }
  report["total_iterations"] = total_iterations;

  std::size_t selected_index = 0;
  if (method == "stability") {
    const auto sel =
        stability_select(dm.values, grid, bootstrap, seed, base, wopt, gopt);
    for (std::size_t i = 0; i < sel.scores.size(); ++i) {
      points[i]["stability"] = sel.scores[i].dhat;
      points[i]["bootstrap_pairs"] = sel.scores[i].pair_count;
    }
    selected_index = sel.best_index;
    report["bootstrap"] = bootstrap;
  } else if (method == "ari") {
    if (validation_path.empty() || truth_path.empty())
      throw BadSpecError("tune --method ari needs --validation and --truth");
    const DataMatrix val = read_csv(validation_path);
    const json truth = load_json(truth_path);
    const auto labels = truth.at("row_truth").get<std::vector<std::size_t>>();
    const auto sel =
        ari_tune(dm.values, val.values, labels, grid, base, gopt);
    for (std::size_t i = 0; i < sel.scores.size(); ++i) {
      points[i]["ari"] = sel.scores[i].validation_ari;
      points[i]["train_ari"] = sel.scores[i].train_ari;
    }
    selected_index = sel.best_index;
  } else {
    throw BadSpecError("--method must be stability or ari");
  }

  if (compare_cold) {
    GridSearchOptions cold = gopt;
    cold.warm_start = false;
    const auto cold_fits = grid_search(dm.values, grid, base, cold);
    std::size_t cold_total = 0;
    for (const auto& f : cold_fits)
      if (f.ok) cold_total += f.report.iterations;
    report["cold_total_iterations"] = cold_total;
  }

  report["points"] = points;
  report["selected"] = point_params(fits[selected_index].point);
  report["selected"]["index"] = selected_index;

  ensure_out_dir(out);
  save_json(report, out / "grid_report.json");

  if (!all_converged) {
    std::cerr << "spacobi: at least one grid point did not converge\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// --------------------------------------------------------------- path --

int run_path(const std::string& input, const fs::path& out, const FitOptions& o,
             const LadderOptions& lo, const std::string& truth_path,
             double gamma) {
  const DataMatrix dm = read_csv(input);
  const json truth = load_json(truth_path);
  const auto mask_int = truth.at("informative_mask").get<std::vector<int>>();
  const std::vector<bool> truth_mask(mask_int.begin(), mask_int.end());

  PenaltyConfig base = penalty_from_options(dm.values, o);
  base.combined_gamma.reset();
  base.gamma1 = base.gamma2 = base.gamma3 = 0.0;
  GridSearchOptions gopt;
  gopt.adaptive = !o.no_adaptive;

  const std::vector<double> ladder =
      lo.gamma3_ladder.empty()
          ? log_ladder(lo.gamma3_lo, lo.gamma3_hi, lo.gamma3_count)
          : lo.gamma3_ladder;
  const auto path = selection_path(dm.values, gamma, ladder, truth_mask, base,
                                   gopt, o.eps);

  ensure_out_dir(out);
  std::string csv = "gamma3,fnr,fpr,tpr\n";
  for (const auto& pt : path.points) {
    csv += detail::format_double(pt.gamma3);
    csv += ',';
    csv += detail::format_double(pt.fnr);
    csv += ',';
    csv += detail::format_double(pt.fpr);
    csv += ',';
    csv += detail::format_double(pt.tpr);
    csv += '\n';
  }
  {
    std::ofstream f(out / "fnr_fpr_path.csv", std::ios::binary);
    if (!f) throw IoError("cannot write fnr_fpr_path.csv");
    f << csv;
  }

  json report;
  report["version"] = 1;
  report["gamma"] = gamma;
  report["auc"] = path.auc;
  json pts = json::array();
  bool all_converged = true;
  for (const auto& pt : path.points) {
    pts.push_back({{"gamma3", pt.gamma3},
                   {"fnr", pt.fnr},
                   {"fpr", pt.fpr},
                   {"tpr", pt.tpr},
                   {"converged", pt.converged}});
    all_converged = all_converged && pt.converged;
  }
  report["points"] = pts;
  save_json(report, out / "path_report.json");
  return all_converged ? kExitOk : kExitNoConvergence;
}

// --------------------------------------------------------------- eval --

int run_eval(const std::string& result_path, const std::string& truth_path,
             const std::string& out_file) {
  const json result = load_json(result_path);
  const json truth = load_json(truth_path);

  BiclusterResult clusters;
  clusters.row_labels =
      result.at("clusters").at("row_labels").get<std::vector<std::size_t>>();
  clusters.col_labels =
      result.at("clusters").at("col_labels").get<std::vector<std::size_t>>();
  const auto mask_int =
      result.at("clusters").at("feature_mask").get<std::vector<int>>();
  clusters.feature_mask.assign(mask_int.begin(), mask_int.end());

  json eval;
  eval["version"] = 1;
  eval["metrics"] = metrics_against_truth(clusters, truth);
  if (out_file.empty())
    std::cout << eval.dump(2) << '\n';
  else
    save_json(eval, out_file);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse convex biclustering"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; command-line flags win")
      ->expected(1);

  // fit
  auto* cmd_fit = app.add_subcommand("fit", "Fit one penalized model to a CSV matrix");
  FitOptions fit_opts;
  std::string fit_input, fit_truth, fit_init;
  std::string fit_out = ".";
  bool fit_heatmap = false, fit_save_state = false;
  std::uint64_t fit_seed = 0;
  cmd_fit->add_option("--input", fit_input, "Input CSV matrix")->required();
  cmd_fit->add_option("--out", fit_out, "Output directory");
  add_fit_options(cmd_fit, fit_opts);
  cmd_fit->add_option("--truth", fit_truth, "Truth sidecar JSON for metrics");
  cmd_fit->add_option("--init-state", fit_init, "Warm-start state snapshot");
  cmd_fit->add_flag("--save-state", fit_save_state, "Write state.json snapshot");
  cmd_fit->add_flag("--heatmap", fit_heatmap, "Render heatmap.pgm of A-hat");
  cmd_fit->add_option("--seed", fit_seed, "Unused by fit; accepted for uniformity");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "Generate checkerboard benchmark data");
  SimSpec sim_spec;
  std::size_t sim_replicates = 1;
  bool sim_pair = false;
  std::string sim_out = ".";
  cmd_sim->add_option("--n", sim_spec.n, "Observations");
  cmd_sim->add_option("--p", sim_spec.p, "Features");
  cmd_sim->add_option("--p-true", sim_spec.p_true, "Informative features");
  cmd_sim->add_option("--k", sim_spec.k_row_clusters, "Row clusters");
  cmd_sim->add_option("--r", sim_spec.r_col_clusters, "Column clusters");
  cmd_sim->add_option("--sigma", sim_spec.sigma, "Informative-feature SD");
  cmd_sim->add_option("--noise-var", sim_spec.noise_variance, "Noise variance");
  cmd_sim->add_option("--mean-lo", sim_spec.mean_grid_lo, "Mean grid lower bound");
  cmd_sim->add_option("--mean-hi", sim_spec.mean_grid_hi, "Mean grid upper bound");
  cmd_sim->add_option("--seed", sim_spec.seed, "Base seed; replicate r uses seed + r");
  cmd_sim->add_option("--replicates", sim_replicates, "Replicate count");
  cmd_sim->add_flag("--pair", sim_pair, "Also emit a validation matrix per replicate");
  cmd_sim->add_option("--out", sim_out, "Output directory");

  // tune
  auto* cmd_tune = app.add_subcommand("tune", "Grid search with warm starts and selection");
  FitOptions tune_opts;
  LadderOptions tune_ladder;
  std::string tune_input, tune_validation, tune_truth;
  std::string tune_out = ".";
  std::string tune_method = "stability";
  std::size_t tune_bootstrap = 10;
  std::uint64_t tune_seed = 0;
  bool tune_cold = false, tune_no_warm = false;
  cmd_tune->add_option("--input", tune_input, "Input CSV matrix")->required();
  cmd_tune->add_option("--out", tune_out, "Output directory");
  add_fit_options(cmd_tune, tune_opts);
  cmd_tune->add_option("--method", tune_method, "stability or ari")
      ->check(CLI::IsMember({"stability", "ari"}));
  cmd_tune->add_option("--validation", tune_validation, "Validation CSV (ari)");
  cmd_tune->add_option("--truth", tune_truth, "Truth sidecar JSON (ari)");
  cmd_tune->add_option("--bootstrap", tune_bootstrap, "Bootstrap pair count B");
  cmd_tune->add_option("--seed", tune_seed, "Bootstrap seed");
  cmd_tune->add_option("--gamma-ladder", tune_ladder.gamma_ladder,
                       "Explicit gamma ladder values")->expected(-1);
  cmd_tune->add_option("--gamma3-ladder", tune_ladder.gamma3_ladder,
                       "Explicit gamma3 ladder values")->expected(-1);
  cmd_tune->add_option("--gamma-lo", tune_ladder.gamma_lo, "log gamma ladder start");
  cmd_tune->add_option("--gamma-hi", tune_ladder.gamma_hi, "log gamma ladder end");
  cmd_tune->add_option("--gamma-count", tune_ladder.gamma_count, "gamma ladder size");
  cmd_tune->add_option("--gamma3-lo", tune_ladder.gamma3_lo, "log gamma3 ladder start");
  cmd_tune->add_option("--gamma3-hi", tune_ladder.gamma3_hi, "log gamma3 ladder end");
  cmd_tune->add_option("--gamma3-count", tune_ladder.gamma3_count, "gamma3 ladder size");
  cmd_tune->add_flag("--compare-cold", tune_cold,
                     "Also run the grid cold and report total iterations");
  cmd_tune->add_flag("--no-warm", tune_no_warm, "Disable warm starts");

  // path
  auto* cmd_path = app.add_subcommand("path", "FNR/FPR path over a gamma3 ladder");
  FitOptions path_opts;
  LadderOptions path_ladder;
  std::string path_input, path_truth;
  std::string path_out = ".";
  cmd_path->add_option("--input", path_input, "Input CSV matrix")->required();
  cmd_path->add_option("--truth", path_truth, "Truth sidecar JSON")->required();
  cmd_path->add_option("--out", path_out, "Output directory");
  add_fit_options(cmd_path, path_opts);  // --gamma fixes the fusion penalty
  cmd_path->add_option("--gamma3-ladder", path_ladder.gamma3_ladder,
                       "Explicit gamma3 ladder values")->expected(-1);
  cmd_path->add_option("--gamma3-lo", path_ladder.gamma3_lo, "log ladder start");
  cmd_path->add_option("--gamma3-hi", path_ladder.gamma3_hi, "log ladder end");
  cmd_path->add_option("--gamma3-count", path_ladder.gamma3_count, "ladder size");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "Score a result.json against a truth sidecar");
  std::string eval_result, eval_truth, eval_out;
  cmd_eval->add_option("--result", eval_result, "result.json path")->required();
  cmd_eval->add_option("--truth", eval_truth, "Truth sidecar JSON")->required();
  cmd_eval->add_option("--out", eval_out, "Output file (stdout when omitted)");

  // heatmap
  auto* cmd_heat = app.add_subcommand("heatmap", "Render a CSV matrix as a PGM heatmap");
  std::string heat_input, heat_output = "heatmap.pgm";
  cmd_heat->add_option("--input", heat_input, "Input CSV matrix")->required();
  cmd_heat->add_option("--output", heat_output, "Output PGM file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      const json cfg = load_json(config_path);
      for (CLI::App* sub :
           {cmd_fit, cmd_sim, cmd_tune, cmd_path, cmd_eval, cmd_heat})
        if (sub->parsed()) merge_config(sub, cfg);
    }

    if (cmd_fit->parsed()) {
      // gamma < 0 means "not set": fall back to gamma1/gamma2.
      return run_fit(fit_input, fit_out, fit_opts, fit_truth, fit_init,
                     fit_save_state, fit_heatmap);
    }
    if (cmd_sim->parsed())
      return run_simulate(sim_spec, sim_replicates, sim_pair, sim_out);
    if (cmd_tune->parsed())
      return run_tune(tune_input, tune_out, tune_opts, tune_ladder, tune_method,
                      tune_validation, tune_truth, tune_bootstrap, tune_seed,
                      tune_cold, tune_no_warm);
    if (cmd_path->parsed())
      return run_path(path_input, path_out, path_opts, path_ladder, path_truth,
                      path_opts.gamma >= 0.0 ? path_opts.gamma : 50.0);
    if (cmd_eval->parsed()) return run_eval(eval_result, eval_truth, eval_out);
    if (cmd_heat->parsed()) {
      const DataMatrix dm = read_csv(heat_input);
      render_heatmap(dm.values, heat_output);
      return kExitOk;
    }
  } catch (const CsvParseError& e) {
    std::cerr << "spacobi: CSV parse failure: " << e.what() << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    std::cerr << "spacobi: I/O failure: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "spacobi: " << e.what() << '\n';
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << "spacobi: JSON failure: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}
