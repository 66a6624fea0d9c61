// End-to-end checks of the command-line tool. The binary path comes from
// the SPACOBI_CLI environment variable (set by ctest).
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spacobi/reports.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SPACOBI_CLI");
  REQUIRE(p != nullptr);
  return p;
}

fs::path source_dir() {
  const char* p = std::getenv("SPACOBI_SOURCE_DIR");
  REQUIRE(p != nullptr);
  return p;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("spacobi_cli_" + tag + "_" +
                        std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      cli_path() + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("cli fit on the identity recovers the input") {
  const fs::path dir = fresh_dir("fit");
  spit(dir / "x.csv", "1,0\n0,1\n");
  const int rc = run_cli("fit --input " + (dir / "x.csv").string() +
                             " --gamma 0 --gamma3 0 --out " + dir.string(),
                         dir / "log.txt");
  REQUIRE(rc == 0);

  const std::string a_hat = slurp(dir / "A_hat.csv");
  REQUIRE(a_hat == "1,0\n0,1\n");

  const json result = spacobi::load_json(dir / "result.json");
  REQUIRE(result["fit"]["converged"].get<bool>());
  const json schema =
      spacobi::load_json(source_dir() / "schemas" / "result.schema.json");
  const auto err = spacobi::validate_schema(result, schema);
  if (err) FAIL(*err);
}

TEST_CASE("cli fit reports parse failures with the line number") {
  const fs::path dir = fresh_dir("badcsv");
  spit(dir / "x.csv", "1,2\n3,banana\n");
  const int rc = run_cli("fit --input " + (dir / "x.csv").string() +
                             " --gamma 0 --out " + dir.string(),
                         dir / "log.txt");
  REQUIRE(rc == 1);
  REQUIRE(slurp(dir / "log.txt").find("line 2") != std::string::npos);
}

TEST_CASE("cli missing input exits with the I/O code") {
  const fs::path dir = fresh_dir("noinput");
  const int rc = run_cli("fit --input " + (dir / "nope.csv").string() +
                             " --gamma 0 --out " + dir.string(),
                         dir / "log.txt");
  REQUIRE(rc == 3);
}

TEST_CASE("cli fit exit code 2 on non-convergence still writes artifacts") {
  const fs::path dir = fresh_dir("noconv");
  spit(dir / "x.csv", "5,1,0\n1,6,1\n0,1,7\n2,9,4\n");
  const int rc = run_cli("fit --input " + (dir / "x.csv").string() +
                             " --gamma 4 --gamma3 1 --max-iter 2 --tol 1e-14 --out " +
                             dir.string(),
                         dir / "log.txt");
  REQUIRE(rc == 2);
  REQUIRE(fs::exists(dir / "result.json"));
  REQUIRE(fs::exists(dir / "A_hat.csv"));
  const json result = spacobi::load_json(dir / "result.json");
  REQUIRE_FALSE(result["fit"]["converged"].get<bool>());
}

TEST_CASE("cli simulate is reproducible and honors the replicate count") {
  const fs::path d1 = fresh_dir("sim1");
  const fs::path d2 = fresh_dir("sim2");
  const std::string args =
      "simulate --n 12 --p 16 --p-true 8 --seed 42 --replicates 3 --out ";
  REQUIRE(run_cli(args + d1.string(), d1 / "log.txt") == 0);
  REQUIRE(run_cli(args + d2.string(), d2 / "log.txt") == 0);

  for (int r = 0; r < 3; ++r) {
    char tag[16];
    std::snprintf(tag, sizeof(tag), "rep%03d", r);
    REQUIRE(fs::exists(d1 / (std::string(tag) + ".csv")));
    REQUIRE(slurp(d1 / (std::string(tag) + ".csv")) ==
            slurp(d2 / (std::string(tag) + ".csv")));
  }
  REQUIRE_FALSE(fs::exists(d1 / "rep003.csv"));

  const json truth = spacobi::load_json(d1 / "rep000.truth.json");
  const auto mask = truth["informative_mask"].get<std::vector<int>>();
  int informative = 0;
  for (int b : mask) informative += b;
  REQUIRE(informative == 8);
}

TEST_CASE("cli tune on a single-point grid matches cli fit") {
  const fs::path dir = fresh_dir("tune1");
  REQUIRE(run_cli("simulate --n 10 --p 12 --p-true 6 --seed 3 --out " +
                      dir.string(),
                  dir / "slog.txt") == 0);
  const std::string x = (dir / "rep000.csv").string();

  REQUIRE(run_cli("fit --input " + x +
                      " --gamma 2 --gamma3 0.5 --no-adaptive --out " +
                      (dir / "fit").string(),
                  dir / "flog.txt") == 0);
  REQUIRE(run_cli("tune --input " + x +
                      " --method stability --bootstrap 1 --seed 1"
                      " --gamma-ladder 2 --gamma3-ladder 0.5"
                      " --no-adaptive --no-warm --out " +
                      (dir / "tune").string(),
                  dir / "tlog.txt") == 0);

  const json fitr = spacobi::load_json(dir / "fit" / "result.json");
  const json tuner = spacobi::load_json(dir / "tune" / "grid_report.json");
  REQUIRE(tuner["points"].size() == 1);
  REQUIRE(tuner["points"][0]["objective"].get<double>() ==
          fitr["fit"]["objective"].get<double>());
  REQUIRE(tuner["points"][0]["iterations"].get<std::size_t>() ==
          fitr["fit"]["iterations"].get<std::size_t>());
  REQUIRE(tuner["selected"]["index"].get<int>() == 0);

  const json schema =
      spacobi::load_json(source_dir() / "schemas" / "grid_report.schema.json");
  const auto err = spacobi::validate_schema(tuner, schema);
  if (err) FAIL(*err);
}

TEST_CASE("cli tune is byte-deterministic under a fixed seed") {
  const fs::path dir = fresh_dir("tunedet");
  REQUIRE(run_cli("simulate --n 10 --p 12 --p-true 6 --seed 5 --out " +
                      dir.string(),
                  dir / "slog.txt") == 0);
  const std::string x = (dir / "rep000.csv").string();
  const std::string args = "tune --input " + x +
                           " --method stability --bootstrap 2 --seed 11"
                           " --gamma-ladder 1 3 --gamma3-ladder 0.5 2";
  REQUIRE(run_cli(args + " --out " + (dir / "t1").string(),
                  dir / "l1.txt") == 0);
  REQUIRE(run_cli(args + " --out " + (dir / "t2").string(),
                  dir / "l2.txt") == 0);
  REQUIRE(slurp(dir / "t1" / "grid_report.json") ==
          slurp(dir / "t2" / "grid_report.json"));
}

TEST_CASE("cli path endpoints and report") {
  const fs::path dir = fresh_dir("path");
  REQUIRE(run_cli("simulate --n 14 --p 18 --p-true 9 --seed 8 --out " +
                      dir.string(),
                  dir / "slog.txt") == 0);
  const int rc =
      run_cli("path --input " + (dir / "rep000.csv").string() + " --truth " +
                  (dir / "rep000.truth.json").string() +
                  " --gamma 4 --gamma3-lo 0 --gamma3-hi 5 --gamma3-count 5"
                  " --out " +
                  (dir / "out").string(),
              dir / "plog.txt");
  REQUIRE(rc == 0);

  const std::string csv = slurp(dir / "out" / "fnr_fpr_path.csv");
  REQUIRE(csv.rfind("gamma3,fnr,fpr,tpr\n", 0) == 0);
  // Smallest gamma3 keeps every feature.
  REQUIRE(csv.find("1,0,1,1\n") != std::string::npos);

  const json report = spacobi::load_json(dir / "out" / "path_report.json");
  const json schema =
      spacobi::load_json(source_dir() / "schemas" / "path_report.schema.json");
  const auto err = spacobi::validate_schema(report, schema);
  if (err) FAIL(*err);

  double prev = -1.0;
  for (const auto& pt : report["points"]) {
    REQUIRE(pt["gamma3"].get<double>() > prev);
    prev = pt["gamma3"].get<double>();
  }
}

TEST_CASE("cli eval recomputes metrics from artifacts") {
  const fs::path dir = fresh_dir("eval");
  REQUIRE(run_cli("simulate --n 12 --p 14 --p-true 7 --seed 9 --out " +
                      dir.string(),
                  dir / "slog.txt") == 0);
  REQUIRE(run_cli("fit --input " + (dir / "rep000.csv").string() +
                      " --gamma 3 --gamma3 1 --truth " +
                      (dir / "rep000.truth.json").string() + " --out " +
                      (dir / "fit").string(),
                  dir / "flog.txt") == 0);
  REQUIRE(run_cli("eval --result " + (dir / "fit" / "result.json").string() +
                      " --truth " + (dir / "rep000.truth.json").string() +
                      " --out " + (dir / "eval.json").string(),
                  dir / "elog.txt") == 0);

  const json ev = spacobi::load_json(dir / "eval.json");
  const json fitr = spacobi::load_json(dir / "fit" / "result.json");
  REQUIRE(ev["metrics"]["row_ari"].get<double>() ==
          fitr["metrics"]["row_ari"].get<double>());
  REQUIRE(ev["metrics"]["fnr"].get<double>() >= 0.0);
  REQUIRE(ev["metrics"]["fpr"].get<double>() <= 1.0);
}

TEST_CASE("cli heatmap renders the expected header") {
  const fs::path dir = fresh_dir("heat");
  spit(dir / "x.csv", "0,1\n1,0\n");
  REQUIRE(run_cli("heatmap --input " + (dir / "x.csv").string() +
                      " --output " + (dir / "h.pgm").string(),
                  dir / "log.txt") == 0);
  const std::string pgm = slurp(dir / "h.pgm");
  REQUIRE(pgm.rfind("P5\n2 2\n255\n", 0) == 0);
  REQUIRE(pgm.size() == 15);
}

TEST_CASE("cli config file fills unset options") {
  const fs::path dir = fresh_dir("config");
  spit(dir / "x.csv", "1,0\n0,1\n");
  spit(dir / "cfg.json", "{\"gamma\": 0, \"gamma3\": 0}");
  const int rc = run_cli("--config " + (dir / "cfg.json").string() +
                             " fit --input " + (dir / "x.csv").string() +
                             " --out " + dir.string(),
                         dir / "log.txt");
  REQUIRE(rc == 0);
  const json result = spacobi::load_json(dir / "result.json");
  REQUIRE(result["params"]["gamma1"].get<double>() == 0.0);
  REQUIRE(result["params"]["gamma3"].get<double>() == 0.0);

  // Command line wins over the config file.
  spit(dir / "cfg2.json", "{\"gamma\": 99, \"gamma3\": 0}");
  const int rc2 = run_cli("--config " + (dir / "cfg2.json").string() +
                              " fit --input " + (dir / "x.csv").string() +
                              " --gamma 0 --out " + (dir / "o2").string(),
                          dir / "log2.txt");
  REQUIRE(rc2 == 0);
  const json r2 = spacobi::load_json(dir / "o2" / "result.json");
  REQUIRE(r2["params"]["gamma1"].get<double>() == 0.0);
}

TEST_CASE("cli warm-start snapshot round trip") {
  const fs::path dir = fresh_dir("warm");
  REQUIRE(run_cli("simulate --n 10 --p 12 --p-true 6 --seed 21 --out " +
                      dir.string(),
                  dir / "slog.txt") == 0);
  const std::string x = (dir / "rep000.csv").string();
  REQUIRE(run_cli("fit --input " + x +
                      " --gamma 2 --gamma3 0.5 --save-state --out " +
                      (dir / "first").string(),
                  dir / "l1.txt") == 0);
  REQUIRE(fs::exists(dir / "first" / "state.json"));
  REQUIRE(run_cli("fit --input " + x +
                      " --gamma 2 --gamma3 0.8 --init-state " +
                      (dir / "first" / "state.json").string() + " --out " +
                      (dir / "second").string(),
                  dir / "l2.txt") == 0);
  const json r2 = spacobi::load_json(dir / "second" / "result.json");
  REQUIRE(r2["fit"]["converged"].get<bool>());
}
