#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spacobi/admm.hpp"
#include "spacobi/clusters.hpp"
#include "spacobi/csv.hpp"
#include "spacobi/errors.hpp"
#include "spacobi/model_select.hpp"
#include "spacobi/simulate.hpp"

namespace spacobi {

using json = nlohmann::json;

inline constexpr int kStateFormatVersion = 1;

inline json matrix_to_json(const DenseMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.data().begin(), m.data().end());
  return j;
}

inline DenseMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  return DenseMatrix(rows, cols, std::move(data));
}

// Versioned warm-start snapshot. JSON doubles are emitted in shortest
// round-trip form, so the state survives save/load bit for bit.
inline json state_to_json(const AdmmState& s) {
  json j;
  j["format"] = "spacobi-admm-state";
  j["version"] = kStateFormatVersion;
  j["iteration"] = s.iteration;
  j["a"] = matrix_to_json(s.a);
  j["v"] = matrix_to_json(s.v);
  j["z"] = matrix_to_json(s.z);
  j["g"] = matrix_to_json(s.g);
  j["lambda1"] = matrix_to_json(s.lambda1);
  j["lambda2"] = matrix_to_json(s.lambda2);
  j["lambda3"] = matrix_to_json(s.lambda3);
  json hist = json::array();
  for (const auto& r : s.history)
    hist.push_back({{"r_v", r.r_v},
                    {"r_z", r.r_z},
                    {"r_g", r.r_g},
                    {"a_change", r.a_change}});
  j["history"] = hist;
  return j;
}

inline AdmmState state_from_json(const json& j) {
  if (j.value("format", "") != "spacobi-admm-state")
    throw BadSpecError("state_from_json: unrecognized snapshot format");
  if (j.value("version", 0) != kStateFormatVersion)
    throw BadSpecError("state_from_json: unsupported snapshot version");
  AdmmState s;
  s.iteration = j.at("iteration").get<std::size_t>();
  s.a = matrix_from_json(j.at("a"));
  s.v = matrix_from_json(j.at("v"));
  s.z = matrix_from_json(j.at("z"));
  s.g = matrix_from_json(j.at("g"));
  s.lambda1 = matrix_from_json(j.at("lambda1"));
  s.lambda2 = matrix_from_json(j.at("lambda2"));
  s.lambda3 = matrix_from_json(j.at("lambda3"));
  for (const auto& r : j.at("history")) {
    ResidualRecord rec;
    rec.r_v = r.at("r_v").get<double>();
    rec.r_z = r.at("r_z").get<double>();
    rec.r_g = r.at("r_g").get<double>();
    rec.a_change = r.at("a_change").get<double>();
    s.history.push_back(rec);
  }
  return s;
}

inline json bicluster_to_json(const BiclusterResult& r) {
  json j;
  j["row_labels"] = r.row_labels;
  j["col_labels"] = r.col_labels;
  j["feature_mask"] = std::vector<int>(r.feature_mask.begin(),
                                       r.feature_mask.end());
  j["threshold"] = r.threshold;
  std::size_t k = 0, c = 0, sel = 0;
  for (auto v : r.row_labels) k = std::max(k, v + 1);
  for (auto v : r.col_labels) c = std::max(c, v + 1);
  for (bool b : r.feature_mask) sel += b;
  j["n_row_clusters"] = k;
  j["n_col_clusters"] = c;
  j["n_selected_features"] = sel;
  return j;
}

inline json fit_summary_to_json(const FitReport& r) {
  json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["objective"] = r.objective;
  if (!r.state.history.empty()) {
    const auto& last = r.state.history.back();
    j["residuals"] = {{"r_v", last.r_v},
                      {"r_z", last.r_z},
                      {"r_g", last.r_g},
                      {"a_change", last.a_change}};
  }
  return j;
}

inline json truth_to_json(const SimSpec& spec, const CheckerboardData& d) {
  json j;
  j["version"] = 1;
  j["row_truth"] = d.row_truth;
  j["col_truth"] = d.col_truth;
  j["informative_mask"] =
      std::vector<int>(d.informative_mask.begin(), d.informative_mask.end());
  j["spec"] = {{"n", spec.n},
               {"p", spec.p},
               {"p_true", spec.p_true},
               {"k_row_clusters", spec.k_row_clusters},
               {"r_col_clusters", spec.r_col_clusters},
               {"mean_grid_lo", spec.mean_grid_lo},
               {"mean_grid_hi", spec.mean_grid_hi},
               {"sigma", spec.sigma},
               {"noise_variance", spec.noise_variance},
               {"seed", spec.seed}};
  return j;
}

inline json save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
  return j;
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError("JSON parse failure in " + path.string() + ": " + e.what());
  }
  return j;
}

// Minimal JSON-schema checker covering the subset the bundled schemas
// use: type, properties, required, items, enum, minimum, maximum.
// Returns an error description, or nullopt when the instance validates.
inline std::optional<std::string> validate_schema(const json& instance,
                                                  const json& schema,
                                                  const std::string& where = "$") {
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    bool ok = false;
    if (t == "object") ok = instance.is_object();
    else if (t == "array") ok = instance.is_array();
    else if (t == "string") ok = instance.is_string();
    else if (t == "number") ok = instance.is_number();
    else if (t == "integer") ok = instance.is_number_integer();
    else if (t == "boolean") ok = instance.is_boolean();
    else if (t == "null") ok = instance.is_null();
    if (!ok) return where + ": expected type " + t;
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"])
      if (v == instance) ok = true;
    if (!ok) return where + ": value not in enum";
  }
  if (instance.is_number()) {
    if (schema.contains("minimum") &&
        instance.get<double>() < schema["minimum"].get<double>())
      return where + ": below minimum";
    if (schema.contains("maximum") &&
        instance.get<double>() > schema["maximum"].get<double>())
      return where + ": above maximum";
  }
  if (instance.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema["required"])
        if (!instance.contains(k.get<std::string>()))
          return where + ": missing required key " + k.get<std::string>();
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin();
           it != schema["properties"].end(); ++it)
        if (instance.contains(it.key()))
          if (auto err = validate_schema(instance[it.key()], it.value(),
                                         where + "." + it.key()))
            return err;
  }
  if (instance.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const auto& v : instance) {
      if (auto err = validate_schema(v, schema["items"],
                                     where + "[" + std::to_string(i) + "]"))
        return err;
      ++i;
    }
  }
  return std::nullopt;
}

}  // namespace spacobi
