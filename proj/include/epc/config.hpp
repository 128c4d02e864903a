// Copyright 2026 The EPC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scenario files (JSON):
//
//   {
//     "mode": "improved",             // any descriptor mode name, e.g. "batch_private"
//     "p": 2, "m": 2, "n": 2,
//     "N": 14, "T": 0, "L": 1, "M": 1,
//     "D": 1,                          // 1-based; required iff the mode is private
//     "construction": {"strassen_pow": 1},
//     "modulus": 2305843009213693951,  // optional, default 2^61 - 1
//     "seed": 1,
//     "systematic": false,
//     "inputs": {"random": {"s": 4, "t": 4, "r": 4}},
//     "worker_model": {"latency": {"deterministic": 1.0},
//                      "stragglers": {"workers": [3], "infinite": true},
//                      "seed": 7}
//   }
//
// Construction specs: "naive" (uses p, m, n), "strassen", {"naive": [p, m, n]},
// {"strassen_pow": k}, {"compose": [spec, spec, ...]} (left fold, outer
// first), {"file": "path"}. Input files: {"files": {"a": [[...]], "b": [[...]]}}
// with paths indexed [library entry][batch member]. Relative paths resolve
// against the config file's directory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epc/bilinear.hpp"
#include "epc/bilinear_io.hpp"
#include "epc/cluster_sim.hpp"
#include "epc/descriptor.hpp"
#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix_io.hpp"
#include "epc/scheme.hpp"

namespace epc {

struct RandomInputs {
  std::size_t s = 0, t = 0, r = 0;
};

struct ScenarioConfig {
  SchemeDescriptor descriptor;
  std::optional<nlohmann::json> construction;  // unresolved spec
  std::uint64_t modulus = kMersenne61;
  std::optional<std::size_t> demand;           // 0-based
  std::optional<RandomInputs> random_inputs;
  std::vector<std::vector<std::string>> a_files, b_files;
  WorkerModel worker_model;
  std::uint64_t oracle_cap = std::uint64_t{1} << 24;
  std::filesystem::path base_dir;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  raise(ErrorCode::kInvalidConfig, "'" + field + "' " + what);
}

inline std::size_t positive(const nlohmann::json& j, const std::string& field, bool allow_zero = false) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    config_error(field, "must be a non-negative integer");
  const auto v = j.get<std::uint64_t>();
  if (!allow_zero && v == 0) config_error(field, "must be positive");
  return static_cast<std::size_t>(v);
}

inline double number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) config_error(field, "must be a number");
  return j.get<double>();
}

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? p : (base / path).string();
}

inline std::vector<std::vector<std::string>> path_table(const nlohmann::json& j,
                                                        const std::string& field,
                                                        const std::filesystem::path& base) {
  if (!j.is_array() || j.empty()) config_error(field, "must be a non-empty array of arrays of paths");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) config_error(f, "must be a non-empty array of paths");
    out.emplace_back();
    for (const auto& p : j[i]) {
      if (!p.is_string()) config_error(f, "must contain only strings");
      out.back().push_back(resolve(base, p.get<std::string>()));
    }
  }
  return out;
}

inline WorkerModel parse_worker_model(const nlohmann::json& j) {
  WorkerModel m;
  if (!j.is_object()) config_error("worker_model", "must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "latency" && key != "stragglers" && key != "seed")
      config_error("worker_model." + key, "is not a recognised field");
  if (j.contains("latency")) {
    const auto& l = j["latency"];
    if (!l.is_object() || l.size() != 1)
      config_error("worker_model.latency", "must hold exactly one of deterministic, "
                                           "shifted_exponential, table");
    if (l.contains("deterministic")) {
      m.law = LatencyLaw::deterministic(number(l["deterministic"], "worker_model.latency.deterministic"));
    } else if (l.contains("shifted_exponential")) {
      const auto& e = l["shifted_exponential"];
      if (!e.is_object() || !e.contains("shift") || !e.contains("rate"))
        config_error("worker_model.latency.shifted_exponential", "needs 'shift' and 'rate'");
      m.law = LatencyLaw::shifted_exponential(
          number(e["shift"], "worker_model.latency.shifted_exponential.shift"),
          number(e["rate"], "worker_model.latency.shifted_exponential.rate"));
    } else if (l.contains("table")) {
      if (!l["table"].is_array()) config_error("worker_model.latency.table", "must be an array");
      std::vector<double> t;
      for (const auto& v : l["table"]) t.push_back(number(v, "worker_model.latency.table"));
      m.law = LatencyLaw::per_worker(std::move(t));
    } else {
      config_error("worker_model.latency", "has an unknown law '" + l.begin().key() + "'");
    }
  }
  if (j.contains("stragglers")) {
    const auto& s = j["stragglers"];
    if (!s.is_object()) config_error("worker_model.stragglers", "must be an object");
    if (s.contains("workers")) {
      if (!s["workers"].is_array()) config_error("worker_model.stragglers.workers", "must be an array");
      for (const auto& w : s["workers"])
        m.stragglers.workers.push_back(positive(w, "worker_model.stragglers.workers", true));
    }
    if (s.contains("infinite")) {
      if (!s["infinite"].is_boolean())
        config_error("worker_model.stragglers.infinite", "must be a boolean");
      m.stragglers.infinite = s["infinite"].get<bool>();
    }
    if (s.contains("factor")) m.stragglers.factor = number(s["factor"], "worker_model.stragglers.factor");
  }
  if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
  return m;
}

}  // namespace detail

/// Resolves a construction spec over `field`.
inline BilinearConstruction build_construction(const Field& field, const nlohmann::json& spec,
                                               BlockShape shape,
                                               const std::filesystem::path& base = {}) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "naive") return naive_construction(field, shape);
    if (name == "strassen") return strassen_222(field);
    detail::config_error("construction", "has unknown name '" + name + "'");
  }
  if (!spec.is_object() || spec.size() != 1)
    detail::config_error("construction", "must be a name or a single-key object");
  const auto& [key, value] = *spec.items().begin();
  if (key == "naive") {
    if (!value.is_array() || value.size() != 3)
      detail::config_error("construction.naive", "must be [p, m, n]");
    return naive_construction(field, {detail::positive(value[0], "construction.naive[0]"),
                                      detail::positive(value[1], "construction.naive[1]"),
                                      detail::positive(value[2], "construction.naive[2]")});
  }
  if (key == "strassen_pow")
    return strassen_power(field, detail::positive(value, "construction.strassen_pow", true));
  if (key == "compose") {
    if (!value.is_array() || value.size() < 2)
      detail::config_error("construction.compose", "must list at least two constructions");
    BilinearConstruction acc = build_construction(field, value[0], shape, base);
    for (std::size_t i = 1; i < value.size(); ++i)
      acc = tensor_compose(acc, build_construction(field, value[i], shape, base));
    return acc;
  }
  if (key == "file") {
    if (!value.is_string()) detail::config_error("construction.file", "must be a path");
    return load_construction(field, detail::resolve(base, value.get<std::string>()));
  }
  detail::config_error("construction", "has unknown kind '" + key + "'");
}

/// Parses and validates a scenario. Semantic checks that need a field
/// (thresholds, point counts) happen in make_scheme.
inline ScenarioConfig parse_config(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
  using detail::config_error;
  using detail::positive;
  if (!j.is_object()) raise(ErrorCode::kInvalidConfig, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "mode", "p", "m", "n", "N", "T", "L", "M", "D", "construction", "modulus", "seed",
      "systematic", "inputs", "worker_model", "oracle_cap"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      config_error(key, "is not a recognised field");

  ScenarioConfig c;
  c.base_dir = std::move(base_dir);
  SchemeDescriptor& d = c.descriptor;
  if (!j.contains("mode") || !j["mode"].is_string()) config_error("mode", "is required (a string)");
  const auto mode = parse_descriptor_mode(j["mode"].get<std::string>());
  if (!mode) config_error("mode", "has unknown value '" + j["mode"].get<std::string>() + "'");
  d.mode = mode->first;
  d.batch = mode->second;
  for (const char* key : {"p", "m", "n", "N"})
    if (!j.contains(key)) config_error(key, "is required");
  d.shape = {positive(j["p"], "p"), positive(j["m"], "m"), positive(j["n"], "n")};
  d.workers = positive(j["N"], "N");
  if (j.contains("T")) d.colluders = positive(j["T"], "T", true);
  if (j.contains("L")) d.batch_size = positive(j["L"], "L");
  if (j.contains("M")) d.library_size = positive(j["M"], "M");
  if (d.batch_size > 1 && !d.batch) config_error("L", "is above 1 but mode is not a batch mode");
  if (j.contains("systematic")) {
    if (!j["systematic"].is_boolean()) config_error("systematic", "must be a boolean");
    d.systematic = j["systematic"].get<bool>();
  }
  if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("modulus")) c.modulus = positive(j["modulus"], "modulus");
  if (j.contains("oracle_cap")) c.oracle_cap = positive(j["oracle_cap"], "oracle_cap", true);

  if (is_private(d.mode)) {
    if (!j.contains("D")) config_error("D", "is required for " + descriptor_mode_name(d) + " mode");
    const std::size_t demand = positive(j["D"], "D");
    if (demand > d.library_size)
      config_error("D", "must lie in 1..M = " + std::to_string(d.library_size));
    c.demand = demand - 1;
  } else if (j.contains("D")) {
    config_error("D", "is only valid for private modes");
  }

  if (d.mode == Mode::kBasic) {
    if (j.contains("construction")) config_error("construction", "is not used by basic mode");
  } else {
    if (!j.contains("construction"))
      config_error("construction", "is required for " + descriptor_mode_name(d) + " mode");
    c.construction = j["construction"];
  }

  if (!j.contains("inputs")) config_error("inputs", "is required");
  const auto& in = j["inputs"];
  if (in.contains("random")) {
    const auto& r = in["random"];
    if (!r.is_object()) config_error("inputs.random", "must be an object with s, t, r");
    for (const char* k : {"s", "t", "r"})
      if (!r.contains(k)) config_error(std::string("inputs.random.") + k, "is required");
    c.random_inputs = RandomInputs{positive(r["s"], "inputs.random.s"),
                                   positive(r["t"], "inputs.random.t"),
                                   positive(r["r"], "inputs.random.r")};
  } else if (in.contains("files")) {
    const auto& f = in["files"];
    if (!f.contains("a") || !f.contains("b")) config_error("inputs.files", "needs 'a' and 'b'");
    c.a_files = detail::path_table(f["a"], "inputs.files.a", c.base_dir);
    c.b_files = detail::path_table(f["b"], "inputs.files.b", c.base_dir);
  } else {
    config_error("inputs", "must contain 'random' or 'files'");
  }
  if (j.contains("worker_model")) c.worker_model = detail::parse_worker_model(j["worker_model"]);
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
  try {
    return parse_config(j, std::filesystem::path(path).parent_path());
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

inline Scheme make_scheme(const ScenarioConfig& c) {
  const Field field(c.modulus);
  std::optional<BilinearConstruction> cons;
  if (c.construction) {
    cons = build_construction(field, *c.construction, c.descriptor.shape, c.base_dir);
    if (!(cons->shape() == c.descriptor.shape))
      raise(ErrorCode::kInvalidConfig, "'construction' has shape " + to_string(cons->shape()) +
                                           " but p, m, n give " + to_string(c.descriptor.shape));
  }
  return Scheme(field, c.descriptor, std::move(cons));
}

inline SchemeInputs make_inputs(const ScenarioConfig& c, const Scheme& scheme) {
  const std::size_t demand = c.demand.value_or(0);
  if (c.random_inputs) {
    Rng rng(detail::mix_seed(c.descriptor.seed));
    return scheme.random_inputs(c.random_inputs->s, c.random_inputs->t, c.random_inputs->r, rng,
                                demand);
  }
  SchemeInputs in;
  in.demand = demand;
  for (const auto& entry : c.a_files) {
    in.a.emplace_back();
    for (const auto& p : entry) in.a.back().push_back(load_matrix(scheme.field(), p));
  }
  for (const auto& entry : c.b_files) {
    in.b.emplace_back();
    for (const auto& p : entry) in.b.back().push_back(load_matrix(scheme.field(), p));
  }
  scheme.check_inputs(in);
  return in;
}

/// Full pipeline for one scenario.
inline RunReport run_scenario(const ScenarioConfig& c) {
  const Scheme scheme = make_scheme(c);
  const SchemeInputs in = make_inputs(c, scheme);
  SimOptions opt;
  opt.oracle_cap = c.oracle_cap;
  return simulate(scheme, in, c.worker_model, opt);
}

}  // namespace epc
