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

// epc: thresholds, scenario runs, verification suites, sweeps and matrix
// files. Exit status is 0 on success, 1 when a run or check fails and 2 on
// usage or input errors.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "epc/epc.hpp"

namespace {

constexpr int kFailed = 1;
constexpr int kBadInput = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  epc::require(static_cast<bool>(out), epc::ErrorCode::kIoError, "cannot write " + out_path);
  out << text;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

struct ThresholdsArgs {
  std::size_t max_k = 7;
  std::size_t colluders = 1;
  std::size_t batch_size = 1;
  std::string format = "table";
  std::string out;
};

int cmd_thresholds(const ThresholdsArgs& a) {
  const auto rows = epc::threshold_table({a.max_k, a.colluders, a.batch_size});
  const epc::Crossover x = epc::find_crossover();
  std::ostringstream s;
  if (a.format == "json") {
    nlohmann::json j = {{"rows", nlohmann::json::array()},
                        {"crossover", {{"k", x.k}, {"coded", x.coded}, {"basic", x.basic}}}};
    for (const auto& r : rows) j["rows"].push_back(r.to_json());
    s << j.dump(2) << "\n";
  } else if (a.format == "csv") {
    s << "p,m,n,construction,R,mode,threshold,baseline,ratio\n";
    for (const auto& r : rows)
      s << r.shape.p << "," << r.shape.m << "," << r.shape.n << "," << r.construction << ","
        << r.rank << "," << r.mode << "," << r.threshold << "," << r.baseline << ","
        << fixed(r.ratio(), 4) << "\n";
  } else {
    s << pad("shape", 16) << pad("construction", 16) << pad("R", 10) << pad("mode", 24)
      << pad("threshold", 12) << pad("baseline", 12) << "ratio\n";
    for (const auto& r : rows)
      s << pad(epc::to_string(r.shape), 16) << pad(r.construction, 16)
        << pad(r.rank ? std::to_string(r.rank) : "-", 10) << pad(r.mode, 24)
        << pad(std::to_string(r.threshold), 12) << pad(std::to_string(r.baseline), 12)
        << fixed(r.ratio(), 4) << "\n";
    s << "\nsecure baselines use pmn + T per padded side; coded gains are asymptotic in (p,m,n)\n";
  }
  if (a.format != "json")
    s << "crossover: k=" << x.k << " (2*7^" << x.k << "-1 = " << x.coded << " < 8^" << x.k
      << "+2^" << x.k << "-1 = " << x.basic << ")\n";
  emit(s.str(), a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  epc::ScenarioConfig c = epc::load_config(a.config);
  if (a.seed) c.descriptor.seed = *a.seed;
  const epc::RunReport r = epc::run_scenario(c);
  emit(r.to_json().dump(2) + "\n", a.out);
  if (!r.complete) std::cerr << r.message << "\n";
  return r.decoded_ok ? 0 : kFailed;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::string scale = "tiny";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "table";
};

int cmd_verify(const VerifyArgs& a) {
  const auto scale = epc::parse_scale(a.scale);
  epc::require(scale.has_value(), epc::ErrorCode::kInvalidArgument,
               "scale must be tiny or standard");
  std::vector<std::string> suites;
  if (a.suite == "all")
    for (auto s : epc::kSuiteNames) suites.emplace_back(s);
  else
    suites.push_back(a.suite);

  nlohmann::json all = nlohmann::json::array();
  std::size_t failures = 0;
  std::ostringstream table;
  for (const auto& suite : suites) {
    for (const auto& r : epc::run_suite(suite, *scale, a.seed)) {
      failures += r.failures.size();
      nlohmann::json j = r.to_json();
      j["suite"] = suite;
      all.push_back(j);
      table << (r.passed() ? "PASS  " : "FAIL  ") << pad(suite, 15) << pad(r.mode, 34)
            << pad(std::string(epc::certificate_name(r.certificate)), 13)
            << "checked=" << r.subsets_tested << "  " << r.params.dump() << "\n";
      for (const auto& f : r.failures) table << "      " << f << "\n";
    }
  }
  table << (failures ? "FAILED" : "ALL PASSED") << " (" << all.size() << " reports, " << failures
        << " failures)\n";
  const nlohmann::json summary = {{"reports", all}, {"failures", failures}, {"seed", a.seed}};
  if (a.format == "json") {
    emit(summary.dump(2) + "\n", a.out);
  } else {
    std::cout << table.str();
    if (!a.out.empty()) emit(summary.dump(2) + "\n", a.out);
  }
  return failures ? kFailed : 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::vector<std::size_t> workers;
  std::vector<std::size_t> stragglers = {0};
  std::size_t trials = 10;
  bool latency_only = false;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

int cmd_sweep(const SweepArgs& a) {
  const epc::ScenarioConfig c = epc::load_config(a.config);
  epc::SweepSpec spec;
  spec.base = c.descriptor;
  spec.field = epc::Field(c.modulus);
  if (c.construction)
    spec.construction =
        epc::build_construction(spec.field, *c.construction, c.descriptor.shape, c.base_dir);
  spec.worker_counts = a.workers.empty() ? std::vector<std::size_t>{c.descriptor.workers} : a.workers;
  spec.straggler_counts = a.stragglers;
  spec.trials = a.trials;
  spec.law = c.worker_model.law;
  if (c.random_inputs) {
    spec.s = c.random_inputs->s;
    spec.t = c.random_inputs->t;
    spec.r = c.random_inputs->r;
  }
  spec.decode = !a.latency_only;
  spec.seed = a.seed.value_or(c.descriptor.seed);
  const epc::SweepResult res = epc::sweep(spec);
  if (a.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : res.summary_json()) rows.push_back(s);
    emit(nlohmann::json{{"summary", rows}}.dump(2) + "\n", a.out);
  } else {
    emit(res.to_csv(), a.out);
    for (const auto& s : res.summary_json()) std::cerr << s.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_matrix_random(std::uint64_t modulus, std::size_t rows, std::size_t cols,
                      std::uint64_t seed, const std::string& out, bool binary) {
  const epc::Field f(modulus);
  epc::Rng rng(seed);
  const epc::Matrix m = epc::Matrix::random(f, rows, cols, rng);
  epc::write_matrix(out, modulus, m, binary ? epc::MatrixFormat::kBinary : epc::MatrixFormat::kText);
  return 0;
}

int cmd_matrix_convert(const std::string& in, const std::string& out, const std::string& to) {
  const epc::StoredMatrix m = epc::read_matrix(in);
  epc::write_matrix(out, m.modulus, m.matrix,
                    to == "binary" ? epc::MatrixFormat::kBinary : epc::MatrixFormat::kText);
  return 0;
}

int cmd_matrix_show(const std::string& in) {
  const epc::StoredMatrix m = epc::read_matrix(in);
  epc::write_matrix_text(std::cout, m.modulus, m.matrix);
  return 0;
}

int cmd_construction_export(const std::string& spec, std::uint64_t modulus,
                            const std::string& out) {
  const epc::Field f(modulus);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(spec);
  } catch (const nlohmann::json::parse_error&) {
    j = spec;  // bare names such as strassen
  }
  const epc::BilinearConstruction c = epc::build_construction(f, j, {1, 1, 1});
  emit(epc::construction_to_json(c).dump() + "\n", out);
  return 0;
}

int cmd_construction_validate(const std::string& path, std::uint64_t modulus) {
  const epc::Field f(modulus);
  const epc::BilinearConstruction c = epc::load_construction(f, path);
  std::cout << "valid: shape " << epc::to_string(c.shape()) << ", rank " << c.rank() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled polynomial codes toolkit"};
  app.require_subcommand(1);
  int status = 0;

  ThresholdsArgs th;
  auto* thresholds = app.add_subcommand("thresholds", "Recovery thresholds vs cubic baselines");
  thresholds->add_option("--max-k", th.max_k, "Largest k for shapes (2^k,2^k,2^k)")
      ->check(CLI::Range(1, 10));
  thresholds->add_option("--T", th.colluders, "Colluders for secure modes");
  thresholds->add_option("--L", th.batch_size, "Batch size (L > 1 lists batch variants)")
      ->check(CLI::PositiveNumber);
  thresholds->add_option("--format", th.format)->check(CLI::IsMember({"table", "json", "csv"}));
  thresholds->add_option("--out", th.out, "Write to this file instead of stdout");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario through the cluster simulator");
  run_cmd->add_option("--config", run.config, "Scenario JSON")->required();
  run_cmd->add_option("--seed", run.seed, "Overrides the scenario seed");
  run_cmd->add_option("--out", run.out, "Write the report here");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run built-in verification suites");
  verify->add_option("--suite", ver.suite)
      ->check(CLI::IsMember({"thresholds", "secrecy", "privacy", "constructions", "all"}));
  verify->add_option("--scale", ver.scale)->check(CLI::IsMember({"tiny", "standard"}));
  verify->add_option("--seed", ver.seed);
  verify->add_option("--out", ver.out, "Write the JSON report here");
  verify->add_option("--format", ver.format)->check(CLI::IsMember({"table", "json"}));

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Decode time and success rate over N and stragglers");
  sweep->add_option("--config", sw.config, "Scenario JSON giving the scheme family")->required();
  sweep->add_option("--workers", sw.workers, "Worker counts")->delimiter(',');
  sweep->add_option("--stragglers", sw.stragglers, "Straggler counts")->delimiter(',');
  sweep->add_option("--trials", sw.trials)->check(CLI::PositiveNumber);
  sweep->add_flag("--latency-only", sw.latency_only, "Skip encoding and decoding");
  sweep->add_option("--seed", sw.seed);
  sweep->add_option("--out", sw.out);
  sweep->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}));

  auto* matrix = app.add_subcommand("matrix", "Matrix files");
  matrix->require_subcommand(1);
  std::uint64_t m_modulus = epc::kMersenne61, m_seed = 0;
  std::size_t m_rows = 0, m_cols = 0;
  std::string m_out, m_in, m_to = "text";
  bool m_binary = false;
  auto* m_random = matrix->add_subcommand("random", "Write a uniformly random matrix");
  m_random->add_option("--modulus", m_modulus);
  m_random->add_option("--rows", m_rows)->required()->check(CLI::PositiveNumber);
  m_random->add_option("--cols", m_cols)->required()->check(CLI::PositiveNumber);
  m_random->add_option("--seed", m_seed);
  m_random->add_option("--out", m_out)->required();
  m_random->add_flag("--binary", m_binary);
  auto* m_convert = matrix->add_subcommand("convert", "Convert between text and binary");
  m_convert->add_option("input", m_in)->required();
  m_convert->add_option("output", m_out)->required();
  m_convert->add_option("--to", m_to)->check(CLI::IsMember({"text", "binary"}));
  auto* m_show = matrix->add_subcommand("show", "Print a matrix file as text");
  m_show->add_option("input", m_in)->required();

  auto* construction = app.add_subcommand("construction", "Bilinear construction files");
  construction->require_subcommand(1);
  std::string c_spec = "strassen", c_path, c_out;
  std::uint64_t c_modulus = epc::kMersenne61;
  auto* c_export = construction->add_subcommand("export", "Write a built-in construction");
  c_export->add_option("--spec", c_spec, "e.g. strassen, '{\"strassen_pow\":2}', '{\"naive\":[2,3,2]}'");
  c_export->add_option("--modulus", c_modulus);
  c_export->add_option("--out", c_out);
  auto* c_validate = construction->add_subcommand("validate", "Load and validate a file");
  c_validate->add_option("file", c_path)->required();
  c_validate->add_option("--modulus", c_modulus);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*thresholds) status = cmd_thresholds(th);
    if (*run_cmd) status = cmd_run(run);
    if (*verify) status = cmd_verify(ver);
    if (*sweep) status = cmd_sweep(sw);
    if (*m_random) status = cmd_matrix_random(m_modulus, m_rows, m_cols, m_seed, m_out, m_binary);
    if (*m_convert) status = cmd_matrix_convert(m_in, m_out, m_to);
    if (*m_show) status = cmd_matrix_show(m_in);
    if (*c_export) status = cmd_construction_export(c_spec, c_modulus, c_out);
    if (*c_validate) status = cmd_construction_validate(c_path, c_modulus);
  } catch (const epc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return status;
}
