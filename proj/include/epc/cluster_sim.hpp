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

// In-process master/worker simulation. Time is simulated: each worker gets a
// latency drawn from a seeded law, and the master decodes from the first
// threshold-many completions ordered by (latency, worker index).

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "epc/error.hpp"
#include "epc/parallel.hpp"
#include "epc/scheme.hpp"

namespace epc {

inline constexpr double kNeverReturns = std::numeric_limits<double>::infinity();

struct LatencyLaw {
  enum class Kind { kDeterministic, kShiftedExponential, kTable };

  Kind kind = Kind::kDeterministic;
  double value = 1.0;  // deterministic latency
  double shift = 1.0;  // shifted exponential: shift + Exp(rate)
  double rate = 1.0;
  std::vector<double> table;  // per-worker latencies

  static LatencyLaw deterministic(double t) { return {Kind::kDeterministic, t, 0, 0, {}}; }
  static LatencyLaw shifted_exponential(double shift, double rate) {
    return {Kind::kShiftedExponential, 0, shift, rate, {}};
  }
  static LatencyLaw per_worker(std::vector<double> t) {
    return {Kind::kTable, 0, 0, 0, std::move(t)};
  }
};

/// Forced stragglers: listed workers never return, or are slowed by `factor`.
struct StragglerSpec {
  std::vector<std::size_t> workers;
  bool infinite = true;
  double factor = 1.0;
};

struct WorkerModel {
  LatencyLaw law;
  StragglerSpec stragglers;
  std::uint64_t seed = 0;
};

inline std::vector<double> draw_latencies(const WorkerModel& model, std::size_t workers) {
  const LatencyLaw& law = model.law;
  std::vector<double> out(workers);
  Rng rng(model.seed);
  switch (law.kind) {
    case LatencyLaw::Kind::kDeterministic:
      require(law.value >= 0, ErrorCode::kInvalidArgument, "latency must be non-negative");
      std::fill(out.begin(), out.end(), law.value);
      break;
    case LatencyLaw::Kind::kShiftedExponential: {
      require(law.rate > 0 && law.shift >= 0, ErrorCode::kInvalidArgument,
              "shifted exponential needs rate > 0 and shift >= 0");
      std::exponential_distribution<double> exp(law.rate);
      for (auto& t : out) t = law.shift + exp(rng);
      break;
    }
    case LatencyLaw::Kind::kTable:
      require(law.table.size() == workers, ErrorCode::kInvalidArgument,
              "latency table has " + std::to_string(law.table.size()) + " entries for " +
                  std::to_string(workers) + " workers");
      out = law.table;
      break;
  }
  for (std::size_t w : model.stragglers.workers) {
    require(w < workers, ErrorCode::kInvalidArgument,
            "straggler " + std::to_string(w) + " is not a worker");
    out[w] = model.stragglers.infinite ? kNeverReturns : out[w] * model.stragglers.factor;
  }
  return out;
}

/// Finite completions sorted by (time, worker index).
inline std::vector<std::pair<std::size_t, double>> completion_order(
    const std::vector<double>& latencies) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t w = 0; w < latencies.size(); ++w)
    if (latencies[w] != kNeverReturns) out.emplace_back(w, latencies[w]);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second < y.second : x.first < y.first;
  });
  return out;
}

enum class Verification { kVerified, kMismatch, kUnverified };

constexpr std::string_view verification_name(Verification v) {
  switch (v) {
    case Verification::kVerified: return "verified";
    case Verification::kMismatch: return "mismatch";
    case Verification::kUnverified: return "unverified";
  }
  return "unknown";
}

struct RunReport {
  std::string mode;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::pair<std::size_t, double>> completion;
  std::optional<double> decode_time;  // empty when incomplete
  std::vector<std::size_t> used_workers;
  bool complete = false;
  bool decoded_ok = false;
  Verification verification = Verification::kUnverified;
  std::size_t threshold = 0;
  std::size_t baseline = 0;
  std::size_t results_consumed = 0;
  std::string message;

  nlohmann::json to_json() const {
    nlohmann::json order = nlohmann::json::array();
    for (const auto& [w, t] : completion) order.push_back({{"worker", w}, {"time", t}});
    nlohmann::json j = {{"mode", mode},
                        {"params", params},
                        {"status", complete ? "complete" : "incomplete"},
                        {"completion_order", order},
                        {"decode_time", nullptr},
                        {"used_workers", used_workers},
                        {"decoded_ok", decoded_ok},
                        {"verification", verification_name(verification)},
                        {"threshold", threshold},
                        {"baseline_threshold", baseline},
                        {"results_consumed", results_consumed}};
    if (decode_time) j["decode_time"] = *decode_time;
    if (!message.empty()) j["message"] = message;
    return j;
  }
};

struct SimOptions {
  /// Oracle comparison is skipped when s * t * r exceeds this.
  std::uint64_t oracle_cap = std::uint64_t{1} << 24;
  /// Draws keys and queries; defaults to the descriptor seed.
  std::optional<std::uint64_t> scheme_seed;
};

/// Encode, assign, draw latencies, collect the first threshold completions,
/// decode and compare with the oracle. Too few returning workers yields an
/// incomplete report rather than an exception.
inline RunReport simulate(const Scheme& scheme, const SchemeInputs& inputs,
                          const WorkerModel& model, const SimOptions& opt = {}) {
  const SchemeDescriptor& d = scheme.descriptor();
  RunReport report;
  report.mode = descriptor_mode_name(d);
  report.params = {{"p", d.shape.p}, {"m", d.shape.m}, {"n", d.shape.n},
                   {"R", scheme.effective_rank()}, {"T", d.colluders}, {"L", d.batch_size},
                   {"M", d.library_size}, {"N", d.workers}, {"q", scheme.field().modulus()},
                   {"systematic", d.systematic}};
  if (is_private(d.mode)) report.params["D"] = inputs.demand + 1;
  report.threshold = scheme.threshold();
  report.baseline = scheme.baseline();

  const std::vector<double> latencies = draw_latencies(model, d.workers);
  report.completion = completion_order(latencies);
  if (report.completion.size() < report.threshold) {
    report.message = "Incomplete: only " + std::to_string(report.completion.size()) +
                     " workers return, threshold is " + std::to_string(report.threshold);
    return report;
  }
  report.complete = true;
  report.decode_time = report.completion[report.threshold - 1].second;

  Rng rng(opt.scheme_seed.value_or(d.seed));
  const Deployment dep = scheme.deploy(inputs, rng);
  for (std::size_t i = 0; i < report.threshold; ++i)
    report.used_workers.push_back(report.completion[i].first);
  std::vector<WorkerResult> results(report.threshold);
  parallel_for(report.threshold, [&](std::size_t i) {
    const std::size_t w = report.used_workers[i];
    results[i] = WorkerResult{w, run_worker(scheme.field(), dep.tasks[w])};
  });
  report.results_consumed = results.size();

  std::vector<Matrix> out;
  try {
    out = scheme.decode(dep.master, results);
  } catch (const Error& e) {
    report.message = e.what();
    return report;
  }
  const Matrix& a0 = inputs.a.at(0).at(0);
  const Matrix& b0 = inputs.b.at(0).at(0);
  const unsigned __int128 work =
      static_cast<unsigned __int128>(a0.rows()) * a0.cols() * b0.cols();
  if (work <= opt.oracle_cap) {
    report.verification =
        out == scheme.expected(inputs) ? Verification::kVerified : Verification::kMismatch;
  }
  report.decoded_ok = report.verification != Verification::kMismatch;
  return report;
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepSpec {
  SchemeDescriptor base;  // workers is overridden per row
  std::optional<BilinearConstruction> construction;
  Field field;
  std::vector<std::size_t> worker_counts;
  std::vector<std::size_t> straggler_counts;
  std::size_t trials = 1;
  LatencyLaw law;
  std::size_t s = 0, t = 0, r = 0;  // input dims; 0 means one element per block
  bool decode = true;                // false skips encoding and decoding
  std::uint64_t seed = 0;
};

struct SweepRow {
  std::string mode;
  BlockShape shape;
  std::size_t rank = 0, colluders = 0, batch_size = 1, library_size = 1;
  std::size_t workers = 0, stragglers = 0;
  std::size_t threshold = 0, baseline = 0, trial = 0;
  double decode_time = kNeverReturns;
  bool ok = false;
};

struct SweepSummary {
  std::size_t workers = 0, stragglers = 0, trials = 0, successes = 0;
  double mean_decode_time = kNeverReturns;  // over successful trials
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSummary> summary;

  static constexpr const char* kCsvHeader =
      "mode,p,m,n,R,T,L,M,N,threshold,baseline,trial,decode_time,ok";

  std::string to_csv() const {
    std::string out = std::string(kCsvHeader) + "\n";
    char buf[64];
    for (const auto& row : rows) {
      if (row.decode_time == kNeverReturns)
        std::snprintf(buf, sizeof buf, "inf");
      else
        std::snprintf(buf, sizeof buf, "%.17g", row.decode_time);
      out += row.mode + "," + std::to_string(row.shape.p) + "," + std::to_string(row.shape.m) +
             "," + std::to_string(row.shape.n) + "," + std::to_string(row.rank) + "," +
             std::to_string(row.colluders) + "," + std::to_string(row.batch_size) + "," +
             std::to_string(row.library_size) + "," + std::to_string(row.workers) + "," +
             std::to_string(row.threshold) + "," + std::to_string(row.baseline) + "," +
             std::to_string(row.trial) + "," + buf + "," + (row.ok ? "true" : "false") + "\n";
    }
    return out;
  }

  nlohmann::json summary_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : summary) {
      nlohmann::json j = {{"N", s.workers},
                          {"stragglers", s.stragglers},
                          {"trials", s.trials},
                          {"success_rate", s.trials ? double(s.successes) / s.trials : 0.0},
                          {"mean_decode_time", nullptr}};
      if (s.successes) j["mean_decode_time"] = s.mean_decode_time;
      out.push_back(std::move(j));
    }
    return out;
  }
};

namespace detail {

// splitmix64, used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Runs every (N, straggler count, trial) combination. Stragglers are a
/// seeded uniformly random subset of workers that never return. Identical
/// specs give identical results.
inline SweepResult sweep(const SweepSpec& spec) {
  SweepResult result;
  for (std::size_t n : spec.worker_counts) {
    SchemeDescriptor d = spec.base;
    d.workers = n;
    const Scheme scheme(spec.field, d, spec.construction);
    const BlockShape sh = d.shape;
    const std::size_t s = spec.s ? spec.s : sh.p;
    const std::size_t t = spec.t ? spec.t : sh.m;
    const std::size_t r = spec.r ? spec.r : sh.n;
    for (std::size_t k : spec.straggler_counts) {
      require(k <= n, ErrorCode::kInvalidArgument,
              "cannot make " + std::to_string(k) + " of " + std::to_string(n) + " workers straggle");
      SweepSummary sum{n, k, spec.trials, 0, 0.0};
      double total = 0.0;
      for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t trial_seed =
            detail::mix_seed(spec.seed ^ detail::mix_seed((n << 40) ^ (k << 20) ^ trial));
        Rng rng(trial_seed);
        WorkerModel model;
        model.law = spec.law;
        model.seed = detail::mix_seed(trial_seed);
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        model.stragglers.workers.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

        SweepRow row{descriptor_mode_name(d), sh, scheme.effective_rank(), scheme.descriptor().colluders,
                     d.batch_size, d.library_size, n, k, scheme.threshold(), scheme.baseline(),
                     trial};
        if (spec.decode) {
          const std::size_t demand =
              is_private(d.mode) ? std::uniform_int_distribution<std::size_t>(
                                       0, d.library_size - 1)(rng)
                                 : 0;
          const SchemeInputs in = scheme.random_inputs(s, t, r, rng, demand);
          SimOptions opt;
          opt.scheme_seed = detail::mix_seed(trial_seed + 1);
          const RunReport rep = simulate(scheme, in, model, opt);
          row.ok = rep.complete && rep.decoded_ok;
          if (rep.decode_time) row.decode_time = *rep.decode_time;
        } else {
          const auto order = completion_order(draw_latencies(model, n));
          if (order.size() >= scheme.threshold()) {
            row.ok = true;
            row.decode_time = order[scheme.threshold() - 1].second;
          }
        }
        if (row.ok) {
          ++sum.successes;
          total += row.decode_time;
        }
        result.rows.push_back(row);
      }
      if (sum.successes) sum.mean_decode_time = total / static_cast<double>(sum.successes);
      result.summary.push_back(sum);
    }
  }
  return result;
}

}  // namespace epc
