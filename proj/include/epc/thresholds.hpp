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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "epc/descriptor.hpp"
#include "epc/error.hpp"

namespace epc {

/// Threshold of one (shape, construction, mode) against its cubic baseline.
/// Thresholds are always relative to the named construction's rank.
struct ThresholdRow {
  BlockShape shape;
  std::string construction;
  std::size_t rank = 0;
  std::string mode;
  std::size_t threshold = 0;
  std::size_t baseline = 0;

  double ratio() const { return static_cast<double>(threshold) / static_cast<double>(baseline); }

  nlohmann::json to_json() const {
    return {{"p", shape.p},         {"m", shape.m},
            {"n", shape.n},         {"construction", construction},
            {"R", rank},            {"mode", mode},
            {"threshold", threshold}, {"baseline", baseline},
            {"ratio", ratio()}};
  }
};

struct ThresholdTableSpec {
  std::size_t max_k = 7;  // shapes (2^k, 2^k, 2^k) for k = 1..max_k
  std::size_t colluders = 1;
  std::size_t batch_size = 1;
};

inline std::vector<ThresholdRow> threshold_table(const ThresholdTableSpec& spec) {
  require(spec.max_k >= 1 && spec.max_k <= 10, ErrorCode::kInvalidArgument,
          "k must lie in 1..10");
  require(spec.batch_size >= 1, ErrorCode::kInvalidArgument, "L must be at least 1");
  std::vector<ThresholdRow> rows;
  for (std::size_t k = 1; k <= spec.max_k; ++k) {
    const std::size_t side = std::size_t{1} << k;
    const BlockShape shape{side, side, side};
    std::size_t pow7 = 1;
    for (std::size_t i = 0; i < k; ++i) pow7 *= 7;
    rows.push_back({shape, "-", 0, "basic", recovery_threshold(Mode::kBasic, 0, shape, 0),
                    cubic_baseline(Mode::kBasic, shape, 0, 1, false)});
    const std::pair<std::string, std::size_t> constructions[] = {
        {"strassen_pow " + std::to_string(k), pow7}, {"naive", shape.volume()}};
    for (const auto& [name, rank] : constructions) {
      for (Mode mode : kAllModes) {
        if (mode == Mode::kBasic) continue;
        const bool batch = spec.batch_size > 1;
        const std::size_t t = is_secure(mode) ? spec.colluders : 0;
        SchemeDescriptor d;
        d.mode = mode;
        d.batch = batch;
        rows.push_back({shape, name, rank, descriptor_mode_name(d),
                        recovery_threshold(mode, rank * spec.batch_size, shape, t),
                        cubic_baseline(mode, shape, t, spec.batch_size, batch)});
      }
    }
  }
  return rows;
}

/// Smallest k with 2 * 7^k - 1 < 8^k + 2^k - 1: the first cube (2^k, 2^k, 2^k)
/// where Strassen-based coding beats the basic code.
struct Crossover {
  std::size_t k = 0;
  std::uint64_t coded = 0;  // 2 * 7^k - 1
  std::uint64_t basic = 0;  // 8^k + 2^k - 1
};

inline Crossover find_crossover(std::size_t max_k = 20) {
  unsigned __int128 p7 = 1, p8 = 1, p2 = 1;
  for (std::size_t k = 0; k <= max_k; ++k) {
    const unsigned __int128 coded = 2 * p7 - 1, basic = p8 + p2 - 1;
    if (coded < basic)
      return {k, static_cast<std::uint64_t>(coded), static_cast<std::uint64_t>(basic)};
    p7 *= 7;
    p8 *= 8;
    p2 *= 2;
  }
  raise(ErrorCode::kInvalidArgument, "no crossover up to k = " + std::to_string(max_k));
}

}  // namespace epc
