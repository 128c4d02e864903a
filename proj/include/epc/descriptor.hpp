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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "epc/bilinear.hpp"
#include "epc/error.hpp"

namespace epc {

enum class Mode {
  kBasic,
  kImproved,
  kOneSidedSecure,
  kFullySecure,
  kPrivate,
  kPrivateSecure,
  kFullyPrivate,
};

inline constexpr std::array<Mode, 7> kAllModes = {
    Mode::kBasic,   Mode::kImproved,      Mode::kOneSidedSecure, Mode::kFullySecure,
    Mode::kPrivate, Mode::kPrivateSecure, Mode::kFullyPrivate};

constexpr std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kBasic: return "basic";
    case Mode::kImproved: return "improved";
    case Mode::kOneSidedSecure: return "one_sided_secure";
    case Mode::kFullySecure: return "fully_secure";
    case Mode::kPrivate: return "private";
    case Mode::kPrivateSecure: return "private_secure";
    case Mode::kFullyPrivate: return "fully_private";
  }
  return "unknown";
}

inline std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : kAllModes)
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

constexpr bool is_secure(Mode mode) {
  return mode == Mode::kOneSidedSecure || mode == Mode::kFullySecure;
}

constexpr bool is_private(Mode mode) {
  return mode == Mode::kPrivate || mode == Mode::kPrivateSecure || mode == Mode::kFullyPrivate;
}

/// Parameters of one coded multiplication job. `workers`, `colluders`,
/// `batch_size` and `library_size` are N, T, L and M in the usual notation.
struct SchemeDescriptor {
  Mode mode = Mode::kImproved;
  BlockShape shape;
  std::size_t workers = 1;
  std::size_t colluders = 0;
  std::size_t batch_size = 1;
  std::size_t library_size = 1;
  bool batch = false;
  bool systematic = false;
  std::uint64_t seed = 0;
};

/// Display name; batch variants are prefixed ("batch", "batch_fully_secure").
inline std::string descriptor_mode_name(const SchemeDescriptor& d) {
  if (!d.batch) return std::string(mode_name(d.mode));
  if (d.mode == Mode::kImproved) return "batch";
  return "batch_" + std::string(mode_name(d.mode));
}

/// Inverse of descriptor_mode_name: returns (mode, batch).
inline std::optional<std::pair<Mode, bool>> parse_descriptor_mode(std::string_view name) {
  if (name == "batch") return std::make_pair(Mode::kImproved, true);
  constexpr std::string_view prefix = "batch_";
  if (name.substr(0, prefix.size()) == prefix) {
    auto m = parse_mode(name.substr(prefix.size()));
    if (!m || *m == Mode::kBasic) return std::nullopt;
    return std::make_pair(*m, true);
  }
  auto m = parse_mode(name);
  if (!m) return std::nullopt;
  return std::make_pair(*m, false);
}

/// Recovery threshold. `rank` is the rank of the construction in use, already
/// multiplied by L for batch variants; it is ignored by the basic mode.
///
///   basic             pmn + p - 1
///   improved          2R - 1
///   one_sided_secure  2R + T - 1
///   fully_secure      2R + 2T - 1
///   private           2R
///   private_secure    2R + 1
///   fully_private     2R + 1
constexpr std::size_t recovery_threshold(Mode mode, std::size_t rank, BlockShape shape,
                                         std::size_t colluders) {
  switch (mode) {
    case Mode::kBasic: return shape.volume() + shape.p - 1;
    case Mode::kImproved: return 2 * rank - 1;
    case Mode::kOneSidedSecure: return 2 * rank + colluders - 1;
    case Mode::kFullySecure: return 2 * rank + 2 * colluders - 1;
    case Mode::kPrivate: return 2 * rank;
    case Mode::kPrivateSecure: return 2 * rank + 1;
    case Mode::kFullyPrivate: return 2 * rank + 1;
  }
  return 0;
}

/// Worker count of the cubic (block-product-per-worker) designs the coded
/// schemes are compared against: pmn + p - 1 for plain multiplication,
/// pmn plus T per secured input for the secure modes, pmn (+1 with
/// security) for private modes, and L * pmn (plus the same security terms)
/// for batches.
constexpr std::size_t cubic_baseline(Mode mode, BlockShape shape, std::size_t colluders,
                                     std::size_t batch_size, bool batch) {
  const std::size_t cubic = shape.volume();
  std::size_t extra = 0;
  switch (mode) {
    case Mode::kBasic:
    case Mode::kImproved: extra = batch ? 0 : shape.p - 1; break;
    case Mode::kOneSidedSecure: extra = colluders; break;
    case Mode::kFullySecure: extra = 2 * colluders; break;
    case Mode::kPrivate: extra = 0; break;
    case Mode::kPrivateSecure:
    case Mode::kFullyPrivate: extra = 1; break;
  }
  return (batch ? batch_size : 1) * cubic + extra;
}

/// Number of keys padded on each side.
struct KeyCounts {
  std::size_t a = 0;
  std::size_t b = 0;
};

constexpr KeyCounts key_counts(Mode mode, std::size_t colluders) {
  switch (mode) {
    case Mode::kOneSidedSecure: return {colluders, 0};
    case Mode::kFullySecure: return {colluders, colluders};
    case Mode::kPrivateSecure: return {1, 0};
    default: return {0, 0};
  }
}

}  // namespace epc
