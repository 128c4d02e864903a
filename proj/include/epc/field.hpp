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

#include <cstdint>
#include <random>
#include <string>

#include "epc/error.hpp"

namespace epc {

/// Field elements are canonical residues in [0, q). The modulus lives in the
/// Field context, not in each element.
using Element = std::uint64_t;

/// Seeded generator used for keys, queries, latencies and test inputs.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
  std::uint64_t result = 1 % q;
  base %= q;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, q);
    base = mulmod(base, base, q);
    exp >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                              23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// Arithmetic context for GF(q), q prime and below 2^63 so that a sum of two
/// residues never overflows.
class Field {
 public:
  explicit Field(std::uint64_t modulus = kMersenne61) : q_(modulus) {
    require(modulus < (std::uint64_t{1} << 63), ErrorCode::kInvalidArgument,
            "modulus must be below 2^63");
    require(detail::is_prime(modulus), ErrorCode::kNonPrimeModulus,
            std::to_string(modulus) + " is not prime");
  }

  std::uint64_t modulus() const noexcept { return q_; }

  Element reduce(std::uint64_t v) const noexcept { return v % q_; }
  Element from_signed(std::int64_t v) const noexcept {
    if (v >= 0) return static_cast<std::uint64_t>(v) % q_;
    const std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
    const std::uint64_t r = mag % q_;
    return r == 0 ? 0 : q_ - r;
  }
  bool contains(std::uint64_t v) const noexcept { return v < q_; }

  Element add(Element a, Element b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Element mul(Element a, Element b) const noexcept { return detail::mulmod(a, b, q_); }
  Element pow(Element a, std::uint64_t exp) const noexcept { return detail::powmod(a, exp, q_); }

  Element inv(Element a) const {
    require(a % q_ != 0, ErrorCode::kInvalidArgument, "inverse of zero");
    return detail::powmod(a, q_ - 2, q_);
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  Element random(Rng& rng) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, q_ - 1);
    return dist(rng);
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint64_t q_;
};

}  // namespace epc
