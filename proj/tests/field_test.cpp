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

#include <gtest/gtest.h>

#include <initializer_list>

#include <random>

#include "epc/field.hpp"
#include "oracles.hpp"

namespace epc {
namespace {

TEST(FieldTest, RejectsCompositeModulus) {
  for (std::uint64_t q : {0ULL, 1ULL, 4ULL, 9ULL, 15ULL, 561ULL, 1ULL << 40}) {
    try {
      Field f(q);
      FAIL() << q << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNonPrimeModulus) << q;
    }
  }
}

TEST(FieldTest, AcceptsPrimes) {
  for (std::uint64_t q : std::initializer_list<std::uint64_t>{2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 101ULL, kMersenne61,
                          (1ULL << 31) - 1, 1000000007ULL})
    EXPECT_NO_THROW(Field{q}) << q;
}

TEST(FieldTest, SmallInverses) {
  const Field f(7);
  EXPECT_EQ(f.inv(3), 5u);
  EXPECT_EQ(f.inv(1), 1u);
  EXPECT_EQ(f.mul(3, 5), 1u);
}

TEST(FieldTest, InverseOfTwoInMersenne61) {
  const Field f;
  const std::uint64_t half = (kMersenne61 + 1) / 2;
  EXPECT_EQ(f.inv(2), half);
  EXPECT_EQ(oracle::mulmod(2, half, kMersenne61), 1u);
}

TEST(FieldTest, InverseOfZeroThrows) {
  const Field f(11);
  EXPECT_THROW(f.inv(0), Error);
}

TEST(FieldTest, ArithmeticMatchesWideIntegers) {
  const Field f;
  Rng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const Element a = f.random(rng), b = f.random(rng);
    EXPECT_EQ(f.mul(a, b), oracle::mulmod(a, b, kMersenne61));
    EXPECT_EQ(f.add(a, b), oracle::addmod(a, b, kMersenne61));
    EXPECT_EQ(f.add(f.sub(a, b), b), a);
    EXPECT_EQ(f.add(a, f.neg(a)), 0u);
    if (a != 0) {
      EXPECT_EQ(f.inv(a), oracle::invmod(a, kMersenne61));
    }
  }
}

TEST(FieldTest, FromSignedReducesNegatives) {
  const Field f(7);
  EXPECT_EQ(f.from_signed(-1), 6u);
  EXPECT_EQ(f.from_signed(-7), 0u);
  EXPECT_EQ(f.from_signed(-8), 6u);
  EXPECT_EQ(f.from_signed(15), 1u);
  EXPECT_EQ(f.from_signed(INT64_MIN), f.neg(f.reduce(static_cast<std::uint64_t>(INT64_MAX) + 1)));
}

TEST(FieldTest, PowAndFermat) {
  const Field f(101);
  for (Element a = 1; a < 101; ++a) EXPECT_EQ(f.pow(a, 100), 1u);
  EXPECT_EQ(f.pow(0, 0), 1u);
}

TEST(FieldTest, RandomIsUniformOnSmallField) {
  const Field f(5);
  Rng rng(7);
  std::array<int, 5> counts{};
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) ++counts[f.random(rng)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - draws / 5.0) * (c - draws / 5.0) / (draws / 5.0);
  EXPECT_LT(chi2, 18.47);  // 0.999 quantile, 4 degrees of freedom
}

}  // namespace
}  // namespace epc
