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

#include <algorithm>
#include <ostream>
#include <string>
#include <tuple>

#include "epc/scheme.hpp"
#include "oracles.hpp"

namespace epc {
namespace {

template <class Fn>
Error error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no exception";
  return Error(ErrorCode::kIoError, "none");
}

SchemeDescriptor make(Mode mode, std::size_t n, std::size_t t = 0, std::size_t m_lib = 1,
                      std::size_t l = 1) {
  SchemeDescriptor d;
  d.mode = mode;
  d.shape = {2, 2, 2};
  d.workers = n;
  d.colluders = t;
  d.library_size = m_lib;
  d.batch_size = l;
  d.batch = l > 1;
  return d;
}

std::vector<Matrix> oracle_products(const Scheme& s, const SchemeInputs& in) {
  const Mode mode = s.descriptor().mode;
  const std::size_t ja = mode == Mode::kFullyPrivate ? in.demand : 0;
  const std::size_t jb = is_private(mode) ? in.demand : 0;
  std::vector<Matrix> out;
  for (std::size_t l = 0; l < in.a[ja].size(); ++l)
    out.push_back(oracle::transpose_product(in.a[ja][l], in.b[jb][l], s.field().modulus()));
  return out;
}

// ---------------------------------------------------------------------------
// Thresholds against the closed forms.

TEST(ThresholdTest, StrassenRankSeven) {
  const BlockShape s{2, 2, 2};
  EXPECT_EQ(recovery_threshold(Mode::kBasic, 0, s, 0), 9u);
  EXPECT_EQ(recovery_threshold(Mode::kImproved, 7, s, 0), 13u);
  EXPECT_EQ(recovery_threshold(Mode::kOneSidedSecure, 7, s, 2), 15u);
  EXPECT_EQ(recovery_threshold(Mode::kFullySecure, 7, s, 2), 17u);
  EXPECT_EQ(recovery_threshold(Mode::kPrivate, 7, s, 0), 14u);
  EXPECT_EQ(recovery_threshold(Mode::kPrivateSecure, 7, s, 1), 15u);
  EXPECT_EQ(recovery_threshold(Mode::kFullyPrivate, 7, s, 0), 15u);
}

TEST(ThresholdTest, BatchOfTwo) {
  const BlockShape s{2, 2, 2};
  EXPECT_EQ(recovery_threshold(Mode::kImproved, 14, s, 0), 27u);
  EXPECT_EQ(recovery_threshold(Mode::kFullySecure, 14, s, 1), 29u);
  EXPECT_EQ(recovery_threshold(Mode::kPrivate, 14, s, 0), 28u);
  EXPECT_EQ(recovery_threshold(Mode::kPrivateSecure, 14, s, 1), 29u);
  EXPECT_EQ(recovery_threshold(Mode::kFullyPrivate, 14, s, 0), 29u);
}

TEST(ThresholdTest, Baselines) {
  const BlockShape s{2, 2, 2};
  EXPECT_EQ(cubic_baseline(Mode::kImproved, s, 0, 1, false), 9u);
  EXPECT_EQ(cubic_baseline(Mode::kOneSidedSecure, s, 2, 1, false), 10u);
  EXPECT_EQ(cubic_baseline(Mode::kFullySecure, s, 2, 1, false), 12u);
  EXPECT_EQ(cubic_baseline(Mode::kPrivate, s, 0, 1, false), 8u);
  EXPECT_EQ(cubic_baseline(Mode::kPrivateSecure, s, 1, 1, false), 9u);
  EXPECT_EQ(cubic_baseline(Mode::kFullyPrivate, s, 0, 1, false), 9u);
}

TEST(ThresholdTest, SchemeReportsThreshold) {
  const Field f;
  const auto st = strassen_222(f);
  EXPECT_EQ(Scheme(f, make(Mode::kOneSidedSecure, 15, 2), st).threshold(), 15u);
  EXPECT_EQ(Scheme(f, make(Mode::kPrivateSecure, 15, 0, 2), st).threshold(), 15u);
  EXPECT_EQ(Scheme(f, make(Mode::kPrivateSecure, 15, 0, 2), st).descriptor().colluders, 1u);
  EXPECT_EQ(Scheme(f, make(Mode::kFullySecure, 29, 1, 1, 2), st).effective_rank(), 14u);
}

// ---------------------------------------------------------------------------
// End-to-end decoding for every mode.

struct ModeCase {
  Mode mode;
  std::size_t t;
  std::size_t m_lib;
  std::size_t l;
};

void PrintTo(const ModeCase& c, std::ostream* os) {
  *os << mode_name(c.mode) << " T=" << c.t << " M=" << c.m_lib << " L=" << c.l;
}

class SchemeModeTest : public ::testing::TestWithParam<ModeCase> {};

TEST_P(SchemeModeTest, DecodesShuffledSubsetsExactly) {
  const ModeCase mc = GetParam();
  const Field f;
  const auto st = strassen_222(f);
  std::optional<BilinearConstruction> cons;
  if (mc.mode != Mode::kBasic) cons = st;
  SchemeDescriptor d = make(mc.mode, 1, mc.t, mc.m_lib, mc.l);
  const std::size_t rank = cons ? 7 * mc.l : 0;
  const std::size_t thr = recovery_threshold(mc.mode, rank, d.shape,
                                             mc.mode == Mode::kPrivateSecure ? 1 : mc.t);
  d.workers = thr + 3;
  const Scheme scheme(f, d, cons);
  ASSERT_EQ(scheme.threshold(), thr);

  Rng rng(100 + static_cast<int>(mc.mode));
  for (std::size_t demand = 0; demand < mc.m_lib; ++demand) {
    const SchemeInputs in = scheme.random_inputs(4, 6, 2, rng, demand);
    const Deployment dep = scheme.deploy(in, rng);
    ASSERT_EQ(dep.tasks.size(), d.workers);
    std::vector<WorkerResult> results = scheme.compute(dep);
    const auto want = oracle_products(scheme, in);
    for (int trial = 0; trial < 4; ++trial) {
      std::shuffle(results.begin(), results.end(), rng);
      const std::vector<WorkerResult> used(results.begin(), results.begin() + thr);
      EXPECT_EQ(scheme.decode(dep.master, used), want) << "demand " << demand;
    }
    const std::vector<WorkerResult> few(results.begin(), results.begin() + thr - 1);
    EXPECT_EQ(error_of([&] { scheme.decode(dep.master, few); }).code(),
              ErrorCode::kNotEnoughResults);
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllModes, SchemeModeTest,
    ::testing::Values(ModeCase{Mode::kBasic, 0, 1, 1}, ModeCase{Mode::kImproved, 0, 1, 1},
                      ModeCase{Mode::kOneSidedSecure, 1, 1, 1},
                      ModeCase{Mode::kOneSidedSecure, 2, 1, 1},
                      ModeCase{Mode::kFullySecure, 2, 1, 1}, ModeCase{Mode::kPrivate, 0, 3, 1},
                      ModeCase{Mode::kPrivateSecure, 1, 3, 1},
                      ModeCase{Mode::kFullyPrivate, 0, 2, 1}, ModeCase{Mode::kImproved, 0, 1, 2},
                      ModeCase{Mode::kFullySecure, 1, 1, 2}, ModeCase{Mode::kPrivate, 0, 2, 2},
                      ModeCase{Mode::kPrivateSecure, 1, 2, 2},
                      ModeCase{Mode::kFullyPrivate, 0, 2, 2}),
    [](const auto& info) {
      const ModeCase& c = info.param;
      return std::string(mode_name(c.mode)) + "_T" + std::to_string(c.t) + "_M" +
             std::to_string(c.m_lib) + "_L" + std::to_string(c.l);
    });

TEST(SchemeTest, NaiveConstructionInLagrangeMode) {
  const Field f;
  SchemeDescriptor d = make(Mode::kFullySecure, 20, 1);
  d.shape = {1, 2, 3};
  const Scheme scheme(f, d, naive_construction(f, d.shape));
  EXPECT_EQ(scheme.threshold(), 13u);
  Rng rng(3);
  const SchemeInputs in = scheme.random_inputs(3, 4, 6, rng);
  const Deployment dep = scheme.deploy(in, rng);
  auto results = scheme.compute(dep);
  std::reverse(results.begin(), results.end());
  results.resize(13);
  EXPECT_EQ(scheme.decode(dep.master, results), oracle_products(scheme, in));
}

TEST(SchemeTest, SmallFieldFullyPrivateEveryTriple) {
  const Field f(13);
  const auto cons = naive_construction(f, {1, 1, 1});
  SchemeInputs in;
  Rng rng(4);
  for (int j = 0; j < 2; ++j) {
    in.a.push_back({Matrix::random(f, 2, 2, rng)});
    in.b.push_back({Matrix::random(f, 2, 3, rng)});
  }
  SchemeDescriptor d = make(Mode::kFullyPrivate, 5, 0, 2);
  d.shape = {1, 1, 1};
  const Scheme scheme(f, d, cons);
  ASSERT_EQ(scheme.threshold(), 3u);
  for (std::size_t demand = 0; demand < 2; ++demand) {
    in.demand = demand;
    const Deployment dep = scheme.deploy(in, rng);
    const auto results = scheme.compute(dep);
    const Matrix want = oracle::transpose_product(in.a[demand][0], in.b[demand][0], 13);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j)
        for (std::size_t k = j + 1; k < 5; ++k) {
          const std::vector<WorkerResult> sub = {results[i], results[j], results[k]};
          EXPECT_EQ(scheme.decode(dep.master, sub)[0], want);
        }
  }
}

// ---------------------------------------------------------------------------
// Structural properties.

TEST(SchemeTest, BasicAndImprovedAgree) {
  const Field f;
  Rng rng(5);
  const Scheme basic(f, make(Mode::kBasic, 12));
  const Scheme improved(f, make(Mode::kImproved, 14), strassen_222(f));
  const SchemeInputs in = basic.random_inputs(6, 4, 4, rng);
  const auto b_dep = basic.deploy(in, rng);
  const auto i_dep = improved.deploy(in, rng);
  EXPECT_EQ(basic.decode(b_dep.master, basic.compute(b_dep)),
            improved.decode(i_dep.master, improved.compute(i_dep)));
}

TEST(SchemeTest, SecureWithoutColludersMatchesImproved) {
  const Field f;
  Rng rng(6);
  const auto st = strassen_222(f);
  const Scheme improved(f, make(Mode::kImproved, 14), st);
  const SchemeInputs in = improved.random_inputs(4, 4, 4, rng);
  const auto base = improved.deploy(in, rng);
  for (Mode m : {Mode::kOneSidedSecure, Mode::kFullySecure}) {
    const Scheme secure(f, make(m, 14, 0), st);
    EXPECT_EQ(secure.threshold(), 13u);
    const auto dep = secure.deploy(in, rng);
    for (std::size_t w = 0; w < 14; ++w) {
      const auto& x = std::get<CodedShare>(base.tasks[w]);
      const auto& y = std::get<CodedShare>(dep.tasks[w]);
      EXPECT_EQ(x.a, y.a);
      EXPECT_EQ(x.b, y.b);
    }
  }
}

TEST(SchemeTest, DecodeIsLinearInA) {
  const Field f;
  Rng rng(7);
  const Scheme scheme(f, make(Mode::kImproved, 13), strassen_222(f));
  SchemeInputs x = scheme.random_inputs(4, 4, 4, rng);
  SchemeInputs y = x;
  y.a[0][0] = Matrix::random(f, 4, 4, rng);
  SchemeInputs sum = x;
  sum.a[0][0] = add(f, x.a[0][0], y.a[0][0]);
  const auto run = [&](const SchemeInputs& in) {
    const auto dep = scheme.deploy(in, rng);
    return scheme.decode(dep.master, scheme.compute(dep))[0];
  };
  EXPECT_EQ(run(sum), add(f, run(x), run(y)));
}

TEST(SchemeTest, SharesKeepBlockSize) {
  const Field f;
  Rng rng(8);
  const auto st = strassen_222(f);
  for (const auto& [mode, t, m_lib] : {std::tuple{Mode::kBasic, 0, 1}, std::tuple{Mode::kImproved, 0, 1},
                                       std::tuple{Mode::kFullySecure, 2, 1}}) {
    const std::optional<BilinearConstruction> cons =
        mode == Mode::kBasic ? std::nullopt : std::make_optional(st);
    const Scheme scheme(f, make(mode, 20, t, m_lib), cons);
    const auto dep = scheme.deploy(scheme.random_inputs(6, 4, 8, rng), rng);
    for (const auto& task : dep.tasks) {
      const auto& share = std::get<CodedShare>(task);
      EXPECT_EQ(share.a.rows(), 3u);
      EXPECT_EQ(share.a.cols(), 2u);
      EXPECT_EQ(share.b.rows(), 3u);
      EXPECT_EQ(share.b.cols(), 4u);
    }
  }
}

TEST(SchemeTest, PrivateWorkersSeeOnlyQueriesAndTheirShare) {
  const Field f;
  Rng rng(9);
  const Scheme scheme(f, make(Mode::kPrivateSecure, 16, 1, 3), strassen_222(f));
  const auto dep = scheme.deploy(scheme.random_inputs(6, 4, 8, rng, 2), rng);
  for (const auto& task : dep.tasks) {
    const auto& ctx = std::get<PrivateWorkerContext>(task);
    EXPECT_EQ(ctx.query.entries.size(), 3u);
    ASSERT_TRUE(ctx.a_share.has_value());
    EXPECT_EQ(ctx.a_share->rows(), 3u);
    EXPECT_EQ(ctx.a_share->cols(), 2u);
    EXPECT_EQ(run_worker(f, task).rows(), 2u);
    EXPECT_EQ(run_worker(f, task).cols(), 4u);
  }
}

TEST(SchemeTest, SystematicWorkersReturnPreEncodedProducts) {
  const Field f;
  Rng rng(10);
  const auto st = strassen_222(f);
  SchemeDescriptor d = make(Mode::kImproved, 14);
  d.systematic = true;
  const Scheme scheme(f, d, st);
  const SchemeInputs in = scheme.random_inputs(4, 4, 4, rng);
  const auto dep = scheme.deploy(in, rng);
  const auto results = scheme.compute(dep);
  const auto av = pre_encode(st, partition(in.a[0][0], 2, 2), Side::kA);
  const auto bv = pre_encode(st, partition(in.b[0][0], 2, 2), Side::kB);
  for (std::size_t i = 0; i < 7; ++i)
    EXPECT_EQ(results[i].value, oracle::transpose_product(av[i], bv[i], kMersenne61));

  const std::vector<WorkerResult> fast(results.begin(), results.begin() + 7);
  const std::vector<WorkerResult> slow(results.begin() + 1, results.end());
  const auto want = oracle_products(scheme, in);
  EXPECT_EQ(scheme.decode(dep.master, fast), want);
  EXPECT_EQ(scheme.decode(dep.master, slow), want);
}

// ---------------------------------------------------------------------------
// Validation.

TEST(SchemeValidationTest, WorkersBelowThresholdNamesIt) {
  const Field f;
  const Error e = error_of([&] { Scheme(f, make(Mode::kImproved, 12), strassen_222(f)); });
  EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  EXPECT_NE(std::string(e.what()).find("13"), std::string::npos) << e.what();
}

TEST(SchemeValidationTest, Rejections) {
  const Field f;
  const auto st = strassen_222(f);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kImproved, 14, 1), st); }).code(),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kFullyPrivate, 16, 0, 1), st); }).code(),
            ErrorCode::kMTooSmall);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kPrivateSecure, 16, 2, 2), st); }).code(),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kImproved, 14, 0, 2), st); }).code(),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kImproved, 14)); }).code(),
            ErrorCode::kInvalidConstruction);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kBasic, 14), st); }).code(),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { Scheme(Field(7), make(Mode::kImproved, 14), st); }).code(),
            ErrorCode::kInvalidConstruction);
  EXPECT_EQ(error_of([&] { Scheme(f, make(Mode::kImproved, 14), naive_construction(f, {2, 2, 2})); })
                .code(),
            ErrorCode::kInvalidArgument);  // R = 8 needs 15 workers
  SchemeDescriptor sys = make(Mode::kFullySecure, 20, 1);
  sys.systematic = true;
  EXPECT_EQ(error_of([&] { Scheme(f, sys, st); }).code(), ErrorCode::kModeForbidsSystematic);
  auto shape = make(Mode::kImproved, 30);
  shape.shape = {2, 2, 3};
  EXPECT_EQ(error_of([&] { Scheme(f, shape, st); }).code(), ErrorCode::kInvalidConstruction);
}

TEST(SchemeValidationTest, FieldMustExceedNPlusRPlusTPlusOne) {
  const Field f17(17), f19(19);
  SchemeDescriptor d = make(Mode::kOneSidedSecure, 9, 1);
  d.shape = {1, 1, 1};
  // N + R + T + 1 = 12 < 17, fine; with N = 16 it reaches 19.
  EXPECT_NO_THROW(Scheme(f17, d, naive_construction(f17, d.shape)));
  d.workers = 16;
  EXPECT_EQ(error_of([&] { Scheme(f17, d, naive_construction(f17, d.shape)); }).code(),
            ErrorCode::kInsufficientFieldSize);
  EXPECT_EQ(error_of([&] { Scheme(f19, d, naive_construction(f19, d.shape)); }).code(),
            ErrorCode::kInsufficientFieldSize);
}

TEST(SchemeValidationTest, InputShapes) {
  const Field f;
  Rng rng(11);
  const Scheme scheme(f, make(Mode::kPrivate, 14, 0, 2), strassen_222(f));
  SchemeInputs in = scheme.random_inputs(4, 4, 4, rng);
  in.demand = 2;
  EXPECT_EQ(error_of([&] { scheme.check_inputs(in); }).code(), ErrorCode::kInvalidArgument);
  in.demand = 0;
  in.b.pop_back();
  EXPECT_EQ(error_of([&] { scheme.check_inputs(in); }).code(), ErrorCode::kShapeMismatch);
  SchemeInputs odd = scheme.random_inputs(4, 4, 4, rng);
  odd.b[1][0] = Matrix(4, 6);
  EXPECT_EQ(error_of([&] { scheme.check_inputs(odd); }).code(), ErrorCode::kShapeMismatch);
  SchemeInputs rows = scheme.random_inputs(4, 4, 4, rng);
  rows.a[0][0] = Matrix(6, 4);
  EXPECT_EQ(error_of([&] { scheme.check_inputs(rows); }).code(), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace epc
