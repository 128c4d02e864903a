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

// Built-in verification grids behind `epc verify`.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epc/bilinear.hpp"
#include "epc/scheme.hpp"
#include "epc/verifier.hpp"

namespace epc {

enum class Scale { kTiny, kStandard };

inline std::optional<Scale> parse_scale(std::string_view s) {
  if (s == "tiny") return Scale::kTiny;
  if (s == "standard") return Scale::kStandard;
  return std::nullopt;
}

inline constexpr std::string_view kSuiteNames[] = {"constructions", "thresholds", "secrecy",
                                                   "privacy"};

namespace detail {

inline AuditReport construction_report(const std::string& label, const BilinearConstruction& c,
                                       std::uint64_t seed) {
  AuditReport r;
  r.mode = label;
  r.certificate = CertificateKind::kEnumeration;
  r.seed = seed;
  const BlockShape s = c.shape();
  r.params = {{"p", s.p}, {"m", s.m}, {"n", s.n}, {"R", c.rank()}, {"q", c.field().modulus()}};
  const Validation exact = validate_exact(c);
  if (!exact) r.failures.push_back("exact Brent check: " + exact.detail);
  Rng rng(seed);
  const Validation randomized = validate(c, ValidationMode::kRandomized, rng);
  if (!randomized) r.failures.push_back("randomized check: " + randomized.detail);
  r.subsets_tested = s.volume() * s.volume();
  r.notes.push_back("all (pmn)^2 Brent equations checked");
  return r;
}

struct ThresholdCase {
  Mode mode;
  bool batch;
  std::size_t batch_size;
  std::size_t colluders;
  std::size_t library_size;
  std::size_t workers_extra;
  bool systematic = false;
};

inline AuditReport threshold_case(const Field& f, const std::optional<BilinearConstruction>& c,
                                  BlockShape shape, const ThresholdCase& tc, std::size_t dims,
                                  std::uint64_t seed, std::size_t samples) {
  SchemeDescriptor d;
  d.mode = tc.mode;
  d.shape = shape;
  d.batch = tc.batch;
  d.batch_size = tc.batch_size;
  d.colluders = tc.colluders;
  d.library_size = tc.library_size;
  d.systematic = tc.systematic;
  d.seed = seed;
  const std::size_t rank = c ? c->rank() * tc.batch_size : 0;
  d.workers = recovery_threshold(tc.mode, rank, shape,
                                 tc.mode == Mode::kPrivateSecure ? 1 : tc.colluders) +
              tc.workers_extra;
  const Scheme scheme(f, d, c);
  Rng rng(seed);
  const SchemeInputs in = scheme.random_inputs(shape.p * dims, shape.m * dims, shape.n * dims, rng,
                                               tc.library_size - 1);
  AuditOptions opt;
  opt.seed = seed;
  opt.samples = samples;
  return threshold_audit(scheme, in, opt);
}

}  // namespace detail

inline std::vector<AuditReport> constructions_suite(Scale scale, std::uint64_t seed) {
  const Field f;
  std::vector<AuditReport> out;
  const std::size_t max_dim = scale == Scale::kTiny ? 2 : 3;
  for (std::size_t p = 1; p <= max_dim; ++p)
    for (std::size_t m = 1; m <= max_dim; ++m)
      for (std::size_t n = 1; n <= max_dim; ++n)
        out.push_back(detail::construction_report("naive" + to_string(BlockShape{p, m, n}),
                                                   naive_construction(f, {p, m, n}), seed));
  out.push_back(detail::construction_report("strassen", strassen_222(f), seed));
  out.push_back(detail::construction_report("strassen@q=7", strassen_222(Field{7}), seed));
  if (scale == Scale::kStandard) {
    out.push_back(detail::construction_report("strassen^2", strassen_power(f, 2), seed));
    out.push_back(detail::construction_report(
        "strassen*naive(2,2,2)", tensor_compose(strassen_222(f), naive_construction(f, {2, 2, 2})),
        seed));
  }
  return out;
}

inline std::vector<AuditReport> thresholds_suite(Scale scale, std::uint64_t seed) {
  using detail::ThresholdCase;
  const Field f;
  const BlockShape s222{2, 2, 2};
  const auto strassen = std::make_optional(strassen_222(f));
  const std::size_t samples = scale == Scale::kTiny ? 20 : 200;
  std::vector<AuditReport> out;
  out.push_back(detail::threshold_case(f, std::nullopt, s222,
                                       {Mode::kBasic, false, 1, 0, 1, 1}, 2, seed, samples));
  out.push_back(detail::threshold_case(f, strassen, s222, {Mode::kImproved, false, 1, 0, 1, 1}, 1,
                                       seed, samples));
  out.push_back(detail::threshold_case(f, strassen, s222,
                                       {Mode::kImproved, false, 1, 0, 1, 1, true}, 1, seed, samples));
  const std::size_t t = scale == Scale::kTiny ? 1 : 2;
  out.push_back(detail::threshold_case(f, strassen, s222,
                                       {Mode::kOneSidedSecure, false, 1, t, 1, 2}, 1, seed, samples));
  out.push_back(detail::threshold_case(f, strassen, s222, {Mode::kFullySecure, false, 1, t, 1, 2},
                                       1, seed, samples));
  const std::size_t m = scale == Scale::kTiny ? 2 : 3;
  out.push_back(detail::threshold_case(f, strassen, s222, {Mode::kPrivate, false, 1, 0, m, 2}, 1,
                                       seed, samples));
  out.push_back(detail::threshold_case(f, strassen, s222,
                                       {Mode::kPrivateSecure, false, 1, 1, m, 2}, 1, seed, samples));
  out.push_back(detail::threshold_case(f, strassen, s222,
                                       {Mode::kFullyPrivate, false, 1, 0, 2, 2}, 1, seed, samples));
  // Exhaustive fully private check at q = 13 with a rank-1 construction.
  const Field f13{13};
  out.push_back(detail::threshold_case(f13, naive_construction(f13, {1, 1, 1}), {1, 1, 1},
                                       {Mode::kFullyPrivate, false, 1, 0, 2, 1}, 2, seed, samples));
  if (scale == Scale::kStandard) {
    for (const ThresholdCase& tc : {ThresholdCase{Mode::kImproved, true, 2, 0, 1, 2},
                                    ThresholdCase{Mode::kFullySecure, true, 2, 1, 1, 2},
                                    ThresholdCase{Mode::kPrivate, true, 2, 0, 2, 2},
                                    ThresholdCase{Mode::kPrivateSecure, true, 2, 1, 2, 2},
                                    ThresholdCase{Mode::kFullyPrivate, true, 2, 0, 2, 2}})
      out.push_back(detail::threshold_case(f, strassen, s222, tc, 1, seed, samples));
  }
  return out;
}

inline std::vector<AuditReport> secrecy_suite(Scale scale, std::uint64_t seed) {
  std::vector<AuditReport> out;
  // Exact mutual information on 1 x 1 blocks.
  struct MiCase {
    Mode mode;
    std::uint64_t q;
    std::size_t colluders;
    bool expect_zero;
  };
  std::vector<MiCase> cases = {{Mode::kOneSidedSecure, 5, 1, true},
                               {Mode::kFullySecure, 5, 1, true},
                               {Mode::kImproved, 5, 0, false}};
  if (scale == Scale::kStandard) {
    cases.push_back({Mode::kOneSidedSecure, 7, 2, true});
    cases.push_back({Mode::kFullySecure, 7, 2, true});
  }
  for (const MiCase& mc : cases) {
    const Field f{mc.q};
    SecrecyScenario sc;
    sc.field = f;
    sc.mode = mc.mode;
    sc.construction = naive_construction(f, {1, 1, 1});
    sc.colluders = mc.colluders;
    const std::size_t workers = std::min<std::size_t>(
        recovery_threshold(mc.mode, 1, {1, 1, 1}, mc.colluders), mc.q - 1 - mc.colluders);
    const EvaluationPoints pts = default_points(1, mc.colluders, workers);
    sc.nodes = pts.nodes;
    AuditReport r;
    r.mode = std::string(mode_name(mc.mode)) + (mc.expect_zero ? "" : " (control)");
    r.certificate = CertificateKind::kEnumeration;
    r.seed = seed;
    r.params = {{"q", mc.q}, {"R", 1}, {"T", mc.colluders}, {"N", pts.points.size()}};
    // Every collusion set of size max(T, 1).
    const std::size_t k = std::max<std::size_t>(mc.colluders, 1);
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      sc.observed_points.clear();
      for (std::size_t i : idx) sc.observed_points.push_back(pts.points[i]);
      const MutualInformation mi = exact_mutual_information(sc);
      ++r.subsets_tested;
      if (mi.exactly_zero != mc.expect_zero)
        r.failures.push_back("workers " + detail::subset_string(idx) + ": I = " +
                             std::to_string(mi.bits) + " bits, expected " +
                             (mc.expect_zero ? "exactly 0" : "> 0"));
    } while (detail::next_combination(idx, pts.points.size()));
    if (!mc.expect_zero) r.notes.push_back("control without keys must leak");
    out.push_back(std::move(r));
  }

  // Rank certificates with Strassen.
  const Field f;
  const std::size_t t = scale == Scale::kTiny ? 1 : 2;
  for (Mode mode : {Mode::kOneSidedSecure, Mode::kFullySecure}) {
    SchemeDescriptor d;
    d.mode = mode;
    d.shape = {2, 2, 2};
    d.colluders = t;
    d.workers = recovery_threshold(mode, 7, d.shape, t);
    out.push_back(secrecy_rank_certificate(Scheme(f, d, strassen_222(f))));
  }
  if (scale == Scale::kStandard) {
    SchemeDescriptor d;
    d.mode = Mode::kFullySecure;
    d.shape = {2, 2, 2};
    d.colluders = 1;
    d.batch = true;
    d.batch_size = 2;
    d.workers = recovery_threshold(d.mode, 14, d.shape, 1);
    out.push_back(secrecy_rank_certificate(Scheme(f, d, strassen_222(f))));
  }
  return out;
}

inline std::vector<AuditReport> privacy_suite(Scale scale, std::uint64_t seed) {
  struct PrivCase {
    std::size_t m, n, y;
  };
  std::vector<PrivCase> cases = {{1, 1, 3}, {2, 2, 5}, {3, 2, 4}};
  if (scale == Scale::kStandard) {
    cases.push_back({3, 3, 6});
    cases.push_back({2, 3, 8});
  }
  std::vector<AuditReport> out;
  for (const PrivCase& pc : cases) {
    // Request set avoids x_1 = 0 (R = 1), as in the q = 11 setting.
    std::vector<Element> ys;
    for (std::size_t i = 0; i < pc.y; ++i) ys.push_back(1 + i);
    AuditReport r = privacy_distribution_check(pc.m, pc.n, ys);
    r.mode = "private";
    r.seed = seed;
    out.push_back(std::move(r));
  }
  // Broken control: every decoy is the first worker's point.
  std::vector<Element> ys = {1, 2, 3, 4, 5};
  AuditReport control = privacy_distribution_check(
      2, 2, ys,
      [](std::size_t demand, std::size_t m, std::span<const Element> y, std::span<const Element> z) {
        const std::vector<Element> reused(z.size(), y[0]);
        return build_private_queries(demand, m, y, reused);
      });
  AuditReport flipped;
  flipped.mode = "private (broken control)";
  flipped.certificate = CertificateKind::kEnumeration;
  flipped.params = control.params;
  flipped.subsets_tested = control.subsets_tested;
  flipped.seed = seed;
  flipped.notes.push_back("decoys reused as z_j = y_1 must fail the check");
  if (control.passed()) flipped.failures.push_back("broken query builder passed the check");
  out.push_back(std::move(flipped));
  return out;
}

/// Runs one named suite, or all of them for "all".
inline std::vector<AuditReport> run_suite(std::string_view suite, Scale scale, std::uint64_t seed) {
  if (suite == "constructions") return constructions_suite(scale, seed);
  if (suite == "thresholds") return thresholds_suite(scale, seed);
  if (suite == "secrecy") return secrecy_suite(scale, seed);
  if (suite == "privacy") return privacy_suite(scale, seed);
  if (suite == "all") {
    std::vector<AuditReport> out;
    for (std::string_view name : kSuiteNames)
      for (auto& r : run_suite(name, scale, seed)) out.push_back(std::move(r));
    return out;
  }
  raise(ErrorCode::kInvalidArgument, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace epc
