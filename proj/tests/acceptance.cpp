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

// Acceptance gate: one PASS/FAIL line per criterion, each with its time
// budget. Exit status is nonzero if any criterion fails or runs over.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "epc/epc.hpp"
#include "oracles.hpp"

namespace {

using namespace epc;

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void absorb(const AuditReport& r, const std::string& what) {
    check(r.passed(), what + ": " + (r.failures.empty() ? "" : r.failures.front()));
  }
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

SchemeDescriptor desc(Mode mode, std::size_t n, std::size_t t = 0, std::size_t m_lib = 1,
                      std::size_t l = 1, BlockShape shape = {2, 2, 2}) {
  SchemeDescriptor d;
  d.mode = mode;
  d.shape = shape;
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

// Decodes every `k`-subset of `results` and compares with the oracle.
void all_subsets(Outcome& o, const Scheme& s, const MasterRecord& master,
                 const std::vector<WorkerResult>& results, std::size_t k,
                 const std::vector<Matrix>& want) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::size_t count = 0;
  do {
    std::vector<WorkerResult> sub;
    for (std::size_t i : idx) sub.push_back(results[i]);
    o.check(s.decode(master, sub) == want, "subset " + detail::subset_string(idx) + " mismatch");
    ++count;
  } while (detail::next_combination(idx, results.size()));
  o.check(count == detail::binomial(results.size(), k), "subset enumeration incomplete");
}

AuditOptions sampled(std::uint64_t seed, std::size_t samples) {
  AuditOptions opt;
  opt.exhaustive_cap = 0;
  opt.samples = samples;
  opt.seed = seed;
  return opt;
}

// 1. Construction validity.
Outcome constructions() {
  Outcome o;
  const Field f;
  for (std::size_t p = 1; p <= 3; ++p)
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; n <= 3; ++n) {
        const auto c = naive_construction(f, {p, m, n});
        o.check(validate_exact(c).ok, "naive " + to_string(c.shape()));
        o.check(c.rank() == p * m * n, "naive rank");
      }
  const auto st = strassen_222(f);
  o.check(st.rank() == 7 && validate_exact(st).ok, "strassen_222");
  const auto ss = tensor_compose(st, st);
  o.check(ss.shape() == BlockShape{4, 4, 4} && ss.rank() == 49 && validate_exact(ss).ok,
          "strassen x strassen");
  const auto sn = tensor_compose(st, naive_construction(f, {2, 2, 2}));
  o.check(sn.rank() == 56 && validate_exact(sn).ok, "strassen x naive(2,2,2)");
  return o;
}

// 2. Basic threshold pmn + p - 1 = 9 of N = 10.
Outcome basic_threshold() {
  Outcome o;
  const Field f;
  const Scheme s(f, desc(Mode::kBasic, 10));
  o.check(s.threshold() == 9, "threshold is not 9");
  Rng rng(2);
  const SchemeInputs in = s.random_inputs(4, 4, 4, rng);
  const Deployment dep = s.deploy(in, rng);
  all_subsets(o, s, dep.master, s.compute(dep), 9, oracle_products(s, in));
  return o;
}

// 3. Improved threshold 2R - 1 = 13 of N = 14.
Outcome improved_threshold() {
  Outcome o;
  const Field f;
  const Scheme s(f, desc(Mode::kImproved, 14), strassen_222(f));
  o.check(s.threshold() == 13, "threshold is not 13");
  Rng rng(3);
  const SchemeInputs in = s.random_inputs(4, 4, 4, rng);
  const Deployment dep = s.deploy(in, rng);
  const auto results = s.compute(dep);
  all_subsets(o, s, dep.master, results, 13, oracle_products(s, in));
  const std::vector<WorkerResult> twelve(results.begin(), results.begin() + 12);
  bool raised = false;
  try {
    (void)s.decode(dep.master, twelve);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::kNotEnoughResults;
  }
  o.check(raised, "12 results did not raise NotEnoughResults");
  return o;
}

// 4. Secure thresholds with T = 2.
Outcome secure_thresholds() {
  Outcome o;
  const Field f;
  const auto st = strassen_222(f);
  const std::pair<Mode, std::size_t> cases[] = {{Mode::kOneSidedSecure, 15}, {Mode::kFullySecure, 17}};
  for (const auto& [mode, want] : cases) {
    const Scheme s(f, desc(mode, 22, 2), st);
    o.check(s.threshold() == want, std::string(mode_name(mode)) + " threshold");
    Rng rng(4);
    const AuditReport audit = threshold_audit(s, s.random_inputs(4, 4, 4, rng), sampled(40, 200));
    o.absorb(audit, std::string(mode_name(mode)));
    o.check(audit.subsets_tested >= 200, "fewer than 200 subsets");
    const AuditReport cert = secrecy_rank_certificate(s);
    o.absorb(cert, std::string(mode_name(mode)) + " rank certificate");
    const std::size_t pairs = detail::binomial(22, 2) * (mode == Mode::kFullySecure ? 2 : 1);
    o.check(cert.subsets_tested == pairs, "not every collusion pair certified");
  }
  return o;
}

// 5. Exact secrecy by enumeration.
Outcome exact_secrecy() {
  Outcome o;
  for (Mode mode : {Mode::kOneSidedSecure, Mode::kFullySecure}) {
    for (Element y = 1; y < 5; ++y) {  // every point off the data node x_1 = 0
      SecrecyScenario sc;
      sc.field = Field(5);
      sc.mode = mode;
      sc.construction = naive_construction(sc.field, {1, 1, 1});
      sc.colluders = 1;
      sc.nodes = {0, 1};
      sc.observed_points = {y};
      const MutualInformation mi = exact_mutual_information(sc);
      o.check(mi.exactly_zero && mi.bits == 0.0,
              std::string(mode_name(mode)) + " leaks at y=" + std::to_string(y));
    }
  }
  SecrecyScenario control;
  control.field = Field(5);
  control.mode = Mode::kImproved;
  control.construction = naive_construction(control.field, {1, 1, 1});
  control.colluders = 0;
  control.nodes = {0};
  control.observed_points = {3};
  const MutualInformation mi = exact_mutual_information(control);
  o.check(!mi.exactly_zero && mi.bits > 0, "T=0 control shows no leakage");
  return o;
}

// 6. Private thresholds and query privacy.
Outcome private_thresholds() {
  Outcome o;
  const Field f;
  const auto st = strassen_222(f);
  const std::pair<Mode, std::size_t> cases[] = {{Mode::kPrivate, 14}, {Mode::kPrivateSecure, 15}};
  for (const auto& [mode, want] : cases) {
    const Scheme s(f, desc(mode, want + 3, 0, 3), st);
    o.check(s.threshold() == want, std::string(mode_name(mode)) + " threshold");
    for (std::size_t d = 0; d < 3; ++d) {
      Rng rng(60 + d);
      o.absorb(threshold_audit(s, s.random_inputs(4, 4, 4, rng, d), sampled(61 + d, 100)),
               std::string(mode_name(mode)) + " D=" + std::to_string(d + 1));
    }
  }
  // R = 1, q = 11, M = 2, N = 2, |Y| = 5.
  const Field f11(11);
  const std::vector<Element> y_set = {1, 2, 3, 4, 5};
  const Scheme tiny(f11, desc(Mode::kPrivate, 2, 0, 2, 1, {1, 1, 1}),
                    naive_construction(f11, {1, 1, 1}), std::nullopt, y_set);
  o.check(tiny.request_set().size() == 5, "request set size");
  const AuditReport priv = privacy_distribution_check(2, 2, tiny.request_set());
  o.absorb(priv, "query distributions");
  for (std::size_t d = 0; d < 2; ++d) {
    Rng rng(66 + d);
    o.absorb(threshold_audit(tiny, tiny.random_inputs(2, 2, 2, rng, d)), "tiny private decode");
  }
  return o;
}

// 7. Fully private, exhaustive over all triples.
Outcome fully_private_small() {
  Outcome o;
  const Field f(13);
  const auto cons = naive_construction(f, {1, 1, 1});
  const Scheme s(f, desc(Mode::kFullyPrivate, 5, 0, 2, 1, {1, 1, 1}), cons);
  o.check(s.threshold() == 3, "threshold is not 3");
  Rng rng(7);
  bool c_squared_needed = false;
  for (std::size_t d = 0; d < 2; ++d) {
    const SchemeInputs in = s.random_inputs(3, 2, 3, rng, d);
    const Deployment dep = s.deploy(in, rng);
    const auto results = s.compute(dep);
    const auto want = oracle_products(s, in);
    all_subsets(o, s, dep.master, results, 3, want);
    // Rescaling by c(y) alone must not reproduce the product.
    std::vector<PointResult> tagged;
    for (const auto& r : results) tagged.push_back({dep.master.worker_points[r.worker], r.value});
    const auto single = private_decode(f, cons, tagged, s.points().nodes, s.a_length(), 1);
    c_squared_needed |= assemble(single[0]) != want[0];
  }
  o.check(c_squared_needed, "c(y) rescaling path indistinguishable from c^2(y)");
  return o;
}

// 8. Batch thresholds with L = 2.
Outcome batch_thresholds() {
  Outcome o;
  const Field f;
  const auto st = strassen_222(f);
  struct Case {
    Mode mode;
    std::size_t t, m_lib, want;
  };
  const Case cases[] = {{Mode::kImproved, 0, 1, 27},      {Mode::kFullySecure, 1, 1, 29},
                        {Mode::kPrivate, 0, 2, 28},       {Mode::kPrivateSecure, 1, 2, 29},
                        {Mode::kFullyPrivate, 0, 2, 29}};
  for (const Case& c : cases) {
    const Scheme s(f, desc(c.mode, c.want + 3, c.t, c.m_lib, 2), st);
    const std::string name = descriptor_mode_name(s.descriptor());
    o.check(s.threshold() == c.want, name + " threshold " + std::to_string(s.threshold()));
    Rng rng(80 + c.want);
    o.absorb(threshold_audit(s, s.random_inputs(4, 4, 4, rng, c.m_lib - 1), sampled(81, 100)), name);
  }
  return o;
}

// 9. Subcubic crossover.
Outcome crossover() {
  Outcome o;
  const Crossover x = find_crossover();
  o.check(x.k == 6 && x.coded == 235297 && x.basic == 262207, "crossover is not k=6");
  ThresholdTableSpec spec;
  spec.max_k = 6;
  bool seen = false;
  for (const ThresholdRow& row : threshold_table(spec)) {
    if (row.shape.p != 64) continue;
    if (row.mode == "basic") o.check(row.threshold == 262207, "basic row");
    if (row.mode == "improved" && row.construction == "strassen_pow 6") {
      o.check(row.threshold == 235297 && row.rank == 117649, "strassen_pow 6 row");
      seen = true;
    }
  }
  o.check(seen, "table lacks strassen_pow 6");
  return o;
}

// 10. Systematic variant.
Outcome systematic() {
  Outcome o;
  const Field f;
  const auto st = strassen_222(f);
  SchemeDescriptor d = desc(Mode::kImproved, 14);
  d.systematic = true;
  const Scheme s(f, d, st);
  Rng rng(10);
  const SchemeInputs in = s.random_inputs(4, 6, 8, rng);
  const Deployment dep = s.deploy(in, rng);
  const auto results = s.compute(dep);
  const auto av = pre_encode(st, partition(in.a[0][0], 2, 2), Side::kA);
  const auto bv = pre_encode(st, partition(in.b[0][0], 2, 2), Side::kB);
  for (std::size_t i = 0; i < 7; ++i)
    o.check(results[i].value == oracle::transpose_product(av[i], bv[i], f.modulus()),
            "worker " + std::to_string(i + 1) + " is not uncoded");
  const std::vector<WorkerResult> fast(results.begin(), results.begin() + 7);
  const std::vector<WorkerResult> slow(results.begin() + 1, results.end());
  const auto want = oracle_products(s, in);
  const auto via_fast = s.decode(dep.master, fast);
  o.check(via_fast == want, "fast path mismatch");
  o.check(via_fast == s.decode(dep.master, slow), "fast path differs from interpolation");
  return o;
}

// 11. Stragglers and sweep reproducibility.
Outcome stragglers() {
  Outcome o;
  const Field f;
  SchemeDescriptor d = desc(Mode::kImproved, 14);
  d.seed = 11;
  const Scheme s(f, d, strassen_222(f));
  Rng rng(11);
  const SchemeInputs in = s.random_inputs(8, 8, 8, rng);
  for (std::size_t w = 0; w < 14; ++w) {
    WorkerModel m;
    m.law = LatencyLaw::shifted_exponential(1.0, 1.0);
    m.seed = w;
    m.stragglers.workers = {w};
    const RunReport r = simulate(s, in, m);
    o.check(r.complete && r.decoded_ok && r.verification == Verification::kVerified,
            "straggler " + std::to_string(w) + " broke decoding");
  }
  for (std::size_t a = 0; a < 14; ++a)
    for (std::size_t b = a + 1; b < 14; ++b) {
      WorkerModel m;
      m.stragglers.workers = {a, b};
      const RunReport r = simulate(s, in, m);
      o.check(!r.complete && r.to_json().at("status") == "incomplete", "two stragglers decoded");
    }
  SweepSpec spec;
  spec.base = d;
  spec.construction = strassen_222(f);
  spec.field = f;
  spec.worker_counts = {14, 16};
  spec.straggler_counts = {0, 1, 2};
  spec.trials = 5;
  spec.law = LatencyLaw::shifted_exponential(1.0, 2.0);
  spec.seed = 2026;
  const SweepResult x = sweep(spec), y = sweep(spec);
  o.check(x.to_csv() == y.to_csv() && x.summary_json() == y.summary_json(),
          "sweep not reproducible");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "construction validity", 10, constructions},
      {2, "basic threshold pmn+p-1", 5, basic_threshold},
      {3, "improved threshold 2R-1", 5, improved_threshold},
      {4, "secure thresholds T=2", 30, secure_thresholds},
      {5, "exact secrecy", 60, exact_secrecy},
      {6, "private thresholds and query privacy", 60, private_thresholds},
      {7, "fully private, q=13", 10, fully_private_small},
      {8, "batch thresholds L=2", 60, batch_thresholds},
      {9, "subcubic crossover", 1, crossover},
      {10, "systematic variant", 5, systematic},
      {11, "straggler runs", 10, stragglers},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_s) {
      o.ok = false;
      o.detail = "over time budget";
    }
    failed += o.ok ? 0 : 1;
    std::printf("%s %2d %-40s %8.3f s (limit %g s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name,
                secs, c.limit_s, o.ok ? "" : "  ", o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
