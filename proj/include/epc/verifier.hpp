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

// Checks that certify threshold, secrecy and privacy behaviour of a scheme
// by decoding, by rank, or by exhaustive enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epc/codes.hpp"
#include "epc/error.hpp"
#include "epc/parallel.hpp"
#include "epc/polynomial.hpp"
#include "epc/scheme.hpp"

namespace epc {

enum class CertificateKind { kRank, kEnumeration, kDecode };

constexpr std::string_view certificate_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::kRank: return "rank";
    case CertificateKind::kEnumeration: return "enumeration";
    case CertificateKind::kDecode: return "decode";
  }
  return "unknown";
}

struct AuditReport {
  std::string mode;
  nlohmann::json params = nlohmann::json::object();
  CertificateKind certificate = CertificateKind::kDecode;
  std::uint64_t subsets_tested = 0;
  std::vector<std::string> failures;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;

  bool passed() const noexcept { return failures.empty(); }

  nlohmann::json to_json() const {
    return {{"mode", mode},
            {"params", params},
            {"certificate", certificate_name(certificate)},
            {"subsets_tested", subsets_tested},
            {"failures", failures},
            {"seed", seed},
            {"notes", notes},
            {"passed", passed()}};
  }
};

namespace detail {

// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

// Advances a sorted k-subset of [0, n) to its lexicographic successor.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Either every k-subset of [0, n) (when there are at most `cap`) or
// `samples` seeded random ones, each in random arrival order.
inline std::vector<std::vector<std::size_t>> choose_subsets(std::size_t n, std::size_t k,
                                                            std::uint64_t cap,
                                                            std::size_t samples, Rng& rng,
                                                            bool& exhaustive) {
  std::vector<std::vector<std::size_t>> out;
  exhaustive = binomial(n, k) <= cap;
  if (exhaustive) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    do out.push_back(idx);
    while (k > 0 && next_combination(idx, n));
    return out;
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    std::shuffle(pool.begin(), pool.end(), rng);
    out.emplace_back(pool.begin(), pool.begin() + k);
  }
  return out;
}

inline std::string subset_string(std::span<const std::size_t> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Rank of a square matrix over GF(q) by Gaussian elimination.
inline std::size_t rank_of(const Field& f, std::vector<std::vector<Element>> g) {
  const std::size_t rows = g.size();
  const std::size_t cols = rows ? g[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && g[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(g[pivot], g[rank]);
    const Element inv = f.inv(g[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || g[r][c] == 0) continue;
      const Element factor = f.mul(g[r][c], inv);
      for (std::size_t cc = c; cc < cols; ++cc)
        g[r][cc] = f.sub(g[r][cc], f.mul(factor, g[rank][cc]));
    }
    ++rank;
  }
  return rank;
}

inline nlohmann::json scheme_params(const Scheme& s) {
  const SchemeDescriptor& d = s.descriptor();
  return {{"p", d.shape.p},          {"m", d.shape.m},        {"n", d.shape.n},
          {"R", s.effective_rank()}, {"N", d.workers},        {"T", d.colluders},
          {"L", d.batch_size},       {"M", d.library_size},   {"q", s.field().modulus()},
          {"threshold", s.threshold()}, {"systematic", d.systematic}};
}

}  // namespace detail

struct AuditOptions {
  std::uint64_t exhaustive_cap = 10'000;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

/// Decodes from every threshold-sized subset of worker results (or a seeded
/// sample when there are more than the cap) and compares with A^T B. Also
/// checks that threshold-1 results are rejected with kNotEnoughResults.
inline AuditReport threshold_audit(const Scheme& scheme, const SchemeInputs& inputs,
                                   const AuditOptions& opt = {}) {
  AuditReport report;
  report.mode = descriptor_mode_name(scheme.descriptor());
  report.params = detail::scheme_params(scheme);
  report.certificate = CertificateKind::kDecode;
  report.seed = opt.seed;

  Rng rng(opt.seed);
  const Deployment dep = scheme.deploy(inputs, rng);
  const std::vector<WorkerResult> results = scheme.compute(dep);
  const std::vector<Matrix> want = scheme.expected(inputs);
  const std::size_t n = results.size();
  const std::size_t thr = scheme.threshold();

  bool exhaustive = false;
  const auto subsets = detail::choose_subsets(n, thr, opt.exhaustive_cap, opt.samples, rng, exhaustive);
  report.notes.push_back(exhaustive ? "exhaustive over all threshold-sized subsets"
                                    : "seeded sample of threshold-sized subsets");
  std::vector<std::optional<std::string>> failure(subsets.size());
  parallel_for(subsets.size(), [&](std::size_t s) {
    std::vector<WorkerResult> picked;
    picked.reserve(thr);
    for (std::size_t w : subsets[s]) picked.push_back(results[w]);
    try {
      if (scheme.decode(dep.master, picked) != want)
        failure[s] = "subset " + detail::subset_string(subsets[s]) + " decodes to a wrong product";
    } catch (const Error& e) {
      failure[s] = "subset " + detail::subset_string(subsets[s]) + " raised " + e.what();
    }
  });
  for (auto& f : failure)
    if (f) report.failures.push_back(std::move(*f));
  report.subsets_tested = subsets.size();

  // The trailing workers never include every systematic worker, so this
  // exercises the interpolation path.
  if (thr >= 1) {
    std::vector<WorkerResult> short_set(results.end() - static_cast<std::ptrdiff_t>(thr - 1),
                                        results.end());
    try {
      (void)scheme.decode(dep.master, short_set);
      report.failures.push_back("threshold-1 results decoded without error");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotEnoughResults)
        report.failures.push_back(std::string("threshold-1 results raised ") + e.what());
    }
  }
  return report;
}

enum class KeySide { kA, kB, kBoth };

/// For each T-subset of worker points, G[w][t] = l_{R+t}(y_w) over nodes
/// x_1..x_{R+T}. The certificate passes iff every such G is invertible:
/// uniform keys then make the colluders' view uniform and independent of
/// the input.
inline AuditReport secrecy_rank_certificate(const Field& f, std::size_t rank,
                                            std::size_t colluders,
                                            std::span<const Element> nodes,
                                            std::span<const Element> points,
                                            std::uint64_t cap = 10'000'000) {
  require(colluders >= 1, ErrorCode::kNotSecureMode, "secrecy needs T >= 1");
  require(nodes.size() >= rank + colluders, ErrorCode::kInvalidArgument,
          "need R+T interpolation nodes");
  require(detail::binomial(points.size(), colluders) <= cap, ErrorCode::kStateSpaceTooLarge,
          "too many collusion sets to certify");
  AuditReport report;
  report.certificate = CertificateKind::kRank;
  report.params = {{"R", rank}, {"T", colluders}, {"N", points.size()}, {"q", f.modulus()}};
  report.notes.push_back(
      "invertible key-coefficient matrices make every T-collusion view uniform and "
      "independent of the inputs; smaller sets follow by data processing");
  const std::vector<Element> used(nodes.begin(), nodes.begin() + rank + colluders);
  std::vector<std::vector<Element>> coeff(points.size(), std::vector<Element>(colluders));
  for (std::size_t w = 0; w < points.size(); ++w)
    for (std::size_t t = 0; t < colluders; ++t)
      coeff[w][t] = lagrange_coefficient(f, used, rank + t, points[w]);

  std::vector<std::size_t> idx(colluders);
  std::iota(idx.begin(), idx.end(), 0);
  if (colluders > points.size()) return report;
  do {
    std::vector<std::vector<Element>> g;
    g.reserve(colluders);
    for (std::size_t w : idx) g.push_back(coeff[w]);
    if (detail::rank_of(f, std::move(g)) != colluders)
      report.failures.push_back("collusion set " + detail::subset_string(idx) +
                                " has a singular key matrix");
    ++report.subsets_tested;
  } while (detail::next_combination(idx, points.size()));
  return report;
}

/// Scheme-level certificate. Side B is only meaningful for fully secure modes.
inline AuditReport secrecy_rank_certificate(const Scheme& scheme, KeySide side = KeySide::kBoth) {
  const SchemeDescriptor& d = scheme.descriptor();
  require(is_secure(d.mode) && d.colluders >= 1, ErrorCode::kNotSecureMode,
          descriptor_mode_name(d) + " mode carries no secrecy claim");
  const bool want_b = side != KeySide::kA;
  const bool want_a = side != KeySide::kB;
  require(!want_b || d.mode == Mode::kFullySecure || side == KeySide::kBoth,
          ErrorCode::kNotSecureMode, "one-sided secure mode leaves B unpadded");
  AuditReport report;
  report.mode = descriptor_mode_name(d);
  report.params = detail::scheme_params(scheme);
  report.certificate = CertificateKind::kRank;
  const auto run = [&](const char* label) {
    AuditReport part = secrecy_rank_certificate(scheme.field(), scheme.effective_rank(),
                                                d.colluders, scheme.points().nodes,
                                                scheme.points().points);
    report.subsets_tested += part.subsets_tested;
    for (auto& msg : part.failures) report.failures.push_back(std::string(label) + ": " + msg);
    if (report.notes.empty()) report.notes = part.notes;
  };
  if (want_a) run("A");
  if (want_b && d.mode == Mode::kFullySecure) run("B");
  return report;
}

/// Tiny secrecy scenario: 1 x 1 blocks, inputs and keys enumerated over GF(q).
/// The secret is A for improved and one-sided modes, (A, B) for fully secure;
/// the view is the shares of the observed workers on the same sides.
struct SecrecyScenario {
  Field field{5};
  Mode mode = Mode::kOneSidedSecure;
  BilinearConstruction construction = naive_construction(Field{5}, BlockShape{1, 1, 1});
  std::size_t colluders = 1;
  std::vector<Element> nodes;            // x_1 .. x_{R+T}
  std::vector<Element> observed_points;  // y_w of the colluding workers
};

struct MutualInformation {
  bool exactly_zero = false;
  double bits = 0.0;
  std::uint64_t states = 0;
};

/// Exact I(view; secret) by enumerating every (input, key) assignment.
/// Independence is decided with integer counts, so exactly_zero carries no
/// rounding; `bits` is informational.
inline MutualInformation exact_mutual_information(const SecrecyScenario& sc,
                                                  std::uint64_t cap = 10'000'000) {
  const Field& f = sc.field;
  const BilinearConstruction& cons = sc.construction;
  require(cons.field() == f, ErrorCode::kInvalidConstruction,
          "construction was built over a different field");
  const BlockShape s = cons.shape();
  const std::size_t rank = cons.rank();
  const KeyCounts keys = key_counts(sc.mode, sc.colluders);
  const bool secret_b = sc.mode == Mode::kFullySecure;
  require(sc.mode == Mode::kImproved || is_secure(sc.mode), ErrorCode::kInvalidArgument,
          "secrecy scenarios cover improved and secure modes");
  require(sc.nodes.size() >= rank + std::max(keys.a, keys.b), ErrorCode::kInvalidArgument,
          "need R+T nodes");
  const std::size_t a_vars = s.p * s.m, b_vars = secret_b ? s.p * s.n : 0;
  const std::size_t vars = a_vars + b_vars + keys.a + (secret_b ? keys.b : 0);
  long double space = std::pow(static_cast<long double>(f.modulus()), vars);
  require(space <= static_cast<long double>(cap), ErrorCode::kStateSpaceTooLarge,
          "q^" + std::to_string(vars) + " states exceed the cap of " + std::to_string(cap));
  const std::uint64_t states = static_cast<std::uint64_t>(space);

  const std::vector<Element> a_nodes(sc.nodes.begin(), sc.nodes.begin() + rank + keys.a);
  const std::vector<Element> b_nodes(sc.nodes.begin(), sc.nodes.begin() + rank + keys.b);
  const std::size_t secret_vars = a_vars + b_vars;

  const LagrangeBasis la(f, a_nodes), lb(f, b_nodes);
  std::map<std::vector<Element>, std::uint64_t> joint, view_count, secret_count;
  std::vector<Element> digits(vars, 0);
  for (std::uint64_t st = 0; st < states; ++st) {
    std::uint64_t rest = st;
    for (auto& d : digits) {
      d = rest % f.modulus();
      rest /= f.modulus();
    }
    std::size_t pos = 0;
    BlockMatrix a{s.p, s.m, 1, 1, {}};
    for (std::size_t i = 0; i < a_vars; ++i) a.blocks.emplace_back(1, 1, std::vector{digits[pos++]});
    BlockMatrix b{s.p, s.n, 1, 1, {}};
    for (std::size_t i = 0; i < s.p * s.n; ++i)
      b.blocks.emplace_back(1, 1, std::vector<Element>{secret_b ? digits[pos++] : 0});
    std::vector<Matrix> a_vec = pre_encode(cons, a, Side::kA);
    std::vector<Matrix> b_vec = pre_encode(cons, b, Side::kB);
    for (std::size_t t = 0; t < keys.a; ++t) a_vec.emplace_back(1, 1, std::vector{digits[pos++]});
    if (secret_b)
      for (std::size_t t = 0; t < keys.b; ++t) b_vec.emplace_back(1, 1, std::vector{digits[pos++]});
    else
      for (std::size_t t = 0; t < keys.b; ++t) b_vec.emplace_back(1, 1);

    std::vector<Element> view;
    for (Element y : sc.observed_points) {
      view.push_back(lagrange_combine(f, la, a_vec, y)(0, 0));
      if (secret_b) view.push_back(lagrange_combine(f, lb, b_vec, y)(0, 0));
    }
    std::vector<Element> secret(digits.begin(), digits.begin() + secret_vars);
    std::vector<Element> both = view;
    both.insert(both.end(), secret.begin(), secret.end());
    ++joint[both];
    ++view_count[view];
    ++secret_count[secret];
  }

  MutualInformation out;
  out.states = states;
  out.exactly_zero = true;
  const long double total = static_cast<long double>(states);
  for (const auto& [view, nv] : view_count) {
    for (const auto& [secret, ns] : secret_count) {
      std::vector<Element> key = view;
      key.insert(key.end(), secret.begin(), secret.end());
      const auto it = joint.find(key);
      const std::uint64_t nj = it == joint.end() ? 0 : it->second;
      if (static_cast<unsigned __int128>(nj) * states !=
          static_cast<unsigned __int128>(nv) * ns)
        out.exactly_zero = false;
      if (nj > 0)
        out.bits += static_cast<double>(nj / total *
                                        std::log2(static_cast<long double>(nj) * total /
                                                  (static_cast<long double>(nv) * ns)));
    }
  }
  if (out.exactly_zero) out.bits = 0.0;
  return out;
}

/// Maps (demand, M, worker points, decoys) to the N queries. The default is
/// build_private_queries; tests substitute broken builders.
using QueryBuilder = std::function<std::vector<PrivateQuery>(
    std::size_t, std::size_t, std::span<const Element>, std::span<const Element>)>;

/// Enumerates the master's randomness (ordered distinct worker points and
/// i.i.d. decoys, all from the request set) and compares, for every worker,
/// the exact distribution of Q_i across all demands. It also checks that
/// each distribution is uniform over Y^M.
inline AuditReport privacy_distribution_check(std::size_t library_size, std::size_t workers,
                                              std::span<const Element> request_set,
                                              QueryBuilder builder = build_private_queries,
                                              std::uint64_t cap = 10'000'000) {
  const std::size_t y = request_set.size();
  require(library_size >= 1 && workers >= 1, ErrorCode::kInvalidArgument, "M and N must be >= 1");
  require(y >= workers, ErrorCode::kYTooSmall, "request set smaller than N");
  detail::require_distinct(request_set, ErrorCode::kDuplicatePoint, "request set");
  long double space = 1;
  for (std::size_t i = 0; i < workers; ++i) space *= static_cast<long double>(y - i);
  space *= std::pow(static_cast<long double>(y), library_size - 1);
  require(space * library_size <= static_cast<long double>(cap), ErrorCode::kStateSpaceTooLarge,
          "query enumeration exceeds the cap of " + std::to_string(cap));

  AuditReport report;
  report.certificate = CertificateKind::kEnumeration;
  report.params = {{"M", library_size}, {"N", workers}, {"Y", y}};
  report.notes.push_back(
      "A-side shares and the library do not depend on the demand, so equal query "
      "distributions certify the privacy condition for this construction");

  // dist[D][i] maps a query to its count.
  std::vector<std::vector<std::map<std::vector<Element>, std::uint64_t>>> dist(
      library_size, std::vector<std::map<std::vector<Element>, std::uint64_t>>(workers));
  std::uint64_t outcomes = 0;
  std::vector<Element> points(workers), decoys(library_size - 1);
  // Ordered N-tuples of distinct indices, by odometer over [y]^N with a skip.
  std::vector<std::size_t> idx(workers, 0);
  std::vector<std::size_t> z(library_size - 1, 0);
  const auto distinct = [&] {
    std::vector<std::size_t> s(idx);
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  };
  const auto bump = [&](std::vector<std::size_t>& v) {
    for (auto& d : v) {
      if (++d < y) return true;
      d = 0;
    }
    return false;
  };
  do {
    if (!distinct()) continue;
    for (std::size_t i = 0; i < workers; ++i) points[i] = request_set[idx[i]];
    std::fill(z.begin(), z.end(), 0);
    do {
      for (std::size_t j = 0; j < z.size(); ++j) decoys[j] = request_set[z[j]];
      for (std::size_t d = 0; d < library_size; ++d) {
        const auto qs = builder(d, library_size, points, decoys);
        for (std::size_t i = 0; i < workers; ++i) ++dist[d][i][qs.at(i).entries];
      }
      ++outcomes;
    } while (bump(z));
  } while (bump(idx));
  report.subsets_tested = outcomes * library_size;

  const long double cells = std::pow(static_cast<long double>(y), library_size);
  for (std::size_t i = 0; i < workers; ++i) {
    for (std::size_t d = 1; d < library_size; ++d)
      if (dist[d][i] != dist[0][i])
        report.failures.push_back("worker " + std::to_string(i + 1) +
                                  ": query distribution differs between D=1 and D=" +
                                  std::to_string(d + 1));
    for (std::size_t d = 0; d < library_size; ++d) {
      bool uniform = static_cast<long double>(dist[d][i].size()) == cells;
      for (const auto& [q, count] : dist[d][i])
        uniform = uniform && static_cast<long double>(count) * cells ==
                                 static_cast<long double>(outcomes);
      if (!uniform)
        report.failures.push_back("worker " + std::to_string(i + 1) + ", D=" +
                                  std::to_string(d + 1) + ": query is not uniform over Y^M");
    }
  }
  return report;
}

}  // namespace epc
