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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epc/bilinear.hpp"
#include "epc/codes.hpp"
#include "epc/descriptor.hpp"
#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"
#include "epc/parallel.hpp"

namespace epc {

/// Inputs of one job, indexed [library entry][batch member]. Plain modes use
/// a single library entry on both sides; private modes hold M entries of B,
/// fully private M entries of both. `demand` is 0-based.
struct SchemeInputs {
  std::vector<std::vector<Matrix>> a;
  std::vector<std::vector<Matrix>> b;
  std::size_t demand = 0;
};

struct WorkerResult {
  std::size_t worker = 0;
  Matrix value;
};

using WorkerTask = std::variant<CodedShare, PrivateWorkerContext>;

inline Matrix run_worker(const Field& f, const WorkerTask& task) {
  if (const auto* share = std::get_if<CodedShare>(&task))
    return transpose_multiply(f, share->a, share->b);
  return run_private_worker(std::get<PrivateWorkerContext>(task));
}

/// Keys drawn for one deployment. Kept for tests and audits only; shares
/// never carry them.
struct RandomKeys {
  std::vector<Matrix> a;
  std::vector<Matrix> b;
};

struct MasterRecord {
  std::vector<Element> worker_points;
  std::optional<PrivateMasterRecord> privacy;
  RandomKeys keys;
};

struct Deployment {
  std::vector<WorkerTask> tasks;
  MasterRecord master;
};

/// A validated, immutable coding scheme for one SchemeDescriptor.
class Scheme {
 public:
  Scheme(const Field& field, SchemeDescriptor desc,
         std::optional<BilinearConstruction> construction = std::nullopt,
         std::optional<EvaluationPoints> points = std::nullopt,
         std::optional<std::vector<Element>> request_set = std::nullopt)
      : field_(field), desc_(desc) {
    if (construction) cons_ = std::make_shared<const BilinearConstruction>(std::move(*construction));
    validate_descriptor();
    setup_points(std::move(points), std::move(request_set));
  }

  const Field& field() const noexcept { return field_; }
  const SchemeDescriptor& descriptor() const noexcept { return desc_; }
  const BilinearConstruction* construction() const noexcept { return cons_.get(); }

  /// L * R, or 0 for the basic mode.
  std::size_t effective_rank() const noexcept { return rank_; }
  std::size_t threshold() const noexcept { return threshold_; }
  std::size_t baseline() const noexcept {
    return cubic_baseline(desc_.mode, desc_.shape, desc_.colluders, desc_.batch_size, desc_.batch);
  }
  const EvaluationPoints& points() const noexcept { return points_; }
  const std::vector<Element>& request_set() const noexcept { return request_set_; }

  /// Lengths of the padded A-side and B-side lists.
  std::size_t a_length() const noexcept {
    return desc_.mode == Mode::kFullyPrivate ? rank_ + 1 : rank_ + keys_.a;
  }
  std::size_t b_length() const noexcept {
    return is_private(desc_.mode) ? rank_ + 1 : rank_ + keys_.b;
  }

  void check_inputs(const SchemeInputs& in) const {
    const std::size_t m_lib = desc_.library_size;
    const std::size_t a_entries = desc_.mode == Mode::kFullyPrivate ? m_lib : 1;
    const std::size_t b_entries = is_private(desc_.mode) ? m_lib : 1;
    require(in.a.size() == a_entries && in.b.size() == b_entries, ErrorCode::kShapeMismatch,
            "expected " + std::to_string(a_entries) + " A entries and " +
                std::to_string(b_entries) + " B entries");
    require(!is_private(desc_.mode) || in.demand < m_lib, ErrorCode::kInvalidArgument,
            "demand outside the library");
    const Matrix& a0 = in.a.at(0).at(0);
    const Matrix& b0 = in.b.at(0).at(0);
    require(a0.rows() == b0.rows(), ErrorCode::kDimensionMismatch,
            "A is " + shape_string(a0) + " but B is " + shape_string(b0));
    for (const auto* side : {&in.a, &in.b}) {
      for (const auto& entry : *side) {
        require(entry.size() == desc_.batch_size, ErrorCode::kShapeMismatch,
                "each entry must hold L = " + std::to_string(desc_.batch_size) + " matrices");
        const Matrix& ref = side == &in.a ? a0 : b0;
        for (const Matrix& x : entry)
          require(x.same_shape(ref), ErrorCode::kShapeMismatch, "inputs differ in shape");
      }
    }
  }

  /// Encodes inputs into one task per worker. Keys and (for private modes)
  /// worker points and decoys are drawn from `rng`.
  Deployment deploy(const SchemeInputs& in, Rng& rng) const {
    check_inputs(in);
    Deployment out;
    const BlockShape s = desc_.shape;
    if (desc_.mode == Mode::kBasic) {
      out.master.worker_points = points_.points;
      for (auto& share : encode_basic(field_, partition(in.a[0][0], s.p, s.m),
                                      partition(in.b[0][0], s.p, s.n), points_.points))
        out.tasks.emplace_back(std::move(share));
      return out;
    }
    if (!is_private(desc_.mode)) {
      PaddedVector a = pad_with_keys(field_, pre_encoded(in.a[0], Side::kA), keys_.a, rng);
      PaddedVector b = pad_with_keys(field_, pre_encoded(in.b[0], Side::kB), keys_.b, rng);
      out.master.worker_points = points_.points;
      out.master.keys = RandomKeys{std::move(a.keys), std::move(b.keys)};
      for (auto& share : encode_lagrange_shares(field_, a.values, b.values, points_.nodes,
                                                points_.points, rank_, desc_.systematic))
        out.tasks.emplace_back(std::move(share));
      return out;
    }

    auto library = std::make_shared<PublicLibrary>();
    library->field = field_;
    library->nodes = points_.nodes;
    for (const auto& entry : in.b) library->b_entries.push_back(pre_encoded(entry, Side::kB));
    std::vector<Matrix> a_shares;
    std::optional<PaddedVector> a_padded;
    if (desc_.mode == Mode::kFullyPrivate) {
      for (const auto& entry : in.a) library->a_entries.push_back(pre_encoded(entry, Side::kA));
    } else {
      a_padded = pad_with_keys(field_, pre_encoded(in.a[0], Side::kA), keys_.a, rng);
    }
    QueryBundle bundle =
        private_query_gen(in.demand, desc_.library_size, desc_.workers, request_set_,
                          std::span<const Element>(points_.nodes).subspan(0, rank_), rng);
    if (a_padded) {
      a_shares = encode_private_a_shares(field_, a_padded->values, points_.nodes,
                                         bundle.record.worker_points);
      out.master.keys.a = a_padded->keys;
    }
    std::shared_ptr<const PublicLibrary> shared = std::move(library);
    for (std::size_t w = 0; w < desc_.workers; ++w) {
      PrivateWorkerContext ctx;
      ctx.worker_id = w;
      ctx.query = bundle.queries[w];
      if (a_padded) ctx.a_share = a_shares[w];
      ctx.library = shared;
      out.tasks.emplace_back(std::move(ctx));
    }
    out.master.worker_points = bundle.record.worker_points;
    out.master.privacy = std::move(bundle.record);
    return out;
  }

  /// Runs every worker task (in parallel) and returns results by worker id.
  std::vector<WorkerResult> compute(const Deployment& d) const {
    std::vector<WorkerResult> out(d.tasks.size());
    parallel_for(d.tasks.size(), [&](std::size_t i) {
      out[i] = WorkerResult{i, run_worker(field_, d.tasks[i])};
    });
    return out;
  }

  /// Decodes from results in arrival order. Only the first threshold-many
  /// are used (fewer when the systematic fast path applies). Returns the L
  /// output matrices.
  std::vector<Matrix> decode(const MasterRecord& master,
                             std::span<const WorkerResult> results) const {
    std::vector<PointResult> tagged;
    tagged.reserve(results.size());
    for (const auto& r : results) {
      require(r.worker < master.worker_points.size(), ErrorCode::kInvalidArgument,
              "unknown worker " + std::to_string(r.worker));
      tagged.push_back(PointResult{master.worker_points[r.worker], r.value});
    }
    std::vector<BlockMatrix> grids;
    switch (desc_.mode) {
      case Mode::kBasic:
        grids.push_back(decode_basic(field_, desc_.shape, tagged));
        break;
      case Mode::kImproved:
      case Mode::kOneSidedSecure:
      case Mode::kFullySecure:
        if (auto fast = systematic_products(results)) {
          grids = combine_batch(*cons_, *fast, desc_.batch_size);
        } else {
          grids = decode_lagrange(field_, *cons_, tagged, points_.nodes, a_length(), b_length(),
                                  desc_.batch_size);
        }
        break;
      case Mode::kPrivate:
      case Mode::kPrivateSecure:
      case Mode::kFullyPrivate:
        grids = private_decode(field_, *cons_, tagged, points_.nodes, a_length(),
                               desc_.mode == Mode::kFullyPrivate ? 2 : 1, desc_.batch_size);
        break;
    }
    std::vector<Matrix> out;
    out.reserve(grids.size());
    for (const auto& g : grids) out.push_back(assemble(g));
    return out;
  }

  /// Direct A^T B for the demanded inputs, one per batch member.
  std::vector<Matrix> expected(const SchemeInputs& in) const {
    const std::size_t ja = desc_.mode == Mode::kFullyPrivate ? in.demand : 0;
    const std::size_t jb = is_private(desc_.mode) ? in.demand : 0;
    std::vector<Matrix> out;
    for (std::size_t l = 0; l < desc_.batch_size; ++l)
      out.push_back(transpose_multiply(field_, in.a.at(ja).at(l), in.b.at(jb).at(l)));
    return out;
  }

  /// Uniformly random inputs of the given dimensions (A is s x t, B is s x r).
  SchemeInputs random_inputs(std::size_t s, std::size_t t, std::size_t r, Rng& rng,
                             std::size_t demand = 0) const {
    SchemeInputs in;
    in.demand = demand;
    const std::size_t a_entries = desc_.mode == Mode::kFullyPrivate ? desc_.library_size : 1;
    const std::size_t b_entries = is_private(desc_.mode) ? desc_.library_size : 1;
    in.a.resize(a_entries);
    in.b.resize(b_entries);
    for (auto& e : in.a)
      for (std::size_t l = 0; l < desc_.batch_size; ++l) e.push_back(Matrix::random(field_, s, t, rng));
    for (auto& e : in.b)
      for (std::size_t l = 0; l < desc_.batch_size; ++l) e.push_back(Matrix::random(field_, s, r, rng));
    return in;
  }

 private:
  void validate_descriptor() {
    SchemeDescriptor& d = desc_;
    const std::string name = descriptor_mode_name(d);
    require(d.shape.p > 0 && d.shape.m > 0 && d.shape.n > 0, ErrorCode::kInvalidArgument,
            "block shape must be positive");
    require(d.batch_size >= 1 && d.library_size >= 1 && d.workers >= 1,
            ErrorCode::kInvalidArgument, "N, L and M must be at least 1");
    require(d.batch || d.batch_size == 1, ErrorCode::kInvalidArgument,
            "L > 1 requires a batch mode");
    if (d.mode == Mode::kBasic) {
      require(!cons_, ErrorCode::kInvalidArgument, "basic mode takes no construction");
      require(!d.batch && d.colluders == 0 && d.library_size == 1,
              ErrorCode::kInvalidArgument, "basic mode has no batch, keys or library");
    } else {
      require(cons_ != nullptr, ErrorCode::kInvalidConstruction,
              name + " mode needs a bilinear construction");
      require(cons_->field() == field_, ErrorCode::kInvalidConstruction,
              "construction was built over a different field");
      require(cons_->shape() == d.shape, ErrorCode::kInvalidConstruction,
              "construction shape " + to_string(cons_->shape()) + " does not match " +
                  to_string(d.shape));
      const Validation v = validate_exact(*cons_);
      require(v.ok, ErrorCode::kInvalidConstruction, v.detail);
    }
    if (d.systematic) (void)systematic_points(d.mode, 1, 1);
    if (d.mode == Mode::kImproved || d.mode == Mode::kPrivate || d.mode == Mode::kFullyPrivate)
      require(d.colluders == 0, ErrorCode::kInvalidArgument,
              name + " mode does not take colluders (T must be 0)");
    if (d.mode == Mode::kPrivateSecure) {
      require(d.colluders <= 1, ErrorCode::kInvalidArgument,
              "private_secure pads A with exactly one key (T must be 0 or 1)");
      d.colluders = 1;
    }
    if (!is_private(d.mode))
      require(d.library_size == 1, ErrorCode::kInvalidArgument,
              name + " mode has no library (M must be 1)");
    if (d.mode == Mode::kFullyPrivate)
      require(d.library_size >= 2, ErrorCode::kMTooSmall,
              "fully private mode needs M >= 2, got " + std::to_string(d.library_size));

    rank_ = cons_ ? cons_->rank() * d.batch_size : 0;
    keys_ = key_counts(d.mode, d.colluders);
    threshold_ = recovery_threshold(d.mode, rank_, d.shape, d.colluders);
    require(d.workers >= threshold_, ErrorCode::kInvalidArgument,
            "N = " + std::to_string(d.workers) + " is below the recovery threshold " +
                std::to_string(threshold_) + " of " + name);
    require(field_.modulus() > d.workers + rank_ + d.colluders + 1,
            ErrorCode::kInsufficientFieldSize,
            "modulus " + std::to_string(field_.modulus()) + " must exceed N + R + T + 1 = " +
                std::to_string(d.workers + rank_ + d.colluders + 1));
  }

  void setup_points(std::optional<EvaluationPoints> points,
                    std::optional<std::vector<Element>> request_set) {
    const SchemeDescriptor& d = desc_;
    if (d.mode == Mode::kBasic) {
      if (points) {
        points_ = std::move(*points);
      } else {
        for (std::size_t i = 0; i < d.workers; ++i) points_.points.push_back(i + 1);
      }
    } else if (is_private(d.mode)) {
      points_ = points ? std::move(*points) : default_points(rank_, 0, 0);
      require(points_.nodes.size() == rank_ + 1, ErrorCode::kInvalidArgument,
              "private modes use exactly R+1 nodes");
      request_set_ = request_set ? std::move(*request_set) : default_request_set(rank_, d.workers);
      for (Element v : request_set_)
        require(field_.contains(v), ErrorCode::kInsufficientFieldSize,
                "request set element " + std::to_string(v) + " is outside the field");
      require(request_set_.size() >= d.workers, ErrorCode::kYTooSmall,
              "request set smaller than N");
      detail::require_distinct(request_set_, ErrorCode::kDuplicatePoint, "request set");
      for (Element v : request_set_)
        require(!detail::contains(std::span<const Element>(points_.nodes).subspan(0, rank_), v),
                ErrorCode::kPointCollision, "request set contains data node " + std::to_string(v));
    } else if (points) {
      points_ = std::move(*points);
    } else if (d.systematic) {
      points_ = systematic_points(d.mode, rank_, d.workers);
    } else {
      points_ = default_points(rank_, d.colluders, d.workers);
    }
    if (!is_private(d.mode)) {
      require(points_.points.size() == d.workers, ErrorCode::kInvalidArgument,
              "need exactly N worker points");
      detail::require_distinct(points_.points, ErrorCode::kDuplicatePoint, "worker point set");
      for (Element v : points_.points)
        require(field_.contains(v), ErrorCode::kInsufficientFieldSize,
                "worker point " + std::to_string(v) + " is outside the field");
    }
    if (d.mode != Mode::kBasic) {
      require(points_.nodes.size() >= rank_ + d.colluders, ErrorCode::kInvalidArgument,
              "need at least R+T interpolation nodes");
      detail::require_distinct(points_.nodes, ErrorCode::kDuplicateNode, "node set");
      if (!is_private(d.mode) && !d.systematic) {
        for (Element y : points_.points)
          require(!detail::contains(std::span<const Element>(points_.nodes).subspan(0, rank_), y),
                  ErrorCode::kPointCollision,
                  "worker point " + std::to_string(y) + " coincides with a data node");
      }
    }
  }

  std::vector<Matrix> pre_encoded(const std::vector<Matrix>& batch, Side side) const {
    const BlockShape s = desc_.shape;
    std::vector<BlockMatrix> grids;
    grids.reserve(batch.size());
    for (const Matrix& x : batch) grids.push_back(partition(x, s.p, side == Side::kA ? s.m : s.n));
    return batch_pre_encode(*cons_, grids, side);
  }

  // Systematic workers 0..R-1 hold y_i = x_i; when all of them responded their
  // results are the pre-encoded products themselves.
  std::optional<std::vector<Matrix>> systematic_products(
      std::span<const WorkerResult> results) const {
    if (!desc_.systematic) return std::nullopt;
    std::vector<const Matrix*> slot(rank_, nullptr);
    for (const auto& r : results)
      if (r.worker < rank_ && slot[r.worker] == nullptr) slot[r.worker] = &r.value;
    std::vector<Matrix> out;
    out.reserve(rank_);
    for (const Matrix* m : slot) {
      if (m == nullptr) return std::nullopt;
      out.push_back(*m);
    }
    return out;
  }

  Field field_;
  SchemeDescriptor desc_;
  std::shared_ptr<const BilinearConstruction> cons_;
  std::size_t rank_ = 0;
  std::size_t threshold_ = 0;
  KeyCounts keys_;
  EvaluationPoints points_;
  std::vector<Element> request_set_;
};

/// Runs one fully private job end to end: workers encode both sides from
/// their query alone and the master rescales by c(y_i)^2.
inline std::vector<Matrix> fully_private_pipeline(const Field& field,
                                                  const BilinearConstruction& cons,
                                                  const SchemeInputs& inputs,
                                                  std::size_t workers, std::uint64_t seed,
                                                  std::size_t batch_size = 1) {
  SchemeDescriptor d;
  d.mode = Mode::kFullyPrivate;
  d.shape = cons.shape();
  d.workers = workers;
  d.library_size = inputs.a.size();
  d.batch = batch_size > 1;
  d.batch_size = batch_size;
  d.seed = seed;
  const Scheme scheme(field, d, cons);
  Rng rng(seed);
  const Deployment dep = scheme.deploy(inputs, rng);
  return scheme.decode(dep.master, scheme.compute(dep));
}

}  // namespace epc
