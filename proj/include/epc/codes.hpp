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

// Encoders and decoders for entangled polynomial codes.
//
// Every coded scheme here follows the same two steps. Inputs are first
// pre-encoded through a bilinear construction into length-R lists whose
// element-wise products, combined through tensor c, give A^T B. The lists are
// then (optionally padded with random keys and) spread over workers with a
// Lagrange polynomial through nodes x_1..x_L evaluated at worker points y_i.
// Decoders interpolate the product polynomial from any threshold-many
// results and re-evaluate it at x_1..x_R.
//
// Index conventions:
//   * nodes are 0-based here: nodes[r] is x_{r+1}.
//   * batch lists are l-major: entry l*R + i is term i of batch member l.
//   * library indices (private modes) and the demand are 0-based.

#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epc/bilinear.hpp"
#include "epc/descriptor.hpp"
#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"
#include "epc/polynomial.hpp"

namespace epc {

/// Coded input pair held by one worker. `point` is master-side knowledge.
struct CodedShare {
  std::size_t worker = 0;
  Element point = 0;
  Matrix a;
  Matrix b;
};

/// A worker's returned product tagged with the evaluation point it stands for.
struct PointResult {
  Element point = 0;
  Matrix value;
};

struct EvaluationPoints {
  std::vector<Element> nodes;   // x_1, x_2, ...
  std::vector<Element> points;  // y_1 .. y_N
};

namespace detail {

inline void require_field_size(const Field& f, std::size_t needed_distinct) {
  require(f.modulus() > needed_distinct, ErrorCode::kInsufficientFieldSize,
          "field of size " + std::to_string(f.modulus()) + " cannot supply " +
              std::to_string(needed_distinct) + " distinct points");
}

inline bool contains(std::span<const Element> set, Element v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Basic entangled polynomial code.

/// Worker i receives A~ = sum A_{j,k} y^{j+kp} and B~ = sum B_{j,k'} y^{p-1-j+k'pm}.
inline std::vector<CodedShare> encode_basic(const Field& f, const BlockMatrix& a,
                                            const BlockMatrix& b,
                                            std::span<const Element> points) {
  require(a.grid_rows == b.grid_rows && a.block_rows == b.block_rows,
          ErrorCode::kDimensionMismatch, "A and B grids disagree on the shared dimension");
  detail::require_distinct(points, ErrorCode::kDuplicatePoint, "worker point set");
  detail::require_field_size(f, points.size() + 1);
  const std::size_t p = a.grid_rows, m = a.grid_cols, n = b.grid_cols;
  std::vector<CodedShare> out;
  out.reserve(points.size());
  for (std::size_t w = 0; w < points.size(); ++w) {
    const Element y = points[w];
    CodedShare share{w, y, Matrix(a.block_rows, a.block_cols), Matrix(b.block_rows, b.block_cols)};
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < m; ++k) add_scaled(f, share.a, f.pow(y, j + k * p), a.block(j, k));
      for (std::size_t kp = 0; kp < n; ++kp)
        add_scaled(f, share.b, f.pow(y, p - 1 - j + kp * p * m), b.block(j, kp));
    }
    out.push_back(std::move(share));
  }
  return out;
}

/// Interpolates the degree pmn+p-2 product polynomial from the first
/// pmn+p-1 results; C_{k,k'} is its coefficient at (p-1) + kp + k'pm.
inline BlockMatrix decode_basic(const Field& f, BlockShape shape,
                                std::span<const PointResult> results) {
  const std::size_t needed = shape.volume() + shape.p - 1;
  require(results.size() >= needed, ErrorCode::kNotEnoughResults,
          "basic decoding needs " + std::to_string(needed) + " results, got " +
              std::to_string(results.size()));
  std::vector<Element> xs;
  std::vector<Matrix> ys;
  for (std::size_t i = 0; i < needed; ++i) {
    xs.push_back(results[i].point);
    ys.push_back(results[i].value);
  }
  detail::require_distinct(xs, ErrorCode::kDuplicatePoint, "result point set");
  const MatrixPolynomial coeffs = lagrange_interpolate(f, xs, ys);
  BlockMatrix out;
  out.grid_rows = shape.m;
  out.grid_cols = shape.n;
  out.block_rows = ys[0].rows();
  out.block_cols = ys[0].cols();
  for (std::size_t k = 0; k < shape.m; ++k)
    for (std::size_t kp = 0; kp < shape.n; ++kp)
      out.blocks.push_back(coeffs[shape.p - 1 + k * shape.p + kp * shape.p * shape.m]);
  return out;
}

// ---------------------------------------------------------------------------
// Pre-encoding and key padding.

inline std::vector<Matrix> pre_encode(const BilinearConstruction& cons, const BlockMatrix& x,
                                      Side side) {
  return encode_side(cons, x, side);
}

/// Pre-encodes L inputs and concatenates the lists l-major (length L*R).
inline std::vector<Matrix> batch_pre_encode(const BilinearConstruction& cons,
                                            std::span<const BlockMatrix> xs, Side side) {
  require(!xs.empty(), ErrorCode::kShapeMismatch, "empty batch");
  std::vector<Matrix> out;
  out.reserve(xs.size() * cons.rank());
  for (const BlockMatrix& x : xs) {
    require(x.grid_rows == xs[0].grid_rows && x.grid_cols == xs[0].grid_cols &&
                x.block_rows == xs[0].block_rows && x.block_cols == xs[0].block_cols,
            ErrorCode::kShapeMismatch, "batch members have different partitions");
    auto part = encode_side(cons, x, side);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

struct PaddedVector {
  std::vector<Matrix> values;  // pre-encoded entries followed by the keys
  std::vector<Matrix> keys;    // copies of the appended keys
};

/// Appends `key_count` uniformly random matrices of the entries' shape.
inline PaddedVector pad_with_keys(const Field& f, std::vector<Matrix> vec, std::size_t key_count,
                                  Rng& rng) {
  require(!vec.empty(), ErrorCode::kInvalidArgument, "cannot pad an empty list");
  PaddedVector out;
  out.values = std::move(vec);
  const std::size_t rows = out.values[0].rows(), cols = out.values[0].cols();
  for (std::size_t t = 0; t < key_count; ++t) {
    out.keys.push_back(Matrix::random(f, rows, cols, rng));
    out.values.push_back(out.keys.back());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lagrange encoding (improved, secure, batch).

/// Nodes x_j = j-1 for j = 1..R+T+1 and worker points y_i = R+T+i-1.
inline EvaluationPoints default_points(std::size_t rank, std::size_t colluders,
                                       std::size_t workers) {
  EvaluationPoints out;
  for (std::size_t j = 0; j <= rank + colluders; ++j) out.nodes.push_back(j);
  for (std::size_t i = 0; i < workers; ++i) out.points.push_back(rank + colluders + i);
  return out;
}

/// Systematic layout: y_i = x_i for the first R workers, so each of them
/// computes one pre-encoded product uncoded. Only the plain improved mode
/// (batched or not) may use it; secure and private modes need y disjoint
/// from x_1..x_R.
inline EvaluationPoints systematic_points(Mode mode, std::size_t rank, std::size_t workers) {
  require(mode == Mode::kImproved, ErrorCode::kModeForbidsSystematic,
          std::string(mode_name(mode)) + " requires worker points disjoint from the nodes");
  require(workers >= rank, ErrorCode::kInvalidArgument, "fewer workers than systematic slots");
  EvaluationPoints out = default_points(rank, 0, workers);
  for (std::size_t i = 0; i < rank; ++i) out.points[i] = out.nodes[i];
  return out;
}

/// Worker i gets (sum_j a'_j l_j(y_i), sum_j b'_j l'_j(y_i)) with l over the
/// first L_A (resp. L_B) nodes. Points must avoid nodes[0..rank) unless
/// `allow_systematic` is set.
inline std::vector<CodedShare> encode_lagrange_shares(const Field& f,
                                                      std::span<const Matrix> a_padded,
                                                      std::span<const Matrix> b_padded,
                                                      std::span<const Element> nodes,
                                                      std::span<const Element> points,
                                                      std::size_t rank,
                                                      bool allow_systematic = false) {
  const std::size_t la = a_padded.size(), lb = b_padded.size();
  require(la > 0 && lb > 0, ErrorCode::kInvalidArgument, "empty input list");
  require(nodes.size() >= std::max(la, lb) && rank <= std::min(la, lb),
          ErrorCode::kInvalidArgument, "not enough interpolation nodes");
  detail::require_distinct(points, ErrorCode::kDuplicatePoint, "worker point set");
  detail::require_field_size(f, points.size() + std::max(la, lb) + 1);
  if (!allow_systematic) {
    for (Element y : points)
      require(!detail::contains(nodes.subspan(0, rank), y), ErrorCode::kPointCollision,
              "worker point " + std::to_string(y) + " coincides with a data node");
  }
  const LagrangeBasis basis_a(f, std::vector<Element>(nodes.begin(), nodes.begin() + la));
  const LagrangeBasis basis_b(f, std::vector<Element>(nodes.begin(), nodes.begin() + lb));
  std::vector<CodedShare> out;
  out.reserve(points.size());
  for (std::size_t w = 0; w < points.size(); ++w) {
    out.push_back(CodedShare{w, points[w], lagrange_combine(f, basis_a, a_padded, points[w]),
                             lagrange_combine(f, basis_b, b_padded, points[w])});
  }
  return out;
}

/// Interpolates through the first `needed` results and evaluates the
/// interpolant at each target.
inline std::vector<Matrix> recover_products(const Field& f, std::span<const PointResult> results,
                                            std::size_t needed,
                                            std::span<const Element> targets) {
  require(results.size() >= needed, ErrorCode::kNotEnoughResults,
          "decoding needs " + std::to_string(needed) + " results, got " +
              std::to_string(results.size()));
  std::vector<Element> xs;
  std::vector<Matrix> ys;
  xs.reserve(needed);
  ys.reserve(needed);
  for (std::size_t i = 0; i < needed; ++i) {
    xs.push_back(results[i].point);
    ys.push_back(results[i].value);
  }
  detail::require_distinct(xs, ErrorCode::kDuplicatePoint, "result point set");
  return interpolate_at(f, xs, ys, targets);
}

/// Splits an l-major product list into L groups and combines each via c.
inline std::vector<BlockMatrix> combine_batch(const BilinearConstruction& cons,
                                              std::span<const Matrix> products,
                                              std::size_t batch_size) {
  require(products.size() == cons.rank() * batch_size, ErrorCode::kDimensionMismatch,
          "product count does not match L*R");
  std::vector<BlockMatrix> out;
  for (std::size_t l = 0; l < batch_size; ++l)
    out.push_back(combine_products(cons, products.subspan(l * cons.rank(), cons.rank())));
  return out;
}

/// Decodes a Lagrange-coded job from L_A + L_B - 1 results. Only nodes
/// x_1..x_{L*R} are evaluated; key nodes never are.
inline std::vector<BlockMatrix> decode_lagrange(const Field& f, const BilinearConstruction& cons,
                                                std::span<const PointResult> results,
                                                std::span<const Element> nodes, std::size_t a_len,
                                                std::size_t b_len, std::size_t batch_size = 1) {
  const std::size_t rank = cons.rank() * batch_size;
  require(nodes.size() >= rank, ErrorCode::kInvalidArgument, "not enough nodes");
  const auto products = recover_products(f, results, a_len + b_len - 1, nodes.subspan(0, rank));
  return combine_batch(cons, products, batch_size);
}

// ---------------------------------------------------------------------------
// Private modes.

struct PrivateQuery {
  std::vector<Element> entries;  // q_{i,1} .. q_{i,M}

  friend bool operator==(const PrivateQuery&, const PrivateQuery&) = default;
};

/// What the master keeps to decode; never shipped to workers.
struct PrivateMasterRecord {
  std::size_t demand = 0;
  std::vector<Element> worker_points;  // y_1 .. y_N
  std::vector<Element> decoys;         // z_j for j != demand, increasing j
};

struct QueryBundle {
  std::vector<PrivateQuery> queries;
  PrivateMasterRecord record;
};

/// Q_i has y_i at the demanded position and the shared decoy z_j elsewhere.
inline std::vector<PrivateQuery> build_private_queries(std::size_t demand,
                                                       std::size_t library_size,
                                                       std::span<const Element> worker_points,
                                                       std::span<const Element> decoys) {
  require(demand < library_size, ErrorCode::kInvalidArgument, "demand outside the library");
  require(decoys.size() + 1 == library_size, ErrorCode::kInvalidArgument,
          "need one decoy per undemanded library entry");
  std::vector<PrivateQuery> out;
  out.reserve(worker_points.size());
  for (Element y : worker_points) {
    PrivateQuery q;
    q.entries.reserve(library_size);
    for (std::size_t j = 0, d = 0; j < library_size; ++j)
      q.entries.push_back(j == demand ? y : decoys[d++]);
    out.push_back(std::move(q));
  }
  return out;
}

/// Contiguous request set {R, ..., R + 2N - 1}; it avoids x_1..x_R = 0..R-1.
inline std::vector<Element> default_request_set(std::size_t rank, std::size_t workers) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < 2 * workers; ++i) out.push_back(rank + i);
  return out;
}

/// Draws N distinct worker points uniformly from the request set and
/// independent uniform decoys z_j (j != demand) from the same set.
inline QueryBundle private_query_gen(std::size_t demand, std::size_t library_size,
                                     std::size_t workers, std::span<const Element> request_set,
                                     std::span<const Element> excluded, Rng& rng) {
  require(request_set.size() >= workers, ErrorCode::kYTooSmall,
          "request set has " + std::to_string(request_set.size()) + " elements, need " +
              std::to_string(workers));
  detail::require_distinct(request_set, ErrorCode::kDuplicatePoint, "request set");
  for (Element v : request_set)
    require(!detail::contains(excluded, v), ErrorCode::kPointCollision,
            "request set contains data node " + std::to_string(v));
  std::vector<Element> pool(request_set.begin(), request_set.end());
  QueryBundle out;
  out.record.demand = demand;
  for (std::size_t i = 0; i < workers; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.record.worker_points.push_back(pool[i]);
  }
  std::uniform_int_distribution<std::size_t> any(0, request_set.size() - 1);
  for (std::size_t j = 0; j + 1 < library_size; ++j)
    out.record.decoys.push_back(request_set[any(rng)]);
  out.queries =
      build_private_queries(demand, library_size, out.record.worker_points, out.record.decoys);
  return out;
}

/// c(at) = prod_{j<R} (at - x_j) / (x_{R+1} - x_j); nodes holds x_1..x_{R+1}.
inline Element normalization_c(const Field& f, std::span<const Element> nodes, Element at) {
  require(nodes.size() >= 2, ErrorCode::kInvalidArgument, "need R+1 nodes");
  const std::size_t r = nodes.size() - 1;
  Element num = 1, den = 1;
  for (std::size_t j = 0; j < r; ++j) {
    num = f.mul(num, f.sub(at, nodes[j]));
    den = f.mul(den, f.sub(nodes[r], nodes[j]));
  }
  return f.div(num, den);
}

/// Scalars s_i(at) with Norm(at) = sum_i vec_i s_i(at), where
/// s_i(at) = -kappa_i (at - x_{R+1}) / (at - x_i) and
/// kappa_i = prod_{j != i, j < R} (x_{R+1} - x_j) / (x_i - x_j).
class NormBasis {
 public:
  NormBasis(const Field& f, std::vector<Element> nodes) : field_(f), nodes_(std::move(nodes)) {
    require(nodes_.size() >= 2, ErrorCode::kInvalidArgument, "need R+1 nodes");
    detail::require_distinct(nodes_, ErrorCode::kDuplicateNode, "node set");
    const std::size_t r = nodes_.size() - 1;
    kappa_.assign(r, 1);
    for (std::size_t i = 0; i < r; ++i) {
      Element num = 1, den = 1;
      for (std::size_t j = 0; j < r; ++j) {
        if (j == i) continue;
        num = field_.mul(num, field_.sub(nodes_[r], nodes_[j]));
        den = field_.mul(den, field_.sub(nodes_[i], nodes_[j]));
      }
      kappa_[i] = field_.div(num, den);
    }
  }

  std::size_t rank() const noexcept { return kappa_.size(); }
  const std::vector<Element>& nodes() const noexcept { return nodes_; }

  std::vector<Element> coefficients(Element at) const {
    const std::size_t r = kappa_.size();
    const Element tail = field_.sub(at, nodes_[r]);
    std::vector<Element> out(r);
    for (std::size_t i = 0; i < r; ++i) {
      require(at != nodes_[i], ErrorCode::kPoleAtNode,
              "normalized basis has a pole at node " + std::to_string(at));
      out[i] = field_.neg(field_.mul(kappa_[i], field_.div(tail, field_.sub(at, nodes_[i]))));
    }
    return out;
  }

  Matrix eval(std::span<const Matrix> vec, Element at) const {
    require(vec.size() == rank(), ErrorCode::kDimensionMismatch, "vector length is not R");
    const auto s = coefficients(at);
    Matrix acc(vec[0].rows(), vec[0].cols());
    for (std::size_t i = 0; i < s.size(); ++i) add_scaled(field_, acc, s[i], vec[i]);
    return acc;
  }

 private:
  Field field_;
  std::vector<Element> nodes_;
  std::vector<Element> kappa_;
};

inline Matrix norm_basis_eval(const Field& f, std::span<const Matrix> vec,
                              std::span<const Element> nodes, Element at) {
  return NormBasis(f, std::vector<Element>(nodes.begin(), nodes.end())).eval(vec, at);
}

/// Data every worker may hold in private modes: the pre-encoded libraries
/// and the public nodes. Nothing here depends on the demand.
struct PublicLibrary {
  Field field;
  std::vector<Element> nodes;                  // x_1 .. x_{R+1}
  std::vector<std::vector<Matrix>> a_entries;  // fully private only
  std::vector<std::vector<Matrix>> b_entries;
};

/// Everything a private-mode worker sees. There is deliberately no member
/// for the demand or for the worker's evaluation point.
struct PrivateWorkerContext {
  std::size_t worker_id = 0;
  PrivateQuery query;
  std::optional<Matrix> a_share;  // absent in fully private mode
  std::shared_ptr<const PublicLibrary> library;
};

/// sum_j Norm^{(j)}(q_j) over library entries.
inline Matrix encode_from_query(const NormBasis& basis,
                                std::span<const std::vector<Matrix>> entries,
                                const PrivateQuery& query, const Field& f) {
  require(entries.size() == query.entries.size(), ErrorCode::kDimensionMismatch,
          "query length does not match library size");
  Matrix acc;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    Matrix term = basis.eval(entries[j], query.entries[j]);
    if (acc.empty())
      acc = std::move(term);
    else
      add_scaled(f, acc, 1, term);
  }
  return acc;
}

inline Matrix run_private_worker(const PrivateWorkerContext& ctx) {
  require(ctx.library != nullptr, ErrorCode::kInvalidArgument, "worker has no library");
  const PublicLibrary& lib = *ctx.library;
  const NormBasis basis(lib.field, lib.nodes);
  const Matrix b = encode_from_query(basis, lib.b_entries, ctx.query, lib.field);
  const Matrix a =
      ctx.a_share ? *ctx.a_share : encode_from_query(basis, lib.a_entries, ctx.query, lib.field);
  return transpose_multiply(lib.field, a, b);
}

/// A~(y_i) for each worker, with A~ the Lagrange polynomial of a_padded over
/// the first L_A nodes.
inline std::vector<Matrix> encode_private_a_shares(const Field& f,
                                                   std::span<const Matrix> a_padded,
                                                   std::span<const Element> nodes,
                                                   std::span<const Element> points) {
  require(nodes.size() >= a_padded.size(), ErrorCode::kInvalidArgument, "not enough nodes");
  const LagrangeBasis basis(f, std::vector<Element>(nodes.begin(), nodes.begin() + a_padded.size()));
  std::vector<Matrix> out;
  out.reserve(points.size());
  for (Element y : points) out.push_back(lagrange_combine(f, basis, a_padded, y));
  return out;
}

/// Private decoding. Each of the first L_A + R results is multiplied by
/// c(y_i)^power (power 1 for private / private_secure, 2 for fully private),
/// turning it into A~(y_i)^T B~(y_i); the product polynomial is then
/// interpolated and evaluated at x_1..x_R.
inline std::vector<BlockMatrix> private_decode(const Field& f, const BilinearConstruction& cons,
                                               std::span<const PointResult> results,
                                               std::span<const Element> nodes, std::size_t a_len,
                                               unsigned power, std::size_t batch_size = 1) {
  const std::size_t rank = cons.rank() * batch_size;
  require(nodes.size() == rank + 1, ErrorCode::kInvalidArgument, "private modes use R+1 nodes");
  const std::size_t needed = a_len + rank;
  require(results.size() >= needed, ErrorCode::kNotEnoughResults,
          "decoding needs " + std::to_string(needed) + " results, got " +
              std::to_string(results.size()));
  std::vector<PointResult> rescaled(results.begin(), results.begin() + needed);
  for (auto& r : rescaled) {
    const Element c = normalization_c(f, nodes, r.point);
    r.value = scaled(f, power == 2 ? f.mul(c, c) : c, r.value);
  }
  const auto products = recover_products(f, rescaled, needed, nodes.subspan(0, rank));
  return combine_batch(cons, products, batch_size);
}

}  // namespace epc
