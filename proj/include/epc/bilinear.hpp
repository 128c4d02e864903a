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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"

namespace epc {

/// Block grid of a product A^T B: A is cut p x m, B is cut p x n, and the
/// output C is m x n blocks.
struct BlockShape {
  std::size_t p = 1;
  std::size_t m = 1;
  std::size_t n = 1;

  constexpr std::size_t volume() const noexcept { return p * m * n; }
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

inline std::string to_string(const BlockShape& s) {
  return "(" + std::to_string(s.p) + "," + std::to_string(s.m) + "," + std::to_string(s.n) + ")";
}

enum class Side { kA, kB };

/// Rank-R decomposition (a, b, c) of the block product C_{k,k'} =
/// sum_j A_{j,k}^T B_{j,k'}. Tensors are stored flat: a is R x p x m,
/// b is R x p x n, c is R x m x n, all row-major.
class BilinearConstruction {
 public:
  BilinearConstruction(const Field& field, BlockShape shape, std::size_t rank,
                       std::vector<Element> a, std::vector<Element> b, std::vector<Element> c)
      : field_(field), shape_(shape), rank_(rank), a_(std::move(a)), b_(std::move(b)),
        c_(std::move(c)) {
    require(shape.p > 0 && shape.m > 0 && shape.n > 0 && rank > 0,
            ErrorCode::kInvalidConstruction, "shape and rank must be positive");
    require(a_.size() == rank * shape.p * shape.m && b_.size() == rank * shape.p * shape.n &&
                c_.size() == rank * shape.m * shape.n,
            ErrorCode::kInvalidConstruction, "tensor sizes do not match shape " +
                                                 to_string(shape) + " and rank " +
                                                 std::to_string(rank));
    for (auto* t : {&a_, &b_, &c_})
      for (Element& v : *t) v = field_.reduce(v);
  }

  const Field& field() const noexcept { return field_; }
  BlockShape shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return rank_; }

  Element a(std::size_t i, std::size_t j, std::size_t k) const {
    return a_[(i * shape_.p + j) * shape_.m + k];
  }
  Element b(std::size_t i, std::size_t j, std::size_t kp) const {
    return b_[(i * shape_.p + j) * shape_.n + kp];
  }
  Element c(std::size_t i, std::size_t k, std::size_t kp) const {
    return c_[(i * shape_.m + k) * shape_.n + kp];
  }

  void set_a(std::size_t i, std::size_t j, std::size_t k, Element v) {
    a_[(i * shape_.p + j) * shape_.m + k] = field_.reduce(v);
  }
  void set_b(std::size_t i, std::size_t j, std::size_t kp, Element v) {
    b_[(i * shape_.p + j) * shape_.n + kp] = field_.reduce(v);
  }
  void set_c(std::size_t i, std::size_t k, std::size_t kp, Element v) {
    c_[(i * shape_.m + k) * shape_.n + kp] = field_.reduce(v);
  }

  friend bool operator==(const BilinearConstruction&, const BilinearConstruction&) = default;

 private:
  Field field_;
  BlockShape shape_;
  std::size_t rank_;
  std::vector<Element> a_;
  std::vector<Element> b_;
  std::vector<Element> c_;
};

/// One rank-1 term per (j, k, k') triple, ordered i = (j*m + k)*n + k'.
inline BilinearConstruction naive_construction(const Field& field, BlockShape shape) {
  require(shape.p > 0 && shape.m > 0 && shape.n > 0, ErrorCode::kInvalidArgument,
          "shape must be positive");
  const std::size_t r = shape.volume();
  std::vector<Element> a(r * shape.p * shape.m, 0);
  std::vector<Element> b(r * shape.p * shape.n, 0);
  std::vector<Element> c(r * shape.m * shape.n, 0);
  for (std::size_t j = 0; j < shape.p; ++j) {
    for (std::size_t k = 0; k < shape.m; ++k) {
      for (std::size_t kp = 0; kp < shape.n; ++kp) {
        const std::size_t i = (j * shape.m + k) * shape.n + kp;
        a[(i * shape.p + j) * shape.m + k] = 1;
        b[(i * shape.p + j) * shape.n + kp] = 1;
        c[(i * shape.m + k) * shape.n + kp] = 1;
      }
    }
  }
  return BilinearConstruction(field, shape, r, std::move(a), std::move(b), std::move(c));
}

/// Strassen's seven products for (2,2,2). The classical tables multiply
/// X * Y; here X_{k,j} = A_{j,k}^T, so the A-side table is read transposed.
inline BilinearConstruction strassen_222(const Field& field) {
  struct Term {
    std::array<std::array<int, 2>, 2> x;  // coefficient of X_{r,s}
    std::array<std::array<int, 2>, 2> y;  // coefficient of Y_{s,t}
    std::array<std::array<int, 2>, 2> c;  // contribution to C_{r,t}
  };
  static constexpr std::array<Term, 7> kTerms = {{
      {{{{1, 0}, {0, 1}}}, {{{1, 0}, {0, 1}}}, {{{1, 0}, {0, 1}}}},
      {{{{0, 0}, {1, 1}}}, {{{1, 0}, {0, 0}}}, {{{0, 0}, {1, -1}}}},
      {{{{1, 0}, {0, 0}}}, {{{0, 1}, {0, -1}}}, {{{0, 1}, {0, 1}}}},
      {{{{0, 0}, {0, 1}}}, {{{-1, 0}, {1, 0}}}, {{{1, 0}, {1, 0}}}},
      {{{{1, 1}, {0, 0}}}, {{{0, 0}, {0, 1}}}, {{{-1, 1}, {0, 0}}}},
      {{{{-1, 0}, {1, 0}}}, {{{1, 1}, {0, 0}}}, {{{0, 0}, {0, 1}}}},
      {{{{0, 1}, {0, -1}}}, {{{0, 0}, {1, 1}}}, {{{1, 0}, {0, 0}}}},
  }};
  std::vector<Element> a(7 * 4), b(7 * 4), c(7 * 4);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t u = 0; u < 2; ++u) {
      for (std::size_t v = 0; v < 2; ++v) {
        // a[i][j][k] = x[k][j]
        a[(i * 2 + u) * 2 + v] = field.from_signed(kTerms[i].x[v][u]);
        b[(i * 2 + u) * 2 + v] = field.from_signed(kTerms[i].y[u][v]);
        c[(i * 2 + u) * 2 + v] = field.from_signed(kTerms[i].c[u][v]);
      }
    }
  }
  return BilinearConstruction(field, BlockShape{2, 2, 2}, 7, std::move(a), std::move(b),
                              std::move(c));
}

/// Kronecker product of two constructions. Composite indices are
/// outer * inner_extent + inner (row-major, outer first) for the rank and
/// for every block coordinate, so block (j, k) of the composite grid is
/// sub-block (j_v, k_v) of outer block (j_u, k_u).
inline BilinearConstruction tensor_compose(const BilinearConstruction& outer,
                                           const BilinearConstruction& inner) {
  require(outer.field() == inner.field(), ErrorCode::kInvalidArgument,
          "constructions live in different fields");
  const Field& f = outer.field();
  const BlockShape so = outer.shape();
  const BlockShape si = inner.shape();
  const BlockShape s{so.p * si.p, so.m * si.m, so.n * si.n};
  const std::size_t r = outer.rank() * inner.rank();
  std::vector<Element> a(r * s.p * s.m), b(r * s.p * s.n), c(r * s.m * s.n);
  for (std::size_t io = 0; io < outer.rank(); ++io) {
    for (std::size_t ii = 0; ii < inner.rank(); ++ii) {
      const std::size_t i = io * inner.rank() + ii;
      for (std::size_t jo = 0; jo < so.p; ++jo)
        for (std::size_t ji = 0; ji < si.p; ++ji) {
          const std::size_t j = jo * si.p + ji;
          for (std::size_t ko = 0; ko < so.m; ++ko)
            for (std::size_t ki = 0; ki < si.m; ++ki)
              a[(i * s.p + j) * s.m + ko * si.m + ki] =
                  f.mul(outer.a(io, jo, ko), inner.a(ii, ji, ki));
          for (std::size_t ko = 0; ko < so.n; ++ko)
            for (std::size_t ki = 0; ki < si.n; ++ki)
              b[(i * s.p + j) * s.n + ko * si.n + ki] =
                  f.mul(outer.b(io, jo, ko), inner.b(ii, ji, ki));
        }
      for (std::size_t ko = 0; ko < so.m; ++ko)
        for (std::size_t ki = 0; ki < si.m; ++ki)
          for (std::size_t lo = 0; lo < so.n; ++lo)
            for (std::size_t li = 0; li < si.n; ++li)
              c[(i * s.m + ko * si.m + ki) * s.n + lo * si.n + li] =
                  f.mul(outer.c(io, ko, lo), inner.c(ii, ki, li));
    }
  }
  return BilinearConstruction(f, s, r, std::move(a), std::move(b), std::move(c));
}

/// strassen_222 composed with itself `power` times; power 0 is the trivial
/// (1,1,1) construction.
inline BilinearConstruction strassen_power(const Field& field, std::size_t power) {
  BilinearConstruction out = naive_construction(field, BlockShape{1, 1, 1});
  for (std::size_t i = 0; i < power; ++i) out = tensor_compose(out, strassen_222(field));
  return out;
}

/// Pre-encodes one side: entry i is sum_{j,k} X_{j,k} * a[i][j][k] (or b).
inline std::vector<Matrix> encode_side(const BilinearConstruction& cons, const BlockMatrix& x,
                                       Side side) {
  const BlockShape s = cons.shape();
  const std::size_t cols = side == Side::kA ? s.m : s.n;
  require(x.grid_rows == s.p && x.grid_cols == cols, ErrorCode::kDimensionMismatch,
          std::string(side == Side::kA ? "A" : "B") + " grid " + std::to_string(x.grid_rows) +
              "x" + std::to_string(x.grid_cols) + " does not match construction " +
              to_string(s));
  const Field& f = cons.field();
  std::vector<Matrix> out;
  out.reserve(cons.rank());
  for (std::size_t i = 0; i < cons.rank(); ++i) {
    Matrix acc(x.block_rows, x.block_cols);
    for (std::size_t j = 0; j < s.p; ++j)
      for (std::size_t k = 0; k < cols; ++k)
        add_scaled(f, acc, side == Side::kA ? cons.a(i, j, k) : cons.b(i, j, k), x.block(j, k));
    out.push_back(std::move(acc));
  }
  return out;
}

/// Combines the R element-wise products through tensor c into the m x n
/// output grid.
inline BlockMatrix combine_products(const BilinearConstruction& cons,
                                    std::span<const Matrix> products) {
  require(products.size() == cons.rank(), ErrorCode::kDimensionMismatch,
          "expected " + std::to_string(cons.rank()) + " products, got " +
              std::to_string(products.size()));
  const BlockShape s = cons.shape();
  BlockMatrix out;
  out.grid_rows = s.m;
  out.grid_cols = s.n;
  out.block_rows = products[0].rows();
  out.block_cols = products[0].cols();
  out.blocks.assign(s.m * s.n, Matrix(out.block_rows, out.block_cols));
  for (std::size_t i = 0; i < cons.rank(); ++i)
    for (std::size_t k = 0; k < s.m; ++k)
      for (std::size_t kp = 0; kp < s.n; ++kp)
        add_scaled(cons.field(), out.block(k, kp), cons.c(i, k, kp), products[i]);
  return out;
}

/// Runs the bilinear algorithm on block grids and returns the C grid.
inline BlockMatrix apply(const BilinearConstruction& cons, const BlockMatrix& a,
                         const BlockMatrix& b) {
  require(a.block_rows == b.block_rows, ErrorCode::kDimensionMismatch,
          "A and B blocks have different row counts");
  const auto av = encode_side(cons, a, Side::kA);
  const auto bv = encode_side(cons, b, Side::kB);
  std::vector<Matrix> products;
  products.reserve(cons.rank());
  for (std::size_t i = 0; i < cons.rank(); ++i)
    products.push_back(transpose_multiply(cons.field(), av[i], bv[i]));
  return combine_products(cons, products);
}

enum class ValidationMode { kExact, kRandomized };

/// Index of a violated Brent equation: coefficient of A_{j,k} B_{j2,k2} in
/// output block C_{l,l2}.
struct BrentViolation {
  std::size_t j = 0, k = 0, j2 = 0, k2 = 0, l = 0, l2 = 0;
  Element got = 0;
  Element want = 0;
};

struct Validation {
  bool ok = true;
  std::optional<BrentViolation> violation;
  std::string detail;

  explicit operator bool() const noexcept { return ok; }
};

inline Validation validate_exact(const BilinearConstruction& cons) {
  const BlockShape s = cons.shape();
  const Field& f = cons.field();
  for (std::size_t j = 0; j < s.p; ++j)
    for (std::size_t k = 0; k < s.m; ++k)
      for (std::size_t j2 = 0; j2 < s.p; ++j2)
        for (std::size_t k2 = 0; k2 < s.n; ++k2)
          for (std::size_t l = 0; l < s.m; ++l)
            for (std::size_t l2 = 0; l2 < s.n; ++l2) {
              Element sum = 0;
              for (std::size_t i = 0; i < cons.rank(); ++i)
                sum = f.add(sum, f.mul(f.mul(cons.a(i, j, k), cons.b(i, j2, k2)), cons.c(i, l, l2)));
              const Element want = (j == j2 && k == l && k2 == l2) ? 1 : 0;
              if (sum != want) {
                return Validation{false, BrentViolation{j, k, j2, k2, l, l2, sum, want},
                                  "Brent equation (j=" + std::to_string(j) + ",k=" +
                                      std::to_string(k) + ",j'=" + std::to_string(j2) + ",k'=" +
                                      std::to_string(k2) + ",l=" + std::to_string(l) + ",l'=" +
                                      std::to_string(l2) + ") evaluates to " +
                                      std::to_string(sum)};
              }
            }
  return {};
}

/// Compares apply() with direct multiplication on random inputs. A wrong
/// construction survives one trial with probability at most pmn/q.
inline Validation validate_randomized(const BilinearConstruction& cons, Rng& rng,
                                      std::size_t trials = 4, std::size_t block = 2) {
  const BlockShape s = cons.shape();
  const Field& f = cons.field();
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix a = Matrix::random(f, s.p * block, s.m * block, rng);
    const Matrix b = Matrix::random(f, s.p * block, s.n * block, rng);
    const Matrix got = assemble(apply(cons, partition(a, s.p, s.m), partition(b, s.p, s.n)));
    if (got != transpose_multiply(f, a, b))
      return Validation{false, std::nullopt,
                        "randomized trial " + std::to_string(t) + " disagrees with A^T B"};
  }
  return {};
}

inline Validation validate(const BilinearConstruction& cons, ValidationMode mode, Rng& rng) {
  return mode == ValidationMode::kExact ? validate_exact(cons) : validate_randomized(cons, rng);
}

inline Validation validate(const BilinearConstruction& cons) { return validate_exact(cons); }

}  // namespace epc
