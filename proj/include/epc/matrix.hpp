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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epc/error.hpp"
#include "epc/field.hpp"

namespace epc {

/// Dense row-major matrix of field residues.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Element> values)
      : rows_(rows), cols_(cols), data_(std::move(values)) {
    require(data_.size() == rows_ * cols_, ErrorCode::kDimensionMismatch,
            "value count does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }

  static Matrix random(const Field& field, std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix out(rows, cols);
    for (auto& v : out.data_) v = field.random(rng);
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> values() noexcept { return data_; }
  std::span<const Element> values() const noexcept { return data_; }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

inline std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

/// acc += scale * x
inline void add_scaled(const Field& field, Matrix& acc, Element scale, const Matrix& x) {
  require(acc.same_shape(x), ErrorCode::kDimensionMismatch,
          "add_scaled " + shape_string(acc) + " vs " + shape_string(x));
  if (scale == 0) return;
  auto out = acc.values();
  auto in = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = field.add(out[i], field.mul(scale, in[i]));
}

inline Matrix add(const Field& field, const Matrix& a, const Matrix& b) {
  Matrix out = a;
  add_scaled(field, out, 1, b);
  return out;
}

inline Matrix scaled(const Field& field, Element scale, const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  add_scaled(field, out, scale, x);
  return out;
}

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

inline Matrix multiply(const Field& field, const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::kDimensionMismatch,
          "multiply " + shape_string(a) + " by " + shape_string(b));
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Element aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = field.add(out(i, j), field.mul(aik, b(k, j)));
    }
  }
  return out;
}

/// Returns a^T b without materializing the transpose.
inline Matrix transpose_multiply(const Field& field, const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch,
          "transpose_multiply " + shape_string(a) + " and " + shape_string(b));
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Element aki = a(k, i);
      if (aki == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = field.add(out(i, j), field.mul(aki, b(k, j)));
    }
  }
  return out;
}

/// A matrix cut into a grid of equally sized blocks, stored row-major.
struct BlockMatrix {
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::vector<Matrix> blocks;

  const Matrix& block(std::size_t r, std::size_t c) const { return blocks[r * grid_cols + c]; }
  Matrix& block(std::size_t r, std::size_t c) { return blocks[r * grid_cols + c]; }
};

inline BlockMatrix partition(const Matrix& x, std::size_t grid_rows, std::size_t grid_cols) {
  require(grid_rows > 0 && grid_cols > 0, ErrorCode::kInvalidArgument, "empty block grid");
  require(x.rows() % grid_rows == 0 && x.cols() % grid_cols == 0,
          ErrorCode::kIndivisibleDimensions,
          shape_string(x) + " is not divisible into a " + std::to_string(grid_rows) + "x" +
              std::to_string(grid_cols) + " grid");
  BlockMatrix out;
  out.grid_rows = grid_rows;
  out.grid_cols = grid_cols;
  out.block_rows = x.rows() / grid_rows;
  out.block_cols = x.cols() / grid_cols;
  out.blocks.reserve(grid_rows * grid_cols);
  for (std::size_t gr = 0; gr < grid_rows; ++gr) {
    for (std::size_t gc = 0; gc < grid_cols; ++gc) {
      Matrix blk(out.block_rows, out.block_cols);
      for (std::size_t r = 0; r < out.block_rows; ++r)
        for (std::size_t c = 0; c < out.block_cols; ++c)
          blk(r, c) = x(gr * out.block_rows + r, gc * out.block_cols + c);
      out.blocks.push_back(std::move(blk));
    }
  }
  return out;
}

inline Matrix assemble(const BlockMatrix& grid) {
  require(grid.blocks.size() == grid.grid_rows * grid.grid_cols, ErrorCode::kDimensionMismatch,
          "block count does not match grid");
  Matrix out(grid.grid_rows * grid.block_rows, grid.grid_cols * grid.block_cols);
  for (std::size_t gr = 0; gr < grid.grid_rows; ++gr) {
    for (std::size_t gc = 0; gc < grid.grid_cols; ++gc) {
      const Matrix& blk = grid.block(gr, gc);
      require(blk.rows() == grid.block_rows && blk.cols() == grid.block_cols,
              ErrorCode::kDimensionMismatch, "block has shape " + shape_string(blk));
      for (std::size_t r = 0; r < grid.block_rows; ++r)
        for (std::size_t c = 0; c < grid.block_cols; ++c)
          out(gr * grid.block_rows + r, gc * grid.block_cols + c) = blk(r, c);
    }
  }
  return out;
}

/// Zero-padded copy whose dimensions divide the requested grid, plus the
/// original shape so the padding can be stripped again.
struct PaddedMatrix {
  Matrix matrix;
  std::size_t original_rows = 0;
  std::size_t original_cols = 0;
};

inline PaddedMatrix pad_to(const Matrix& x, std::size_t grid_rows, std::size_t grid_cols) {
  require(grid_rows > 0 && grid_cols > 0, ErrorCode::kInvalidArgument, "empty block grid");
  auto round_up = [](std::size_t v, std::size_t g) { return (v + g - 1) / g * g; };
  PaddedMatrix out{Matrix(round_up(x.rows(), grid_rows), round_up(x.cols(), grid_cols)), x.rows(),
                   x.cols()};
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out.matrix(r, c) = x(r, c);
  return out;
}

inline Matrix crop(const Matrix& x, std::size_t rows, std::size_t cols) {
  require(rows <= x.rows() && cols <= x.cols(), ErrorCode::kDimensionMismatch,
          "crop larger than source");
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = x(r, c);
  return out;
}

}  // namespace epc
