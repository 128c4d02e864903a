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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"

namespace epc {

/// Dense univariate polynomial, lowest degree first, with trailing zeros
/// stripped. The zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Element> coefficients) : coeffs_(std::move(coefficients)) {
    normalize();
  }

  const std::vector<Element>& coefficients() const noexcept { return coeffs_; }
  std::ptrdiff_t degree() const noexcept { return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  Element coefficient(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Element> coeffs_;
};

inline Element eval_poly(const Field& field, const Polynomial& poly, Element at) {
  Element acc = 0;
  const auto& c = poly.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = field.add(field.mul(acc, at), *it);
  return acc;
}

inline Polynomial multiply(const Field& field, const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Element> out(a.coefficients().size() + b.coefficients().size() - 1, 0);
  for (std::size_t i = 0; i < a.coefficients().size(); ++i)
    for (std::size_t j = 0; j < b.coefficients().size(); ++j)
      out[i + j] = field.add(out[i + j], field.mul(a.coefficients()[i], b.coefficients()[j]));
  return Polynomial(std::move(out));
}

namespace detail {

// Montgomery batch inversion; every input must be nonzero.
inline std::vector<Element> batch_inverse(const Field& field, std::span<const Element> values) {
  std::vector<Element> prefix(values.size());
  Element acc = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    acc = field.mul(acc, values[i]);
  }
  Element inv = field.inv(acc);
  std::vector<Element> out(values.size());
  for (std::size_t i = values.size(); i-- > 0;) {
    out[i] = field.mul(inv, prefix[i]);
    inv = field.mul(inv, values[i]);
  }
  return out;
}

inline void require_distinct(std::span<const Element> nodes, ErrorCode code, const char* what) {
  std::vector<Element> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  require(dup == sorted.end(), code, std::string(what) + " repeats value " +
                                         (dup == sorted.end() ? "" : std::to_string(*dup)));
}

}  // namespace detail

/// l_j(at) = prod_{k != j} (at - x_k) / (x_j - x_k), evaluated directly.
inline Element lagrange_coefficient(const Field& field, std::span<const Element> nodes,
                                    std::size_t j, Element at) {
  require(j < nodes.size(), ErrorCode::kInvalidArgument, "basis index out of range");
  Element num = 1;
  Element den = 1;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == j) continue;
    num = field.mul(num, field.sub(at, nodes[k]));
    den = field.mul(den, field.sub(nodes[j], nodes[k]));
  }
  return field.div(num, den);
}

/// Lagrange basis over a fixed node set. Barycentric weights are computed
/// once so evaluating every basis polynomial at a point costs O(K).
class LagrangeBasis {
 public:
  LagrangeBasis(const Field& field, std::vector<Element> nodes)
      : field_(field), nodes_(std::move(nodes)) {
    detail::require_distinct(nodes_, ErrorCode::kDuplicateNode, "interpolation node set");
    std::vector<Element> products(nodes_.size(), 1);
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (k != j) products[j] = field_.mul(products[j], field_.sub(nodes_[j], nodes_[k]));
    weights_ = detail::batch_inverse(field_, products);
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Element>& nodes() const noexcept { return nodes_; }

  /// All basis values l_0(at) .. l_{K-1}(at).
  std::vector<Element> at(Element x) const {
    std::vector<Element> out(nodes_.size(), 0);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (nodes_[j] == x) {
        out[j] = 1;
        return out;
      }
    }
    std::vector<Element> diffs(nodes_.size());
    Element full = 1;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      diffs[j] = field_.sub(x, nodes_[j]);
      full = field_.mul(full, diffs[j]);
    }
    const auto inv_diffs = detail::batch_inverse(field_, diffs);
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      out[j] = field_.mul(full, field_.mul(weights_[j], inv_diffs[j]));
    return out;
  }

  /// Basis polynomials in coefficient form, each of degree K-1.
  std::vector<Polynomial> polynomials() const {
    const std::size_t k = nodes_.size();
    // master(x) = prod (x - x_j), degree k.
    std::vector<Element> master{1};
    for (Element node : nodes_) {
      std::vector<Element> next(master.size() + 1, 0);
      for (std::size_t i = 0; i < master.size(); ++i) {
        next[i + 1] = field_.add(next[i + 1], master[i]);
        next[i] = field_.sub(next[i], field_.mul(node, master[i]));
      }
      master = std::move(next);
    }
    std::vector<Polynomial> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      // Synthetic division of master by (x - x_j).
      std::vector<Element> quotient(k, 0);
      Element carry = 0;
      for (std::size_t i = k; i-- > 0;) {
        carry = field_.add(master[i + 1], field_.mul(carry, nodes_[j]));
        quotient[i] = field_.mul(carry, weights_[j]);
      }
      out.emplace_back(std::move(quotient));
    }
    return out;
  }

 private:
  Field field_;
  std::vector<Element> nodes_;
  std::vector<Element> weights_;
};

/// Unique polynomial of degree < K through (xs[i], ys[i]).
inline Polynomial lagrange_interpolate(const Field& field, std::span<const Element> xs,
                                       std::span<const Element> ys) {
  require(xs.size() == ys.size(), ErrorCode::kDimensionMismatch, "abscissa/value count differ");
  if (xs.empty()) return {};
  LagrangeBasis basis(field, std::vector<Element>(xs.begin(), xs.end()));
  std::vector<Element> out(xs.size(), 0);
  const auto polys = basis.polynomials();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto& c = polys[j].coefficients();
    for (std::size_t e = 0; e < c.size(); ++e) out[e] = field.add(out[e], field.mul(ys[j], c[e]));
  }
  return Polynomial(std::move(out));
}

/// Matrix-valued polynomial: coefficient matrices, lowest degree first.
using MatrixPolynomial = std::vector<Matrix>;

/// Entrywise interpolation of matrix values; the scalar basis is shared by
/// all entries. Returns exactly K coefficient matrices.
inline MatrixPolynomial lagrange_interpolate(const Field& field, std::span<const Element> xs,
                                             std::span<const Matrix> ys) {
  require(xs.size() == ys.size(), ErrorCode::kDimensionMismatch, "abscissa/value count differ");
  if (xs.empty()) return {};
  LagrangeBasis basis(field, std::vector<Element>(xs.begin(), xs.end()));
  const auto polys = basis.polynomials();
  MatrixPolynomial out(xs.size(), Matrix(ys[0].rows(), ys[0].cols()));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto& c = polys[j].coefficients();
    for (std::size_t e = 0; e < c.size(); ++e) add_scaled(field, out[e], c[e], ys[j]);
  }
  return out;
}

inline Matrix eval_matrix_poly(const Field& field, const MatrixPolynomial& poly, Element at) {
  require(!poly.empty(), ErrorCode::kInvalidArgument, "empty matrix polynomial");
  Matrix acc(poly[0].rows(), poly[0].cols());
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    acc = scaled(field, at, acc);
    add_scaled(field, acc, 1, *it);
  }
  return acc;
}

/// Evaluates the interpolant of (points, values) at each target without
/// forming coefficients: value(t) = sum_i values[i] * l_i(t).
inline std::vector<Matrix> interpolate_at(const Field& field, std::span<const Element> points,
                                          std::span<const Matrix> values,
                                          std::span<const Element> targets) {
  require(points.size() == values.size(), ErrorCode::kDimensionMismatch,
          "point/value count differ");
  require(!points.empty(), ErrorCode::kNotEnoughResults, "no values to interpolate");
  LagrangeBasis basis(field, std::vector<Element>(points.begin(), points.end()));
  std::vector<Matrix> out;
  out.reserve(targets.size());
  for (Element t : targets) {
    const auto coeffs = basis.at(t);
    Matrix acc(values[0].rows(), values[0].cols());
    for (std::size_t i = 0; i < values.size(); ++i) add_scaled(field, acc, coeffs[i], values[i]);
    out.push_back(std::move(acc));
  }
  return out;
}

/// sum_j values[j] * l_j(at) over the given nodes.
inline Matrix lagrange_combine(const Field& field, const LagrangeBasis& basis,
                               std::span<const Matrix> values, Element at) {
  require(values.size() == basis.size(), ErrorCode::kDimensionMismatch,
          "value count does not match basis size");
  const auto coeffs = basis.at(at);
  Matrix acc(values[0].rows(), values[0].cols());
  for (std::size_t j = 0; j < values.size(); ++j) add_scaled(field, acc, coeffs[j], values[j]);
  return acc;
}

}  // namespace epc
