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

// Matrix files.
//
// Text:   first line "q rows cols", then rows * cols integers in [0, q),
//         whitespace separated, row-major.
// Binary: magic "EPCM1", then little-endian u64 q, rows, cols and the
//         rows * cols values as little-endian u64.

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"

namespace epc {

enum class MatrixFormat { kText, kBinary };

inline constexpr std::string_view kBinaryMagic = "EPCM1";

/// A matrix together with the modulus it was stored under.
struct StoredMatrix {
  std::uint64_t modulus = 0;
  Matrix matrix;

  friend bool operator==(const StoredMatrix&, const StoredMatrix&) = default;
};

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

inline bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

inline void check_header(std::uint64_t q, std::uint64_t rows, std::uint64_t cols) {
  require(q >= 2, ErrorCode::kMalformedHeader, "modulus must be at least 2");
  require(rows > 0 && cols > 0, ErrorCode::kMalformedHeader, "matrix dimensions must be positive");
  require(rows <= (std::uint64_t{1} << 32) / cols, ErrorCode::kMalformedHeader,
          "matrix dimensions are implausibly large");
}

}  // namespace detail

inline void write_matrix_text(std::ostream& out, std::uint64_t modulus, const Matrix& m) {
  out << modulus << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
    out << '\n';
  }
}

inline StoredMatrix read_matrix_text(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kMalformedHeader, "empty input");
  std::istringstream header(line);
  std::uint64_t q = 0, rows = 0, cols = 0;
  std::string extra;
  require(static_cast<bool>(header >> q >> rows >> cols) && !(header >> extra),
          ErrorCode::kMalformedHeader, "first line must be 'q rows cols'");
  detail::check_header(q, rows, cols);
  StoredMatrix out{q, Matrix(rows, cols)};
  for (std::uint64_t i = 0; i < rows * cols; ++i) {
    std::string token;
    require(static_cast<bool>(in >> token), ErrorCode::kMalformedHeader,
            "expected " + std::to_string(rows * cols) + " values, found " + std::to_string(i));
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
      require(token[0] != '-' && token[0] != '+', ErrorCode::kValueOutOfRange,
              "value '" + token + "' is not in [0, q)");
      v = std::stoull(token, &used);
    } catch (const std::logic_error&) {
      raise(ErrorCode::kValueOutOfRange, "value '" + token + "' is not in [0, q)");
    }
    require(used == token.size(), ErrorCode::kValueOutOfRange, "value '" + token + "' is not an integer");
    require(v < q, ErrorCode::kValueOutOfRange,
            "value " + std::to_string(v) + " at index " + std::to_string(i) + " is not below " +
                std::to_string(q));
    out.matrix.values()[i] = v;
  }
  std::string token;
  require(!(in >> token), ErrorCode::kMalformedHeader, "trailing data after matrix values");
  return out;
}

inline void write_matrix_binary(std::ostream& out, std::uint64_t modulus, const Matrix& m) {
  out.write(kBinaryMagic.data(), static_cast<std::streamsize>(kBinaryMagic.size()));
  detail::put_u64(out, modulus);
  detail::put_u64(out, m.rows());
  detail::put_u64(out, m.cols());
  for (Element v : m.values()) detail::put_u64(out, v);
}

inline StoredMatrix read_matrix_binary(std::istream& in) {
  std::array<char, 5> magic{};
  require(static_cast<bool>(in.read(magic.data(), 5)) &&
              std::string_view(magic.data(), 5) == kBinaryMagic,
          ErrorCode::kMalformedHeader, "missing EPCM1 magic");
  std::uint64_t q = 0, rows = 0, cols = 0;
  require(detail::get_u64(in, q) && detail::get_u64(in, rows) && detail::get_u64(in, cols),
          ErrorCode::kMalformedHeader, "truncated header");
  detail::check_header(q, rows, cols);
  StoredMatrix out{q, Matrix(rows, cols)};
  for (std::uint64_t i = 0; i < rows * cols; ++i) {
    std::uint64_t v = 0;
    require(detail::get_u64(in, v), ErrorCode::kMalformedHeader, "truncated values");
    require(v < q, ErrorCode::kValueOutOfRange,
            "value " + std::to_string(v) + " at index " + std::to_string(i) + " is not below " +
                std::to_string(q));
    out.matrix.values()[i] = v;
  }
  require(in.peek() == std::char_traits<char>::eof(), ErrorCode::kMalformedHeader,
          "trailing data after matrix values");
  return out;
}

/// Sniffs the magic to pick the format.
inline StoredMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open " + path);
  std::array<char, 5> head{};
  in.read(head.data(), 5);
  const bool binary = in.gcount() == 5 && std::string_view(head.data(), 5) == kBinaryMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_matrix_binary(in) : read_matrix_text(in);
}

inline void write_matrix(const std::string& path, std::uint64_t modulus, const Matrix& m,
                         MatrixFormat format = MatrixFormat::kText) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIoError, "cannot write " + path);
  if (format == MatrixFormat::kBinary)
    write_matrix_binary(out, modulus, m);
  else
    write_matrix_text(out, modulus, m);
  require(static_cast<bool>(out), ErrorCode::kIoError, "write to " + path + " failed");
}

/// Reads a matrix and checks it was stored under the given field.
inline Matrix load_matrix(const Field& f, const std::string& path) {
  StoredMatrix m = read_matrix(path);
  require(m.modulus == f.modulus(), ErrorCode::kValueOutOfRange,
          path + " is over modulus " + std::to_string(m.modulus) + ", expected " +
              std::to_string(f.modulus()));
  return std::move(m.matrix);
}

}  // namespace epc
