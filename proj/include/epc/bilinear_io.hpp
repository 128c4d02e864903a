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

// JSON form of a construction:
//   {"p":2,"m":2,"n":2,"R":7,"a":[[[..]]],"b":[[[..]]],"c":[[[..]]]}
// Tensors are nested R x p x m, R x p x n and R x m x n integer arrays.
// Integers are modulus-free; negatives are allowed and reduced mod q at load.

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epc/bilinear.hpp"

namespace epc {

namespace detail {

// Residues above q/2 are written as negatives so {0, 1, q-1} prints as {0, 1, -1}.
inline std::int64_t centered(const Field& f, Element v) {
  if (v > f.modulus() / 2) return -static_cast<std::int64_t>(f.modulus() - v);
  return static_cast<std::int64_t>(v);
}

inline std::vector<Element> read_tensor(const Field& f, const nlohmann::json& j, const char* name,
                                        std::size_t d0, std::size_t d1, std::size_t d2) {
  std::vector<Element> out;
  out.reserve(d0 * d1 * d2);
  auto bad = [&] {
    raise(ErrorCode::kInvalidConstruction, std::string("tensor '") + name + "' must be " +
                                               std::to_string(d0) + "x" + std::to_string(d1) +
                                               "x" + std::to_string(d2));
  };
  if (!j.contains(name) || !j[name].is_array() || j[name].size() != d0) bad();
  for (const auto& plane : j[name]) {
    if (!plane.is_array() || plane.size() != d1) bad();
    for (const auto& row : plane) {
      if (!row.is_array() || row.size() != d2) bad();
      for (const auto& v : row) {
        if (!v.is_number_integer()) bad();
        if (v.is_number_unsigned())
          out.push_back(f.reduce(v.get<std::uint64_t>()));
        else
          out.push_back(f.from_signed(v.get<std::int64_t>()));
      }
    }
  }
  return out;
}

}  // namespace detail

inline nlohmann::json construction_to_json(const BilinearConstruction& cons) {
  const BlockShape s = cons.shape();
  const Field& f = cons.field();
  nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array(),
                 c = nlohmann::json::array();
  for (std::size_t i = 0; i < cons.rank(); ++i) {
    nlohmann::json ap = nlohmann::json::array(), bp = nlohmann::json::array(),
                   cp = nlohmann::json::array();
    for (std::size_t j = 0; j < s.p; ++j) {
      nlohmann::json ar = nlohmann::json::array(), br = nlohmann::json::array();
      for (std::size_t k = 0; k < s.m; ++k) ar.push_back(detail::centered(f, cons.a(i, j, k)));
      for (std::size_t k = 0; k < s.n; ++k) br.push_back(detail::centered(f, cons.b(i, j, k)));
      ap.push_back(std::move(ar));
      bp.push_back(std::move(br));
    }
    for (std::size_t k = 0; k < s.m; ++k) {
      nlohmann::json cr = nlohmann::json::array();
      for (std::size_t kp = 0; kp < s.n; ++kp) cr.push_back(detail::centered(f, cons.c(i, k, kp)));
      cp.push_back(std::move(cr));
    }
    a.push_back(std::move(ap));
    b.push_back(std::move(bp));
    c.push_back(std::move(cp));
  }
  return {{"p", s.p}, {"m", s.m}, {"n", s.n}, {"R", cons.rank()}, {"a", a}, {"b", b}, {"c", c}};
}

/// Parses and exactly validates a construction; invalid tensors are rejected.
inline BilinearConstruction construction_from_json(const Field& field, const nlohmann::json& j) {
  for (const char* key : {"p", "m", "n", "R"}) {
    require(j.contains(key) && j[key].is_number_integer() && j[key].get<std::int64_t>() > 0,
            ErrorCode::kInvalidConstruction,
            std::string("field '") + key + "' must be a positive integer");
  }
  const BlockShape s{j["p"].get<std::size_t>(), j["m"].get<std::size_t>(),
                     j["n"].get<std::size_t>()};
  const std::size_t r = j["R"].get<std::size_t>();
  BilinearConstruction cons(field, s, r, detail::read_tensor(field, j, "a", r, s.p, s.m),
                            detail::read_tensor(field, j, "b", r, s.p, s.n),
                            detail::read_tensor(field, j, "c", r, s.m, s.n));
  const Validation v = validate_exact(cons);
  require(v.ok, ErrorCode::kInvalidConstruction, "construction fails validation: " + v.detail);
  return cons;
}

inline BilinearConstruction load_construction(const Field& field, const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorCode::kInvalidConstruction, path + ": " + e.what());
  }
  return construction_from_json(field, j);
}

inline void save_construction(const BilinearConstruction& cons, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIoError, "cannot write " + path);
  out << construction_to_json(cons).dump() << "\n";
}

}  // namespace epc
