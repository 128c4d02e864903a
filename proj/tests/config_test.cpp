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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "epc/config.hpp"

namespace epc {
namespace {

const std::filesystem::path kConfigs = std::filesystem::path(EPC_SOURCE_DIR) / "configs";

nlohmann::json minimal() {
  return nlohmann::json::parse(R"({
    "mode": "improved", "p": 2, "m": 2, "n": 2, "N": 14,
    "construction": "strassen",
    "inputs": {"random": {"s": 4, "t": 4, "r": 4}}
  })");
}

std::string config_error(const nlohmann::json& j) {
  try {
    (void)make_scheme(parse_config(j));
  } catch (const Error& e) {
    return std::string(error_code_name(e.code())) + "|" + e.what();
  }
  ADD_FAILURE() << "accepted " << j.dump();
  return {};
}

TEST(ConfigTest, MinimalParses) {
  const ScenarioConfig c = parse_config(minimal());
  EXPECT_EQ(c.descriptor.mode, Mode::kImproved);
  EXPECT_EQ(c.descriptor.workers, 14u);
  EXPECT_EQ(c.modulus, kMersenne61);
  ASSERT_TRUE(c.random_inputs.has_value());
  EXPECT_EQ(make_scheme(c).threshold(), 13u);
}

TEST(ConfigTest, ErrorsNameTheField) {
  auto j = minimal();
  j["N"] = 12;
  const std::string below = config_error(j);
  EXPECT_NE(below.find("threshold 13"), std::string::npos) << below;

  j = minimal();
  j["colour"] = "red";
  EXPECT_NE(config_error(j).find("'colour'"), std::string::npos);

  j = minimal();
  j["mode"] = "private";
  j["M"] = 2;
  const std::string no_d = config_error(j);
  EXPECT_NE(no_d.find("InvalidConfig"), std::string::npos);
  EXPECT_NE(no_d.find("'D'"), std::string::npos) << no_d;

  j["D"] = 3;
  EXPECT_NE(config_error(j).find("'D'"), std::string::npos);
  j["D"] = 0;
  EXPECT_NE(config_error(j).find("'D'"), std::string::npos);

  j = minimal();
  j["D"] = 1;
  EXPECT_NE(config_error(j).find("'D'"), std::string::npos);

  j = minimal();
  j["L"] = 2;
  EXPECT_NE(config_error(j).find("'L'"), std::string::npos);

  j = minimal();
  j.erase("construction");
  EXPECT_NE(config_error(j).find("'construction'"), std::string::npos);

  j = minimal();
  j["mode"] = "basic";
  EXPECT_NE(config_error(j).find("'construction'"), std::string::npos);

  j = minimal();
  j["construction"] = "winograd";
  EXPECT_NE(config_error(j).find("winograd"), std::string::npos);

  j = minimal();
  j["inputs"] = nlohmann::json::object();
  EXPECT_NE(config_error(j).find("'inputs'"), std::string::npos);

  j = minimal();
  j["worker_model"] = {{"latency", {{"gamma", 1}}}};
  EXPECT_NE(config_error(j).find("'worker_model.latency'"), std::string::npos);

  j = minimal();
  j["N"] = -3;
  EXPECT_NE(config_error(j).find("'N'"), std::string::npos);
}

TEST(ConfigTest, ConstructionSpecs) {
  const Field f;
  EXPECT_EQ(build_construction(f, "naive", {2, 3, 1}).rank(), 6u);
  EXPECT_EQ(build_construction(f, "strassen", {2, 2, 2}).rank(), 7u);
  EXPECT_EQ(build_construction(f, {{"strassen_pow", 2}}, {}).rank(), 49u);
  EXPECT_EQ(build_construction(f, {{"naive", {1, 2, 3}}}, {}).shape(), (BlockShape{1, 2, 3}));
  const auto composed =
      build_construction(f, nlohmann::json::parse(R"({"compose": ["strassen", {"naive": [2,2,2]}]})"), {});
  EXPECT_EQ(composed.rank(), 56u);
  EXPECT_EQ(composed.shape(), (BlockShape{4, 4, 4}));
  const auto file =
      build_construction(f, {{"file", "strassen_222.json"}}, {}, kConfigs);
  EXPECT_EQ(file, strassen_222(f));
}

TEST(ConfigTest, ConstructionShapeMustMatch) {
  auto j = minimal();
  j["construction"] = {{"naive", {2, 2, 3}}};
  const std::string e = config_error(j);
  EXPECT_NE(e.find("InvalidConfig|"), std::string::npos) << e;
  EXPECT_NE(e.find("'construction'"), std::string::npos) << e;
}

TEST(ConfigTest, MalformedJsonIsAConfigError) {
  const auto path = std::filesystem::path(::testing::TempDir()) / "broken.json";
  std::ofstream(path) << "{\n  \"mode\": \"improved\",\n  \"N\": 14,,\n}\n";
  try {
    (void)load_config(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, BundledConfigsRun) {
  for (const char* name : {"improved_strassen.json", "improved_straggler.json", "basic.json",
                           "fully_secure.json", "private_secure.json", "fully_private_q13.json",
                           "batch_fully_secure.json", "from_files.json"}) {
    const RunReport r = run_scenario(load_config((kConfigs / name).string()));
    EXPECT_TRUE(r.complete) << name;
    EXPECT_TRUE(r.decoded_ok) << name;
    EXPECT_EQ(r.verification, Verification::kVerified) << name;
  }
  const RunReport two = run_scenario(load_config((kConfigs / "two_stragglers.json").string()));
  EXPECT_FALSE(two.complete);
}

TEST(ConfigTest, FileInputsAreUsed) {
  const ScenarioConfig c = load_config((kConfigs / "from_files.json").string());
  const Scheme s = make_scheme(c);
  const SchemeInputs in = make_inputs(c, s);
  EXPECT_EQ(in.a[0][0], read_matrix((kConfigs / "a.txt").string()).matrix);
  EXPECT_EQ(in.b[0][0], read_matrix((kConfigs / "b.epcm").string()).matrix);
}

TEST(ConfigTest, RunsAreReproducible) {
  const ScenarioConfig c = load_config((kConfigs / "improved_strassen.json").string());
  EXPECT_EQ(run_scenario(c).to_json().dump(), run_scenario(c).to_json().dump());
}

}  // namespace
}  // namespace epc
