// Copyright 2026 The failsafe-nmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "failsafe/config_io.hpp"

#ifndef FAILSAFE_SOURCE_DIR
#error "FAILSAFE_SOURCE_DIR must point at the repository root"
#endif

namespace failsafe
{
namespace
{

namespace fs = std::filesystem;

const fs::path kDefaultConfig = fs::path(FAILSAFE_SOURCE_DIR) / "configs" / "default.json";

TEST(ConfigIo, DefaultsRoundTrip)
{
  const ScenarioConfig c;
  EXPECT_EQ(parse_config(dump_config(c)), c);
}

TEST(ConfigIo, ModifiedConfigRoundTrips)
{
  ScenarioConfig c;
  c.name = "custom";
  c.strategy = BrakingStrategy::kBrakeOutOfLane;
  c.plant_fault = {0.5, 0.75};
  c.reconfigure = true;
  c.acc.h_dg = 1.5;
  c.ocp.horizon = 20;
  c.ocp.control_horizon = 10;
  c.ocp.weights.w_d_y = 0.1 + 0.2;  // not exactly representable in short decimal
  c.vehicle.mass = 2000.0;
  c.ocp.vehicle = c.vehicle;
  c.seed = 1234567890123ULL;
  EXPECT_EQ(parse_config(dump_config(c)), c);
}

TEST(ConfigIo, ShippedDefaultMatchesBuiltInDefaults)
{
  EXPECT_EQ(load_config(kDefaultConfig), ScenarioConfig{});
  EXPECT_TRUE(validate_config_file(kDefaultConfig).empty());
}

TEST(ConfigIo, MissingKeysKeepDefaults)
{
  const ScenarioConfig c = parse_config(R"({"scenario": {"strategy": "BOL"}})");
  ScenarioConfig expected;
  expected.strategy = BrakingStrategy::kBrakeOutOfLane;
  EXPECT_EQ(c, expected);
}

TEST(ConfigIo, PredictionModelFollowsVehicleSection)
{
  const ScenarioConfig c =
    parse_config(R"({"vehicle": {"mass": 2000.0}, "actuation": {"tau": 0.2}})");
  EXPECT_EQ(c.ocp.vehicle.mass, 2000.0);
  EXPECT_EQ(c.ocp.actuation_tau, 0.2);
}

TEST(ConfigIo, UnknownFieldIsReportedWithPath)
{
  try {
    parse_config(R"({"ocp": {"bounds": {"delta_maxx": 1.0}}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError & e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0], "ocp.bounds.delta_maxx: unknown field");
  }
}

TEST(ConfigIo, WrongTypeIsReported)
{
  try {
    parse_config(R"({"ocp": {"horizon": 2.5}, "acc": {"h_dg": "long"}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError & e) {
    ASSERT_EQ(e.diagnostics().size(), 2u);
    EXPECT_EQ(e.diagnostics()[0], "acc.h_dg: wrong type");
    EXPECT_EQ(e.diagnostics()[1], "ocp.horizon: wrong type");
  }
}

TEST(ConfigIo, BadStrategyIsReported)
{
  EXPECT_THROW(parse_config(R"({"scenario": {"strategy": "park"}})"), ConfigError);
}

TEST(ConfigIo, MalformedJsonIsReported)
{
  EXPECT_THROW(parse_config("{ not json"), ConfigError);
}

class TempFile
{
public:
  explicit TempFile(const std::string & text)
  : path_(fs::temp_directory_path() /
          ("failsafe_cfg_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".json"))
  {
    std::ofstream(path_) << text;
  }
  ~TempFile() { fs::remove(path_); }
  const fs::path & path() const { return path_; }

private:
  fs::path path_;
};

TEST(ValidateConfigFile, ZeroTimeGapNamesField)
{
  const TempFile f(R"({"acc": {"h_dg": 0.0}})");
  const auto d = validate_config_file(f.path());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rfind("acc.h_dg:", 0), 0u) << d[0];
}

TEST(ValidateConfigFile, ZeroHorizonGivesOneDiagnostic)
{
  const TempFile f(R"({"ocp": {"horizon": 0}})");
  const auto d = validate_config_file(f.path());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rfind("ocp.horizon:", 0), 0u) << d[0];
}

TEST(ValidateConfigFile, CombinesParseAndSemanticDiagnostics)
{
  const TempFile f(R"({"acc": {"h_dg": -1.0, "gain": 3}})");
  EXPECT_EQ(validate_config_file(f.path()).size(), 2u);
}

TEST(ValidateConfigFile, MissingFile)
{
  EXPECT_EQ(validate_config_file("/nonexistent/config.json").size(), 1u);
}

}  // namespace
}  // namespace failsafe
