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

#ifndef FAILSAFE__CONFIG_IO_HPP_
#define FAILSAFE__CONFIG_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "failsafe/scenario.hpp"

namespace failsafe
{

/// Raised when a config document cannot be parsed; carries every diagnostic.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string> & diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

/// JSON document with sections scenario, vehicle, actuation, acc, lane, ocp.
/// Missing keys keep their defaults; unknown keys and type errors are reported.
std::string dump_config(const ScenarioConfig & config);
ScenarioConfig parse_config(const std::string & text);
ScenarioConfig load_config(const std::filesystem::path & path);

/// Parse and semantic diagnostics of a config file (empty when clean).
std::vector<std::string> validate_config_file(const std::filesystem::path & path);

}  // namespace failsafe

#endif  // FAILSAFE__CONFIG_IO_HPP_
