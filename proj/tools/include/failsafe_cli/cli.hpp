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

#ifndef FAILSAFE_CLI__CLI_HPP_
#define FAILSAFE_CLI__CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "failsafe/scenario.hpp"

namespace failsafe::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAbort = 2;

/// Environment variable naming the default output root.
inline constexpr const char * kOutputRootEnv = "FAILSAFE_OUTPUT_ROOT";

enum class Suite { kSingle, kPaper };

struct ExportFormats
{
  bool trace{true};    // <run>/trace.csv
  bool plot{true};     // <run>/plot.csv and <run>/errors.csv
  bool metrics{true};  // metrics.csv and metrics.json
};

/// One-off overrides applied to the loaded config in single mode.
struct RunOverrides
{
  std::optional<BrakingStrategy> strategy;
  std::optional<double> f1;
  std::optional<double> f2;
  std::optional<bool> reconfigure;
};

struct RunManifest
{
  std::optional<std::filesystem::path> config_path;  // built-in defaults when unset
  std::filesystem::path output_dir;
  Suite suite{Suite::kSingle};
  ExportFormats formats{};
  RunOverrides overrides{};
};

/// Output root: explicit value, else $FAILSAFE_OUTPUT_ROOT, else "./out".
std::filesystem::path default_output_dir();

/// Runs the manifest and writes artifacts. Nothing is written when the config
/// fails validation. Returns one of the kExit* codes.
int run(const RunManifest & manifest, std::ostream & out, std::ostream & err);

/// Prints each diagnostic on its own line; returns kExitOk iff clean.
int validate(const std::filesystem::path & config_path, std::ostream & out, std::ostream & err);

/// Full command-line entry point.
int main(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace failsafe::cli

#endif  // FAILSAFE_CLI__CLI_HPP_
