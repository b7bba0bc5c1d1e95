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

#include "failsafe_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "failsafe/config_io.hpp"
#include "failsafe/errors.hpp"
#include "failsafe/metrics.hpp"
#include "failsafe/trace_io.hpp"

namespace failsafe::cli
{
namespace
{

namespace fs = std::filesystem;

template <typename Writer>
void write_file(const fs::path & path, Writer && writer)
{
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  writer(os);
}

std::vector<ScenarioConfig> expand(const ScenarioConfig & base, const RunManifest & m)
{
  if (m.suite == Suite::kPaper) {
    return paper_suite(base);
  }
  ScenarioConfig c = base;
  const auto & o = m.overrides;
  if (o.strategy) {
    c.strategy = *o.strategy;
  }
  if (o.f1) {
    c.plant_fault.f1 = *o.f1;
  }
  if (o.f2) {
    c.plant_fault.f2 = *o.f2;
  }
  if (o.reconfigure) {
    c.reconfigure = *o.reconfigure;
  }
  return {c};
}

std::string baseline_key(const ScenarioConfig & c) { return dump_config(c); }

}  // namespace

fs::path default_output_dir()
{
  if (const char * env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

int run(const RunManifest & m, std::ostream & out, std::ostream & err)
{
  ScenarioConfig base;
  if (m.config_path) {
    try {
      base = load_config(*m.config_path);
    } catch (const ConfigError & e) {
      for (const auto & d : e.diagnostics()) {
        err << "error: " << d << '\n';
      }
      return kExitValidation;
    }
  }

  const std::vector<ScenarioConfig> runs = expand(base, m);
  bool clean = true;
  for (const auto & c : runs) {
    for (const auto & d : validate_scenario(c, true)) {
      err << "error: " << c.name << ": " << d << '\n';
      clean = false;
    }
  }
  if (!clean) {
    return kExitValidation;
  }

  // Baselines are run once and shared; suite members double as baselines.
  std::map<std::string, ScenarioConfig> jobs;
  for (const auto & c : runs) {
    jobs.emplace(baseline_key(c), c);
  }
  if (m.formats.metrics || m.formats.plot) {
    for (const auto & c : runs) {
      const ScenarioConfig b = baseline_of(c);
      jobs.emplace(baseline_key(b), b);
    }
  }

  std::map<std::string, std::future<SimTrace>> futures;
  for (const auto & [key, cfg] : jobs) {
    futures.emplace(key, std::async(std::launch::async, [c = cfg] { return run_scenario(c); }));
  }
  std::map<std::string, SimTrace> traces;
  try {
    for (auto & [key, f] : futures) {
      traces.emplace(key, f.get());
    }
  } catch (const SimulationAbort & e) {
    for (auto & [key, f] : futures) {
      if (f.valid()) {
        f.wait();
      }
    }
    err << "error: simulation aborted: " << e.what() << '\n';
    return kExitAbort;
  }

  try {
    fs::create_directories(m.output_dir);
    std::vector<NamedReport> reports;
    for (const auto & c : runs) {
      const SimTrace & trace = traces.at(baseline_key(c));
      const fs::path dir = m.output_dir / c.name;
      fs::create_directories(dir);
      if (m.formats.trace) {
        write_file(dir / "trace.csv", [&](std::ostream & os) { write_trace_csv(os, trace); });
      }
      const auto base_it = traces.find(baseline_key(baseline_of(c)));
      const SimTrace * baseline = base_it == traces.end() ? nullptr : &base_it->second;
      if (m.formats.plot) {
        write_file(dir / "plot.csv", [&](std::ostream & os) { write_plot_csv(os, trace); });
        if (baseline != nullptr) {
          const ErrorSeries e = error_metrics(trace, *baseline);
          write_file(dir / "errors.csv", [&](std::ostream & os) { write_error_csv(os, e); });
        }
      }
      reports.push_back({c, compute_metrics(trace, baseline), trace.t_a, trace.t_b});
      out << c.name << ": " << trace.steps.size() << " steps written to " << dir.string() << '\n';
    }
    if (m.formats.metrics) {
      write_file(m.output_dir / "metrics.csv", [&](std::ostream & os) {
        write_metrics_csv(os, reports);
      });
      write_file(m.output_dir / "metrics.json", [&](std::ostream & os) {
        write_metrics_json(os, reports);
      });
      write_metrics_csv(out, reports);
    }
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitAbort;
  }
  return kExitOk;
}

int validate(const fs::path & config_path, std::ostream & out, std::ostream & err)
{
  const auto diagnostics = validate_config_file(config_path);
  for (const auto & d : diagnostics) {
    err << d << '\n';
  }
  if (diagnostics.empty()) {
    out << config_path.string() << ": ok\n";
    return kExitOk;
  }
  return kExitValidation;
}

int main(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Fail-safe NMPC lane-change and stop simulator"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::string config_path;
  std::string output_dir;
  std::string suite = "single";
  std::string strategy;
  std::optional<double> f1;
  std::optional<double> f2;
  bool reconfigure = false;
  bool no_reconfigure = false;
  std::vector<std::string> formats{"trace", "plot", "metrics"};

  auto * run_cmd = app.add_subcommand("run", "Simulate one scenario or the six-run suite");
  run_cmd->add_option("-c,--config", config_path, "Scenario config (JSON)")
    ->check(CLI::ExistingFile);
  run_cmd->add_option(
    "-o,--out", output_dir,
    std::string("Output directory (default: $") + kOutputRootEnv + " or ./out)");
  run_cmd->add_option("-s,--suite", suite, "Experiment set")
    ->check(CLI::IsMember({"single", "paper-suite"}));
  run_cmd->add_option("--strategy", strategy, "Braking strategy override")
    ->check(CLI::IsMember({"BIL", "BOL"}));
  run_cmd->add_option("--f1", f1, "Steering-effectiveness fault override");
  run_cmd->add_option("--f2", f2, "Rear cornering-stiffness fault override");
  auto * reconf = run_cmd->add_flag("--reconfigure", reconfigure, "Reconfigure the controller");
  run_cmd->add_flag("--no-reconfigure", no_reconfigure, "Do not reconfigure")->excludes(reconf);
  run_cmd->add_option("--formats", formats, "Artifacts to write")
    ->check(CLI::IsMember({"trace", "plot", "metrics"}))
    ->delimiter(',');

  std::string validate_path;
  auto * validate_cmd = app.add_subcommand("validate", "Check a config file");
  validate_cmd->add_option("config", validate_path, "Scenario config (JSON)")->required();

  std::string dump_path;
  auto * dump_cmd = app.add_subcommand("dump-config", "Print the default config");
  dump_cmd->add_option("-o,--out", dump_path, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (*validate_cmd) {
    return validate(validate_path, out, err);
  }
  if (*dump_cmd) {
    const std::string text = dump_config(ScenarioConfig{});
    if (dump_path.empty()) {
      out << text;
    } else {
      std::ofstream(dump_path) << text;
    }
    return kExitOk;
  }

  if (!config_path.empty()) {
    manifest.config_path = config_path;
  }
  manifest.output_dir = output_dir.empty() ? default_output_dir() : fs::path(output_dir);
  manifest.suite = suite == "paper-suite" ? Suite::kPaper : Suite::kSingle;
  manifest.formats = ExportFormats{false, false, false};
  for (const auto & f : formats) {
    manifest.formats.trace |= f == "trace";
    manifest.formats.plot |= f == "plot";
    manifest.formats.metrics |= f == "metrics";
  }
  if (!strategy.empty()) {
    manifest.overrides.strategy =
      strategy == "BOL" ? BrakingStrategy::kBrakeOutOfLane : BrakingStrategy::kBrakeInLane;
  }
  manifest.overrides.f1 = f1;
  manifest.overrides.f2 = f2;
  if (reconfigure) {
    manifest.overrides.reconfigure = true;
  } else if (no_reconfigure) {
    manifest.overrides.reconfigure = false;
  }
  return run(manifest, out, err);
}

}  // namespace failsafe::cli
