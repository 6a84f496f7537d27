// Copyright 2026 The Omniforce Authors
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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omniforce/config.hpp"
#include "omniforce/errors.hpp"
#include "omniforce/harness.hpp"
#include "omniforce/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUnstable = 3;

std::string default_out() {
  const char* env = std::getenv("OMNIFORCE_OUT");
  return env && *env ? env : "out";
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const omniforce::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const omniforce::InstabilityError& e) {
    std::cerr << "simulation unstable: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Omniwheel base force estimation and collision simulator"};
  app.require_subcommand(1);

  std::string config, out = default_out(), trace, columns, measured;
  std::vector<std::string> patterns;
  std::optional<std::uint64_t> seed;
  int parallel = 1;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config, "Scenario YAML")->required();
  run->add_option("--out", out, "Output directory (env OMNIFORCE_OUT)");
  run->add_option("--seed", seed, "Override the noise seed");

  auto* batch = app.add_subcommand("batch", "Run many scenarios");
  batch->add_option("--config", patterns, "Scenario files or glob patterns")
      ->required();
  batch->add_option("--out", out, "Output directory (env OMNIFORCE_OUT)");
  batch->add_option("--parallel", parallel, "Worker threads")
      ->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed, "Override the noise seed");

  auto* calibrate = app.add_subcommand("calibrate", "Fit roller friction");
  calibrate->add_option("--config", config, "CALIBRATION scenario")->required();
  calibrate->add_option("--measured", measured,
                        "Torque CSV with tau_s0..2 columns");
  calibrate->add_option("--out", out, "Output directory (env OMNIFORCE_OUT)");
  calibrate->add_option("--seed", seed, "Override the noise seed");

  auto* replay = app.add_subcommand("replay", "Recompute a report from a trace");
  replay->add_option("--trace", trace, "trace.csv of a previous run")
      ->required();
  replay->add_option("--config", config,
                     "Scenario YAML (default: config.yaml next to the trace)");
  replay->add_option("--columns", columns,
                     "Comma separated columns to print instead of the report");

  auto* presets = app.add_subcommand("presets", "Write the experiment suite");
  presets->add_option("--out", out, "Target directory");

  CLI11_PARSE(app, argc, argv);

  auto load = [&] {
    omniforce::ScenarioConfig c = omniforce::load_config(config);
    if (seed) c.world.sim.seed = *seed;
    return c;
  };

  if (*run) {
    return guarded([&] {
      const omniforce::Report r = omniforce::run_scenario(load(), out);
      omniforce::write_report_text(std::cout, r);
      return kExitOk;
    });
  }
  if (*batch) {
    return guarded([&] {
      std::vector<std::string> paths;
      for (const auto& p : patterns) {
        for (auto& f : omniforce::expand_glob(p)) paths.push_back(std::move(f));
      }
      const auto entries = omniforce::run_batch(paths, out, parallel, seed);
      omniforce::write_summary_text(std::cout, entries);
      for (const auto& e : entries) {
        if (!e.error.empty()) return kExitFailure;
      }
      return kExitOk;
    });
  }
  if (*calibrate) {
    return guarded([&] {
      const omniforce::Report r =
          omniforce::calibrate_scenario(load(), out, measured);
      omniforce::write_report_text(std::cout, r);
      return kExitOk;
    });
  }
  if (*replay) {
    return guarded([&] {
      if (!columns.empty()) {
        const omniforce::SimTrace t = omniforce::read_trace(trace);
        std::vector<std::string> names;
        std::stringstream ss(columns);
        for (std::string n; std::getline(ss, n, ',');) names.push_back(n);
        std::vector<std::vector<std::string>> data;
        for (const auto& n : names) {
          data.push_back(omniforce::trace_column(t, n));
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
          std::cout << (i ? "," : "") << names[i];
        }
        std::cout << "\n";
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
          for (std::size_t i = 0; i < names.size(); ++i) {
            std::cout << (i ? "," : "") << data[i][k];
          }
          std::cout << "\n";
        }
        return kExitOk;
      }
      if (config.empty()) {
        config = (std::filesystem::path(trace).parent_path() / "config.yaml")
                     .string();
      }
      const omniforce::Report r =
          omniforce::replay_trace(omniforce::load_config(config), trace);
      omniforce::write_report_text(std::cout, r);
      return kExitOk;
    });
  }
  if (*presets) {
    return guarded([&] {
      for (const auto& p : omniforce::write_presets(out)) std::cout << p << "\n";
      return kExitOk;
    });
  }
  return kExitFailure;
}
