// Copyright 2026 The qpnn Authors
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

// Experiment runner: qpnn_run CONFIG [--seed S] [--workers W] [--out-dir DIR]
//                    qpnn_run --list-tasks

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpnn/experiment.hpp"

namespace {

int fail(const std::exception& e, const std::optional<std::filesystem::path>& dir) {
  const qpnn::Json record = qpnn::error_record(e);
  std::cerr << record.dump() << '\n';
  if (dir) {
    try {
      std::filesystem::create_directories(*dir);
      qpnn::write_text(*dir / "error.json", record.dump(2) + "\n");
    } catch (const std::exception&) {
      // the record on stderr is enough
    }
  }
  return record["exit_code"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum photonic neural network experiments"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  bool list_tasks = false;
  app.add_option("config", config_path, "experiment config (JSON)");
  app.add_option("--seed", seed, "override the root seed");
  app.add_option("--workers", workers, "worker threads; 0 uses every core")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", out_dir, "override the output directory");
  app.add_flag("--list-tasks", list_tasks, "print the task catalog as JSON and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(qpnn::ExitCode::kInvalidConfig);
  }

  if (list_tasks) {
    std::cout << qpnn::catalog_json().dump(2) << '\n';
    return 0;
  }
  if (config_path.empty()) {
    return fail(qpnn::ConfigError("a config path is required"), std::nullopt);
  }

  std::optional<std::filesystem::path> dir;
  if (out_dir) dir = *out_dir;
  qpnn::ExperimentConfig config;
  try {
    config = qpnn::ExperimentConfig::from_json(qpnn::read_json(config_path));
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (out_dir) config.output_dir = *out_dir;
    dir = config.output_dir;
  } catch (const std::exception& e) {
    return fail(e, dir);
  }

  try {
    const qpnn::RunOutcome outcome = qpnn::run_experiment(config);
    std::cout << outcome.summary.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    return fail(e, dir);
  }
}
