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

// Batch experiments driven by a JSON config.
//
//   {
//     "task": "state-prep",
//     "seed": 0,
//     "output_dir": "out",
//     "workers": 0,
//     "basis_cap": 100000,
//     "train": {"iterations": 2000, "restarts": 1, ...},
//     "params": {"modes": 4, "photons": 2, ...}
//   }
//
// Every key has a default and unknown keys are rejected. task_catalog() lists
// the parameters of each task.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpnn/io.hpp"
#include "qpnn/optimizer.hpp"

namespace qpnn {

enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kDivergence = 3,
  kResourceGuard = 4,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamSchema {
  std::string name;
  Json default_value;
  std::string description;
};

struct TaskSchema {
  std::string id;
  std::string description;
  std::vector<ParamSchema> params;
};

const std::vector<TaskSchema>& task_catalog();
/// [{id, description, params: {name: {default, description}}}].
Json catalog_json();

struct ExperimentConfig {
  std::string task = "state-prep";
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  int workers = 0;  // 0 selects the available cores
  std::size_t basis_cap = 100000;
  TrainConfig train;
  int restarts = 1;
  Json params = Json::object();  // complete, defaults filled in

  /// Validates and fills defaults; throws ConfigError.
  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
};

struct RunOutcome {
  Json summary;
  std::vector<std::filesystem::path> files;
};

/**
 * Runs the task and writes its artifacts into output_dir. Throws ConfigError,
 * DivergenceError or ResourceGuardError; the output is a function of the
 * config alone, not of the worker count.
 */
RunOutcome run_experiment(const ExperimentConfig& config);

/// Maps an exception thrown by run_experiment to its exit code.
ExitCode exit_code_for(const std::exception& e);

/// {error, exit_code, message}, plus iteration for divergence.
Json error_record(const std::exception& e);

}  // namespace qpnn
