// Copyright 2026 The rtlab Authors.
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

#ifndef RTLAB_CLI_EXPERIMENTS_HPP_
#define RTLAB_CLI_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rtlab::cli {

const std::vector<std::string>& experiment_names();

// A threshold the experiment can be held to with --check.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ExperimentOutput {
  std::string samples_csv;
  nlohmann::json summary;
  std::vector<Check> checks;
  bool passed() const;
};

// Merges `config` over the experiment's defaults. "output_dir" is accepted
// but left out: it does not change the results. Unknown keys, an empty
// seed list and a mismatched "experiment" field throw std::invalid_argument.
// Relative file references are resolved against `base_dir`.
nlohmann::json resolve_config(const std::string& experiment,
                              const nlohmann::json& config,
                              const std::filesystem::path& base_dir = {});

// Runs a resolved config. Nothing is written.
ExperimentOutput run_experiment(const std::string& experiment,
                                const nlohmann::json& resolved);

// Hex SHA-1 of "blob <size>\0" + bytes, as git hashes file contents.
std::string git_blob_sha1(const std::string& bytes);

// "%.17g".
std::string format_double(double v);

// Writes <experiment>.samples.csv and <experiment>.summary.json into `dir`
// through temporary files renamed into place.
void write_outputs(const std::filesystem::path& dir,
                   const std::string& experiment,
                   const ExperimentOutput& output);

struct RunOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::filesystem::path> out_dir;
  bool check = false;
};

// Reads, resolves, runs and writes. Returns the process exit code: 0, or 2
// when `check` is set and a threshold fails.
int run_from_file(const std::string& experiment, const RunOptions& options);

}  // namespace rtlab::cli

#endif  // RTLAB_CLI_EXPERIMENTS_HPP_
