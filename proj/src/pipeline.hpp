// Copyright 2026 The TIAM Toolkit Authors
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

// Run configuration and the file-level commands: generate, validate, score,
// report, mds and seeds. Every output is written atomically.

#ifndef TIAM_PIPELINE_HPP_
#define TIAM_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#ifndef TIAM_DEFAULT_PALETTE
#define TIAM_DEFAULT_PALETTE "data/palette/berlin_kay_palette.json"
#endif

namespace tiam {

struct RunConfig {
  std::string template_path;
  std::string dataset_path;
  std::string results_path;
  std::string outcomes_path;   // defaults to <output_dir>/outcomes.jsonl
  std::string output_dir = ".";
  std::string palette_path = TIAM_DEFAULT_PALETTE;
  std::string external_path;   // distance matrix CSV for mds
  std::string model_name;
  double confidence_threshold = 0.25;
  double dedup_iou = 0.95;
  double binding_threshold = 0.40;
  int min_images_per_prompt = 32;
  int threads = 1;
  bool audit = false;
  int k = 5;
  int mds_dim = 2;

  // Throws Error(kOutOfRange) for thresholds outside [0, 1] or counts < 1.
  void Validate() const;
  std::filesystem::path OutcomesPath() const;
};

// Names accepted by SetOption and in config files.
const std::vector<std::string>& ConfigKeys();

// Parses `value` according to the key's type. Throws Error(kSchema) for an
// unknown key or unparsable value.
void SetOption(RunConfig& config, std::string_view key, std::string_view value);

// Applies every member of a JSON object. Throws Error(kSchema) on unknown keys
// or wrongly typed values.
void ApplyConfigJson(RunConfig& config, const nlohmann::json& doc);

// Layered configuration: defaults, then the config file, then explicit options,
// regardless of the order in which they were supplied.
class ConfigBuilder {
 public:
  void LoadFile(const std::filesystem::path& path);
  void Set(std::string_view key, std::string_view value);
  RunConfig Resolve() const;

 private:
  nlohmann::json file_ = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> options_;
};

struct CommandResult {
  std::vector<std::string> written;   // output files, in write order
  std::vector<std::string> warnings;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

// template_path -> dataset_path.
CommandResult CmdGenerate(const RunConfig& config);

// Validates whichever of template_path, dataset_path, results_path and
// palette_path are set. Results are resolved against the dataset when both are
// given. Throws on the first violation; non-fatal findings become warnings.
CommandResult CmdValidate(const RunConfig& config);

// dataset_path + results_path -> <output_dir>/outcomes.jsonl and score_summary.json.
CommandResult CmdScore(const RunConfig& config);

// dataset_path + outcome stream -> report.json and the CSV tables.
CommandResult CmdReport(const RunConfig& config);

// dataset_path + outcome stream of a two-position dataset -> dissimilarity.csv,
// embedding.csv, embedding.json and, with external_path, correlation.json.
CommandResult CmdMds(const RunConfig& config);

// outcome stream -> best_seeds.txt and worst_seeds.txt, k seeds each.
CommandResult CmdSeeds(const RunConfig& config);

}  // namespace tiam

#endif  // TIAM_PIPELINE_HPP_
