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

#ifndef TIAM_DATASET_HPP_
#define TIAM_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "prompt_engine.hpp"

namespace tiam {

inline constexpr std::string_view kDatasetSchemaId = "tiam.dataset/1";

// A generated prompt dataset: the template it came from, the closed-form count
// as a self-check, and every prompt with its ground truth.
class PromptDataset {
 public:
  PromptDataset(Template tpl, std::vector<PromptInstance> prompts);

  static PromptDataset Generate(const Template& tpl);
  static PromptDataset FromJson(const nlohmann::json& doc);
  static PromptDataset Load(const std::filesystem::path& path);
  nlohmann::ordered_json ToJson() const;

  const Template& tmpl() const { return template_; }
  const std::vector<PromptInstance>& prompts() const { return prompts_; }
  std::uint64_t declared_count() const { return declared_count_; }
  int n_positions() const { return template_.n_positions; }

  // nullptr when unknown.
  const PromptInstance* Find(std::string_view prompt_id) const;

 private:
  Template template_;
  std::vector<PromptInstance> prompts_;
  std::uint64_t declared_count_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace tiam

#endif  // TIAM_DATASET_HPP_
