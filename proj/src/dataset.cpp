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

#include "dataset.hpp"

#include "error.hpp"
#include "io.hpp"

namespace tiam {

PromptDataset::PromptDataset(Template tpl, std::vector<PromptInstance> prompts)
    : template_(std::move(tpl)), prompts_(std::move(prompts)) {
  declared_count_ = prompts_.size();
  for (std::size_t i = 0; i < prompts_.size(); ++i) {
    const auto& prompt = prompts_[i];
    if (static_cast<int>(prompt.ground_truth.size()) != template_.n_positions) {
      throw Error(Errc::kSchema, "prompts[" + std::to_string(i) + "]: ground truth has " +
                                     std::to_string(prompt.ground_truth.size()) + " entries, template has " +
                                     std::to_string(template_.n_positions) + " positions");
    }
    if (!index_.emplace(prompt.prompt_id, i).second) {
      throw Error(Errc::kSchema, "prompts[" + std::to_string(i) + "]: duplicate prompt_id '" + prompt.prompt_id + "'");
    }
  }
}

PromptDataset PromptDataset::Generate(const Template& tpl) {
  const auto count = CountPrompts(tpl);
  PromptDataset dataset(tpl, EnumeratePrompts(tpl));
  if (dataset.prompts_.size() != count) {
    throw Error(Errc::kTemplateInvalid, "enumerated " + std::to_string(dataset.prompts_.size()) +
                                            " prompts but the closed-form count is " + std::to_string(count));
  }
  dataset.declared_count_ = count;
  return dataset;
}

PromptDataset PromptDataset::FromJson(const nlohmann::json& doc) {
  try {
    if (doc.value("schema_id", std::string()) != kDatasetSchemaId) {
      throw Error(Errc::kSchema, "dataset: schema_id must be '" + std::string(kDatasetSchemaId) + "'");
    }
    Template tpl = TemplateFromJson(doc.at("template"));
    std::vector<PromptInstance> prompts;
    const auto& items = doc.at("prompts");
    prompts.reserve(items.size());
    for (const auto& item : items) {
      PromptInstance prompt;
      prompt.prompt_id = item.at("prompt_id").get<std::string>();
      prompt.text = item.at("text").get<std::string>();
      for (const auto& gt : item.at("ground_truth")) {
        GroundTruthEntry entry;
        entry.position = gt.at("position").get<int>();
        entry.object = gt.at("object").get<std::string>();
        if (gt.contains("attribute") && !gt.at("attribute").is_null()) {
          entry.attribute = gt.at("attribute").get<std::string>();
        }
        prompt.ground_truth.push_back(std::move(entry));
      }
      prompts.push_back(std::move(prompt));
    }
    PromptDataset dataset(std::move(tpl), std::move(prompts));
    dataset.declared_count_ = doc.at("count").get<std::uint64_t>();
    if (dataset.declared_count_ != dataset.prompts_.size()) {
      throw Error(Errc::kSchema, "dataset: header count " + std::to_string(dataset.declared_count_) +
                                     " does not match " + std::to_string(dataset.prompts_.size()) + " prompts");
    }
    return dataset;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchema, std::string("dataset document: ") + e.what());
  }
}

PromptDataset PromptDataset::Load(const std::filesystem::path& path) {
  try {
    return FromJson(LoadJsonFile(path));
  } catch (const Error& e) {
    if (e.code() == Errc::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json PromptDataset::ToJson() const {
  nlohmann::ordered_json doc;
  doc["schema_id"] = kDatasetSchemaId;
  doc["template"] = TemplateToJson(template_);
  doc["count"] = declared_count_;
  auto& items = doc["prompts"] = nlohmann::ordered_json::array();
  for (const auto& prompt : prompts_) {
    nlohmann::ordered_json item;
    item["prompt_id"] = prompt.prompt_id;
    item["text"] = prompt.text;
    auto& gts = item["ground_truth"] = nlohmann::ordered_json::array();
    for (const auto& gt : prompt.ground_truth) {
      nlohmann::ordered_json entry;
      entry["position"] = gt.position;
      entry["object"] = gt.object;
      entry["attribute"] = gt.attribute ? nlohmann::ordered_json(*gt.attribute) : nlohmann::ordered_json();
      gts.push_back(std::move(entry));
    }
    items.push_back(std::move(item));
  }
  return doc;
}

const PromptInstance* PromptDataset::Find(std::string_view prompt_id) const {
  auto it = index_.find(std::string(prompt_id));
  return it == index_.end() ? nullptr : &prompts_[it->second];
}

}  // namespace tiam
