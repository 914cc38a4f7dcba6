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

// Prompt templates: instantiation of prompt datasets from positional object /
// attribute sets, plus closed-form counting of the resulting datasets.
//
// A template has N positions. Position i draws an object from its object set
// and, when its attribute set is non-empty, an attribute from its attribute
// set. Which combinations are allowed across positions is controlled by the
// uniqueness mode:
//
//   STRICT    objects pairwise distinct and attributes pairwise distinct;
//             requires the same sets at every position.
//   PAIRWISE  the same object may repeat only with a different attribute,
//             i.e. colored objects (attribute, object) are pairwise distinct.
//   FREE      no constraint.

#ifndef TIAM_PROMPT_ENGINE_HPP_
#define TIAM_PROMPT_ENGINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tiam {

enum class UniquenessMode { kStrict, kPairwise, kFree };

const char* ToString(UniquenessMode mode);
UniquenessMode ParseUniquenessMode(std::string_view text);

struct ObjectSet {
  int position = 0;  // 1-based
  std::vector<std::string> labels;
};

struct AttributeSet {
  int position = 0;  // 1-based
  std::vector<std::string> attributes;  // empty: no attribute at this position
};

// An object qualified by an optional attribute ("blue car", or plain "car").
struct ColoredObject {
  std::optional<std::string> attribute;
  std::string object;

  friend bool operator==(const ColoredObject&, const ColoredObject&) = default;
  friend auto operator<=>(const ColoredObject&, const ColoredObject&) = default;
};

std::string ToString(const ColoredObject& item);

struct Template {
  std::string name;
  int n_positions = 0;
  std::string text_pattern;
  std::vector<ObjectSet> object_sets;
  std::vector<AttributeSet> attribute_sets;
  UniquenessMode uniqueness_mode = UniquenessMode::kStrict;
  // Lower-case first word -> article, e.g. {"hour": "an"}.
  std::map<std::string, std::string> article_overrides;
  // Optional per-position restriction of the colored objects allowed at that
  // position. Empty vector (the default) means every attribute x object
  // combination is allowed; otherwise one entry per position, where an empty
  // optional also means unrestricted.
  std::vector<std::optional<std::vector<ColoredObject>>> colored_objects;
};

// One position of an assignment.
using Slot = ColoredObject;
using Assignment = std::vector<Slot>;

struct GroundTruthEntry {
  int position = 0;
  std::string object;
  std::optional<std::string> attribute;

  friend bool operator==(const GroundTruthEntry&, const GroundTruthEntry&) = default;
};

struct PromptInstance {
  std::string prompt_id;
  std::string text;
  std::vector<GroundTruthEntry> ground_truth;

  bool HasAttributes() const;
};

// Throws Error(kTemplateInvalid) with position context on any violation.
void ValidateTemplate(const Template& tpl);

Template TemplateFromJson(const nlohmann::json& doc);
nlohmann::ordered_json TemplateToJson(const Template& tpl);
Template LoadTemplate(const std::filesystem::path& path);

// The colored objects U_i = A_i x O_i available at each position (after the
// optional restriction list), in (object index, attribute index) order.
std::vector<std::vector<ColoredObject>> ColoredObjectsPerPosition(const Template& tpl);

// True when the assignment satisfies the template's uniqueness mode.
bool SatisfiesUniqueness(UniquenessMode mode, const Assignment& assignment);

std::string IndefiniteArticle(std::string_view next_word,
                              const std::map<std::string, std::string>& overrides);

// Stable 64-bit FNV-1a digest of (template name, assignment), as 16 hex digits.
std::string MakePromptId(std::string_view template_name, const Assignment& assignment);

PromptInstance RenderPrompt(const Template& tpl, const Assignment& assignment);

// All admissible assignments, lexicographic over (position, object index,
// attribute index).
std::vector<PromptInstance> EnumeratePrompts(const Template& tpl);

// Colored objects unique to one position (U_i^0), the shareable remainder, and
// the configuration multiset built by the pruned tree over
// (U_i \ U_i^0) u {empty}. Each configuration lists the 1-based positions filled
// from U_i^0; the all-empty leaf is not part of the multiset.
struct PairwiseStructure {
  std::vector<std::vector<ColoredObject>> unique_to_position;
  std::vector<std::vector<ColoredObject>> shareable;
  std::vector<std::vector<int>> configurations;
};

PairwiseStructure BuildPairwiseStructure(const Template& tpl);

// Closed-form number of prompts. Throws Error(kInfeasible) when a STRICT
// template has fewer objects or attributes than positions, and
// Error(kOutOfRange) on 64-bit overflow.
std::uint64_t CountPrompts(const Template& tpl);

}  // namespace tiam

#endif  // TIAM_PROMPT_ENGINE_HPP_
