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

// The binary scoring function: an image is aligned with its prompt when every
// requested object is detected and, where an attribute was requested, at least
// one detection of that object carries the attribute. Extra objects never
// count against the image.

#ifndef TIAM_SCORING_HPP_
#define TIAM_SCORING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "color_space.hpp"
#include "ingestion.hpp"
#include "json.hpp"
#include "prompt_engine.hpp"

namespace tiam {

class PromptDataset;

struct ScoringThresholds {
  double confidence = kDefaultConfidenceThreshold;
  double dedup_iou = kDefaultDedupIou;
  double binding = kDefaultBindingThreshold;
};

// Attribute-leak diagnostic: how much of an unmatched detection is painted in
// one of the prompt's requested colors.
struct LeakAudit {
  int detection_id = 0;
  std::string label;
  std::string attribute;
  double proportion = 0.0;

  friend bool operator==(const LeakAudit&, const LeakAudit&) = default;
};

struct Outcome {
  std::string prompt_id;
  std::int64_t seed = 0;
  bool success = false;
  std::vector<bool> position_presence;
  std::vector<std::optional<bool>> position_binding;  // absent where no attribute was requested
  std::vector<std::optional<int>> matched_detection_ids;
  std::vector<LeakAudit> audit;  // filled only in audit mode

  // success recomputed from the per-position diagnostics.
  bool DiagnosticsAgree() const;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Scores one record that has already been confidence-filtered and
// de-duplicated. Throws Error(kUnresolvedPrompt) if the record belongs to a
// different prompt.
Outcome ScoreImage(const PromptInstance& instance, const ImageRecord& record, const ReferencePalette& palette,
                   const ScoringThresholds& thresholds = {}, bool audit = false);

// filter -> dedup, the preparation every record gets before ScoreImage.
ImageRecord PrepareRecord(const ImageRecord& record, const ScoringThresholds& thresholds);

struct PromptSeed {
  std::string prompt_id;
  std::int64_t seed = 0;

  friend bool operator==(const PromptSeed&, const PromptSeed&) = default;
  friend auto operator<=>(const PromptSeed&, const PromptSeed&) = default;
};

struct Coverage {
  std::vector<std::int64_t> seeds;    // every seed seen, ascending
  std::uint64_t expected = 0;         // prompts x seeds
  std::vector<PromptSeed> missing;    // sorted
  bool complete() const { return missing.empty(); }
};

struct CorpusScore {
  std::vector<Outcome> outcomes;      // sorted by (prompt_id, seed)
  Coverage coverage;
  std::vector<PromptSeed> rejected;   // duplicate (prompt, seed) records beyond the first
  std::size_t records_in = 0;
};

// Applies PrepareRecord and ScoreImage to every record. `threads` > 1 fans the
// records out over worker threads; the result does not depend on it.
CorpusScore ScoreCorpus(const PromptDataset& dataset, const std::vector<ImageRecord>& records,
                        const ReferencePalette& palette, const ScoringThresholds& thresholds = {},
                        unsigned threads = 1, bool audit = false);

nlohmann::ordered_json OutcomeToJson(const Outcome& outcome);
Outcome OutcomeFromJson(const nlohmann::json& j);

// Line-delimited outcome stream, one JSON object per line with a fixed field order.
std::string WriteOutcomeStream(const std::vector<Outcome>& outcomes);
std::vector<Outcome> ReadOutcomeStream(std::string_view text);

}  // namespace tiam

#endif  // TIAM_SCORING_HPP_
