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

// Aggregations over scored images: the global metric, per-prompt and per-seed
// scores, per-position occurrence, binding success among detected objects,
// per-color / per-object slices and convergence with the number of seeds.
//
// Ratios whose denominator is zero are reported as absent, never as 0.

#ifndef TIAM_ANALYTICS_HPP_
#define TIAM_ANALYTICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "scoring.hpp"

namespace tiam {

class PromptDataset;

struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  std::optional<double> value() const {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

// Mean success. Throws Error(kEmptyInput) on no outcomes.
double ComputeTiam(std::span<const Outcome> outcomes);

// Fraction of outcomes whose requested objects were all detected, ignoring attributes.
double ComputeObjectOnlyTiam(std::span<const Outcome> outcomes);

std::map<std::string, Ratio> PerPromptTiam(std::span<const Outcome> outcomes);

struct SeedProfile {
  std::int64_t seed = 0;
  double raw_tiam = 0.0;
  std::size_t n_outcomes = 0;
  std::optional<double> z_score;  // absent with < 2 seeds or zero spread
  int rank = 0;                   // 1 = best
};

// Pools every outcome of a seed. Sorted by rank: raw_tiam descending, ties by
// ascending seed.
std::vector<SeedProfile> PerSeedTiam(std::span<const Outcome> outcomes);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Box-plot statistics of the per-seed raw scores; quartiles interpolate
// linearly between order statistics.
BoxStats SeedBoxStats(const std::vector<SeedProfile>& profiles);

// Per-position fraction of outcomes in which the object was detected. Throws
// Error(kDimensionMismatch) when outcomes disagree on the number of positions.
std::vector<double> OccurrenceByPosition(std::span<const Outcome> outcomes);

// Per position: correctly bound among detected. Absent where nothing was
// detected or no attribute was requested at that position.
std::vector<Ratio> BindingSuccessRate(std::span<const Outcome> outcomes);

// Binding success among detected, per (position, color).
std::map<std::pair<int, std::string>, Ratio> BindingSuccessByColor(std::span<const Outcome> outcomes,
                                                                   const PromptDataset& dataset);

// Over every (outcome, position) slot requesting the colored object
// (color, object): the fraction in which it was generated with its color.
std::map<std::pair<std::string, std::string>, Ratio> PerColorObject(std::span<const Outcome> outcomes,
                                                                    const PromptDataset& dataset);

// TIAM over the outcomes whose prompt mentions the color (resp. object) anywhere.
std::map<std::string, Ratio> TiamByColor(std::span<const Outcome> outcomes, const PromptDataset& dataset);
std::map<std::string, Ratio> TiamByObject(std::span<const Outcome> outcomes, const PromptDataset& dataset);

// TIAM per ordered object pair (o_1, o_2) of a two-position dataset.
std::map<std::pair<std::string, std::string>, Ratio> OrderedPairTiam(std::span<const Outcome> outcomes,
                                                                     const PromptDataset& dataset);

// TIAM over the first n seeds (ascending seed id) of every prompt, n = 1..max_n.
// Throws Error(kInsufficientData) when a prompt has fewer than max_n seeds.
std::vector<std::pair<int, double>> ConvergenceCurve(std::span<const Outcome> outcomes, int max_n);

// Smallest number of seeds available across prompts.
int MinSeedsPerPrompt(std::span<const Outcome> outcomes);

struct SeedSelection {
  std::vector<std::int64_t> best;   // best first
  std::vector<std::int64_t> worst;  // worst first
};

// Throws Error(kOutOfRange) unless 1 <= k <= profiles.size().
SeedSelection SelectSeeds(const std::vector<SeedProfile>& profiles, std::size_t k);

struct TiamReport {
  std::string model_name;
  int n_positions = 0;
  std::size_t n_outcomes = 0;
  double global_tiam = 0.0;
  double object_only_tiam = 0.0;
  bool attributed = false;
  std::map<std::string, Ratio> per_prompt;
  std::vector<SeedProfile> per_seed;
  BoxStats seed_box;
  std::vector<double> per_position_occurrence;
  std::vector<Ratio> binding_success_rate;
  std::map<std::pair<int, std::string>, Ratio> binding_by_color;
  std::map<std::pair<std::string, std::string>, Ratio> per_color_object;
  std::map<std::string, Ratio> tiam_by_color;
  std::map<std::string, Ratio> tiam_by_object;
  std::map<std::pair<std::string, std::string>, Ratio> ordered_pairs;  // two-position datasets only
  std::vector<std::pair<int, double>> convergence;
  int n_images_per_prompt = 0;  // minimum over prompts
};

TiamReport BuildReport(std::span<const Outcome> outcomes, const PromptDataset& dataset,
                       const std::string& model_name = "");

nlohmann::ordered_json ReportToJson(const TiamReport& report);

}  // namespace tiam

#endif  // TIAM_ANALYTICS_HPP_
