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

#include "analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dataset.hpp"
#include "error.hpp"

namespace tiam {
namespace {

void RequireNonEmpty(std::span<const Outcome> outcomes, const char* what) {
  if (outcomes.empty()) throw Error(Errc::kEmptyInput, std::string(what) + " on an empty outcome set");
}

const PromptInstance& Lookup(const PromptDataset& dataset, const Outcome& outcome) {
  const auto* prompt = dataset.Find(outcome.prompt_id);
  if (!prompt) throw Error(Errc::kUnresolvedPrompt, "outcome for unknown prompt_id '" + outcome.prompt_id + "'");
  if (prompt->ground_truth.size() != outcome.position_presence.size()) {
    throw Error(Errc::kDimensionMismatch, "outcome for '" + outcome.prompt_id + "' has " +
                                              std::to_string(outcome.position_presence.size()) +
                                              " positions, its prompt has " +
                                              std::to_string(prompt->ground_truth.size()));
  }
  return *prompt;
}

double Quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

nlohmann::ordered_json RatioJson(const Ratio& r) {
  nlohmann::ordered_json j;
  auto v = r.value();
  j["value"] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
  j["numerator"] = r.numerator;
  j["denominator"] = r.denominator;
  return j;
}

nlohmann::ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace

double ComputeTiam(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "TIAM");
  std::size_t hits = 0;
  for (const auto& o : outcomes) hits += o.success ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double ComputeObjectOnlyTiam(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "TIAM");
  std::size_t hits = 0;
  for (const auto& o : outcomes) {
    if (std::all_of(o.position_presence.begin(), o.position_presence.end(), [](bool b) { return b; })) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

std::map<std::string, Ratio> PerPromptTiam(std::span<const Outcome> outcomes) {
  std::map<std::string, Ratio> out;
  for (const auto& o : outcomes) {
    auto& r = out[o.prompt_id];
    ++r.denominator;
    if (o.success) ++r.numerator;
  }
  return out;
}

std::vector<SeedProfile> PerSeedTiam(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "per-seed TIAM");
  std::map<std::int64_t, Ratio> groups;
  for (const auto& o : outcomes) {
    auto& r = groups[o.seed];
    ++r.denominator;
    if (o.success) ++r.numerator;
  }
  std::vector<SeedProfile> profiles;
  profiles.reserve(groups.size());
  for (const auto& [seed, r] : groups) {
    SeedProfile p;
    p.seed = seed;
    p.raw_tiam = *r.value();
    p.n_outcomes = r.denominator;
    profiles.push_back(p);
  }
  if (profiles.size() >= 2) {
    double mean = 0.0;
    for (const auto& p : profiles) mean += p.raw_tiam;
    mean /= static_cast<double>(profiles.size());
    double var = 0.0;
    for (const auto& p : profiles) var += (p.raw_tiam - mean) * (p.raw_tiam - mean);
    var /= static_cast<double>(profiles.size());
    const double sd = std::sqrt(var);
    if (sd > 1e-12) {
      for (auto& p : profiles) p.z_score = (p.raw_tiam - mean) / sd;
    }
  }
  std::sort(profiles.begin(), profiles.end(), [](const SeedProfile& a, const SeedProfile& b) {
    if (a.raw_tiam != b.raw_tiam) return a.raw_tiam > b.raw_tiam;
    return a.seed < b.seed;
  });
  for (std::size_t i = 0; i < profiles.size(); ++i) profiles[i].rank = static_cast<int>(i) + 1;
  return profiles;
}

BoxStats SeedBoxStats(const std::vector<SeedProfile>& profiles) {
  if (profiles.empty()) throw Error(Errc::kEmptyInput, "box statistics of no seeds");
  std::vector<double> values;
  values.reserve(profiles.size());
  double sum = 0.0;
  for (const auto& p : profiles) {
    values.push_back(p.raw_tiam);
    sum += p.raw_tiam;
  }
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = Quantile(values, 0.25);
  s.median = Quantile(values, 0.5);
  s.q3 = Quantile(values, 0.75);
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

std::vector<double> OccurrenceByPosition(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "occurrence by position");
  const std::size_t n = outcomes.front().position_presence.size();
  std::vector<std::size_t> hits(n, 0);
  for (const auto& o : outcomes) {
    if (o.position_presence.size() != n) {
      throw Error(Errc::kDimensionMismatch, "outcomes mix templates with " + std::to_string(n) + " and " +
                                                std::to_string(o.position_presence.size()) + " positions");
    }
    for (std::size_t i = 0; i < n; ++i) hits[i] += o.position_presence[i] ? 1 : 0;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(hits[i]) / static_cast<double>(outcomes.size());
  return out;
}

std::vector<Ratio> BindingSuccessRate(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "binding success rate");
  const std::size_t n = outcomes.front().position_presence.size();
  std::vector<Ratio> out(n);
  for (const auto& o : outcomes) {
    if (o.position_presence.size() != n) {
      throw Error(Errc::kDimensionMismatch, "outcomes mix templates with different numbers of positions");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!o.position_binding[i] || !o.position_presence[i]) continue;
      ++out[i].denominator;
      if (*o.position_binding[i]) ++out[i].numerator;
    }
  }
  return out;
}

std::map<std::pair<int, std::string>, Ratio> BindingSuccessByColor(std::span<const Outcome> outcomes,
                                                                   const PromptDataset& dataset) {
  std::map<std::pair<int, std::string>, Ratio> out;
  for (const auto& o : outcomes) {
    const auto& prompt = Lookup(dataset, o);
    for (std::size_t i = 0; i < prompt.ground_truth.size(); ++i) {
      const auto& gt = prompt.ground_truth[i];
      if (!gt.attribute) continue;
      auto& r = out[{gt.position, *gt.attribute}];
      if (!o.position_presence[i]) continue;
      ++r.denominator;
      if (o.position_binding[i].value_or(false)) ++r.numerator;
    }
  }
  return out;
}

std::map<std::pair<std::string, std::string>, Ratio> PerColorObject(std::span<const Outcome> outcomes,
                                                                    const PromptDataset& dataset) {
  std::map<std::pair<std::string, std::string>, Ratio> out;
  for (const auto& o : outcomes) {
    const auto& prompt = Lookup(dataset, o);
    for (std::size_t i = 0; i < prompt.ground_truth.size(); ++i) {
      const auto& gt = prompt.ground_truth[i];
      if (!gt.attribute) continue;
      auto& r = out[{*gt.attribute, gt.object}];
      ++r.denominator;
      if (o.position_presence[i] && o.position_binding[i].value_or(false)) ++r.numerator;
    }
  }
  return out;
}

std::map<std::string, Ratio> TiamByColor(std::span<const Outcome> outcomes, const PromptDataset& dataset) {
  std::map<std::string, Ratio> out;
  for (const auto& o : outcomes) {
    std::set<std::string> colors;
    for (const auto& gt : Lookup(dataset, o).ground_truth) {
      if (gt.attribute) colors.insert(*gt.attribute);
    }
    for (const auto& c : colors) {
      ++out[c].denominator;
      if (o.success) ++out[c].numerator;
    }
  }
  return out;
}

std::map<std::string, Ratio> TiamByObject(std::span<const Outcome> outcomes, const PromptDataset& dataset) {
  std::map<std::string, Ratio> out;
  for (const auto& o : outcomes) {
    std::set<std::string> objects;
    for (const auto& gt : Lookup(dataset, o).ground_truth) objects.insert(gt.object);
    for (const auto& obj : objects) {
      ++out[obj].denominator;
      if (o.success) ++out[obj].numerator;
    }
  }
  return out;
}

std::map<std::pair<std::string, std::string>, Ratio> OrderedPairTiam(std::span<const Outcome> outcomes,
                                                                     const PromptDataset& dataset) {
  if (dataset.n_positions() != 2) {
    throw Error(Errc::kDimensionMismatch, "object-pair tables need a two-position template");
  }
  std::map<std::pair<std::string, std::string>, Ratio> out;
  for (const auto& o : outcomes) {
    const auto& prompt = Lookup(dataset, o);
    auto& r = out[{prompt.ground_truth[0].object, prompt.ground_truth[1].object}];
    ++r.denominator;
    if (o.success) ++r.numerator;
  }
  return out;
}

int MinSeedsPerPrompt(std::span<const Outcome> outcomes) {
  RequireNonEmpty(outcomes, "seed count");
  std::map<std::string, int> counts;
  for (const auto& o : outcomes) ++counts[o.prompt_id];
  int lowest = counts.begin()->second;
  for (const auto& [id, c] : counts) lowest = std::min(lowest, c);
  return lowest;
}

std::vector<std::pair<int, double>> ConvergenceCurve(std::span<const Outcome> outcomes, int max_n) {
  RequireNonEmpty(outcomes, "convergence curve");
  if (max_n < 1) throw Error(Errc::kOutOfRange, "convergence curve needs max_n >= 1");
  std::map<std::string, std::vector<std::pair<std::int64_t, bool>>> by_prompt;
  for (const auto& o : outcomes) by_prompt[o.prompt_id].emplace_back(o.seed, o.success);
  for (auto& [id, seeds] : by_prompt) {
    if (static_cast<int>(seeds.size()) < max_n) {
      throw Error(Errc::kInsufficientData, "prompt '" + id + "' has " + std::to_string(seeds.size()) +
                                               " seeds, fewer than max_n = " + std::to_string(max_n));
    }
    std::sort(seeds.begin(), seeds.end());
  }
  std::vector<std::pair<int, double>> curve;
  std::size_t hits = 0;
  std::size_t total = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& [id, seeds] : by_prompt) {
      hits += seeds[static_cast<std::size_t>(n - 1)].second ? 1 : 0;
      ++total;
    }
    curve.emplace_back(n, static_cast<double>(hits) / static_cast<double>(total));
  }
  return curve;
}

SeedSelection SelectSeeds(const std::vector<SeedProfile>& profiles, std::size_t k) {
  if (k < 1 || k > profiles.size()) {
    throw Error(Errc::kOutOfRange, "k = " + std::to_string(k) + " outside [1, " + std::to_string(profiles.size()) + "]");
  }
  std::vector<SeedProfile> ranked = profiles;
  std::sort(ranked.begin(), ranked.end(), [](const SeedProfile& a, const SeedProfile& b) { return a.rank < b.rank; });
  SeedSelection out;
  for (std::size_t i = 0; i < k; ++i) {
    out.best.push_back(ranked[i].seed);
    out.worst.push_back(ranked[ranked.size() - 1 - i].seed);
  }
  return out;
}

TiamReport BuildReport(std::span<const Outcome> outcomes, const PromptDataset& dataset, const std::string& model_name) {
  RequireNonEmpty(outcomes, "report");
  for (const auto& o : outcomes) Lookup(dataset, o);
  TiamReport report;
  report.model_name = model_name;
  report.n_positions = dataset.n_positions();
  report.n_outcomes = outcomes.size();
  report.global_tiam = ComputeTiam(outcomes);
  report.object_only_tiam = ComputeObjectOnlyTiam(outcomes);
  report.attributed = std::any_of(dataset.prompts().begin(), dataset.prompts().end(),
                                  [](const PromptInstance& p) { return p.HasAttributes(); });
  report.per_prompt = PerPromptTiam(outcomes);
  report.per_seed = PerSeedTiam(outcomes);
  report.seed_box = SeedBoxStats(report.per_seed);
  report.per_position_occurrence = OccurrenceByPosition(outcomes);
  report.binding_success_rate = BindingSuccessRate(outcomes);
  report.binding_by_color = BindingSuccessByColor(outcomes, dataset);
  report.per_color_object = PerColorObject(outcomes, dataset);
  report.tiam_by_color = TiamByColor(outcomes, dataset);
  report.tiam_by_object = TiamByObject(outcomes, dataset);
  if (dataset.n_positions() == 2) report.ordered_pairs = OrderedPairTiam(outcomes, dataset);
  report.n_images_per_prompt = MinSeedsPerPrompt(outcomes);
  report.convergence = ConvergenceCurve(outcomes, report.n_images_per_prompt);
  return report;
}

nlohmann::ordered_json ReportToJson(const TiamReport& report) {
  nlohmann::ordered_json j;
  j["model_name"] = report.model_name;
  j["n_positions"] = report.n_positions;
  j["n_outcomes"] = report.n_outcomes;
  j["n_images_per_prompt"] = report.n_images_per_prompt;
  j["global_tiam"] = report.global_tiam;
  j["object_only_tiam"] = report.object_only_tiam;
  j["attributed"] = report.attributed;

  auto& per_prompt = j["per_prompt"] = nlohmann::ordered_json::object();
  for (const auto& [id, r] : report.per_prompt) per_prompt[id] = RatioJson(r);

  auto& seeds = j["per_seed"] = nlohmann::ordered_json::array();
  for (const auto& p : report.per_seed) {
    nlohmann::ordered_json s;
    s["seed"] = p.seed;
    s["raw_tiam"] = p.raw_tiam;
    s["n_outcomes"] = p.n_outcomes;
    s["z_score"] = OptionalJson(p.z_score);
    s["rank"] = p.rank;
    seeds.push_back(std::move(s));
  }
  j["seed_box"] = {{"min", report.seed_box.min},       {"q1", report.seed_box.q1},
                   {"median", report.seed_box.median}, {"q3", report.seed_box.q3},
                   {"max", report.seed_box.max},       {"mean", report.seed_box.mean}};
  j["per_position_occurrence"] = report.per_position_occurrence;

  auto& binding = j["binding_success_rate"] = nlohmann::ordered_json::array();
  for (const auto& r : report.binding_success_rate) binding.push_back(RatioJson(r));

  auto& by_color = j["binding_by_color"] = nlohmann::ordered_json::array();
  for (const auto& [key, r] : report.binding_by_color) {
    auto entry = RatioJson(r);
    entry["position"] = key.first;
    entry["color"] = key.second;
    by_color.push_back(std::move(entry));
  }
  auto& pco = j["per_color_object"] = nlohmann::ordered_json::array();
  for (const auto& [key, r] : report.per_color_object) {
    auto entry = RatioJson(r);
    entry["color"] = key.first;
    entry["object"] = key.second;
    pco.push_back(std::move(entry));
  }
  auto& tc = j["tiam_by_color"] = nlohmann::ordered_json::object();
  for (const auto& [c, r] : report.tiam_by_color) tc[c] = RatioJson(r);
  auto& to = j["tiam_by_object"] = nlohmann::ordered_json::object();
  for (const auto& [o, r] : report.tiam_by_object) to[o] = RatioJson(r);
  if (!report.ordered_pairs.empty()) {
    auto& pairs = j["ordered_pairs"] = nlohmann::ordered_json::array();
    for (const auto& [key, r] : report.ordered_pairs) {
      auto entry = RatioJson(r);
      entry["object_1"] = key.first;
      entry["object_2"] = key.second;
      pairs.push_back(std::move(entry));
    }
  }
  auto& conv = j["convergence"] = nlohmann::ordered_json::array();
  for (const auto& [n, t] : report.convergence) conv.push_back({{"n", n}, {"tiam", t}});
  return j;
}

}  // namespace tiam
