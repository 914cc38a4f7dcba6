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

#include "scoring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "dataset.hpp"
#include "error.hpp"
#include "io.hpp"

namespace tiam {
namespace {

// Maximum bipartite matching, positions on the left. Kuhn's augmenting paths
// with positions visited in index order; edges list detections in ascending
// id order. Returns, per position, the matched detection index or -1.
std::vector<int> MatchPositions(const std::vector<std::vector<int>>& edges, std::size_t n_detections) {
  std::vector<int> owner(n_detections, -1);
  std::vector<int> match(edges.size(), -1);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t position) {
    for (int det : edges[position]) {
      if (visited[static_cast<std::size_t>(det)]) continue;
      visited[static_cast<std::size_t>(det)] = 1;
      const int holder = owner[static_cast<std::size_t>(det)];
      if (holder < 0 || augment(static_cast<std::size_t>(holder))) {
        owner[static_cast<std::size_t>(det)] = static_cast<int>(position);
        match[position] = det;
        return true;
      }
    }
    return false;
  };
  for (std::size_t position = 0; position < edges.size(); ++position) {
    visited.assign(n_detections, 0);
    augment(position);
  }
  return match;
}

}  // namespace

bool Outcome::DiagnosticsAgree() const {
  bool all = std::all_of(position_presence.begin(), position_presence.end(), [](bool b) { return b; }) &&
             std::all_of(position_binding.begin(), position_binding.end(),
                         [](const std::optional<bool>& b) { return !b || *b; });
  return all == success;
}

ImageRecord PrepareRecord(const ImageRecord& record, const ScoringThresholds& thresholds) {
  return DedupOverlaps(FilterConfidence(record, thresholds.confidence), thresholds.dedup_iou);
}

Outcome ScoreImage(const PromptInstance& instance, const ImageRecord& record, const ReferencePalette& palette,
                   const ScoringThresholds& thresholds, bool audit) {
  if (record.prompt_id != instance.prompt_id) {
    throw Error(Errc::kUnresolvedPrompt,
                "record for prompt '" + record.prompt_id + "' scored against prompt '" + instance.prompt_id + "'");
  }
  const auto& gt = instance.ground_truth;
  const std::size_t n = gt.size();

  std::vector<std::size_t> order(record.detections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return record.detections[a].id < record.detections[b].id;
  });

  // Binding verdicts are memoized per (detection, attribute).
  std::map<std::pair<std::size_t, std::string>, BindingVerdict> verdicts;
  auto verdict = [&](std::size_t det_index, const std::string& attribute) -> const BindingVerdict* {
    const auto& det = record.detections[det_index];
    if (det.pixels.empty()) return nullptr;
    auto key = std::make_pair(det_index, attribute);
    auto it = verdicts.find(key);
    if (it == verdicts.end()) {
      it = verdicts.emplace(key, CheckBinding(std::span<const Rgb8>(det.pixels), attribute, palette,
                                              thresholds.binding)).first;
    }
    return &it->second;
  };

  std::vector<std::vector<int>> label_edges(n);
  std::vector<std::vector<int>> full_edges(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t det_index : order) {
      const auto& det = record.detections[det_index];
      if (det.label != gt[p].object) continue;
      label_edges[p].push_back(static_cast<int>(det_index));
      if (!gt[p].attribute) {
        full_edges[p].push_back(static_cast<int>(det_index));
      } else if (const auto* v = verdict(det_index, *gt[p].attribute); v && v->success) {
        full_edges[p].push_back(static_cast<int>(det_index));
      }
    }
  }
  const auto label_match = MatchPositions(label_edges, record.detections.size());
  const auto full_match = MatchPositions(full_edges, record.detections.size());

  Outcome outcome;
  outcome.prompt_id = instance.prompt_id;
  outcome.seed = record.seed;
  outcome.position_presence.resize(n);
  outcome.position_binding.resize(n);
  outcome.matched_detection_ids.resize(n);
  bool success = true;
  for (std::size_t p = 0; p < n; ++p) {
    outcome.position_presence[p] = label_match[p] >= 0;
    success = success && outcome.position_presence[p];
    if (gt[p].attribute) {
      outcome.position_binding[p] = full_match[p] >= 0;
      success = success && *outcome.position_binding[p];
    }
    if (full_match[p] >= 0) {
      outcome.matched_detection_ids[p] = record.detections[static_cast<std::size_t>(full_match[p])].id;
    }
  }
  outcome.success = success;

  if (audit) {
    std::set<int> matched(full_match.begin(), full_match.end());
    std::vector<std::string> attributes;
    for (const auto& entry : gt) {
      if (entry.attribute && std::find(attributes.begin(), attributes.end(), *entry.attribute) == attributes.end()) {
        attributes.push_back(*entry.attribute);
      }
    }
    for (std::size_t det_index : order) {
      if (matched.count(static_cast<int>(det_index))) continue;
      for (const auto& attribute : attributes) {
        const auto* v = verdict(det_index, attribute);
        if (!v) continue;
        const auto& det = record.detections[det_index];
        outcome.audit.push_back({det.id, det.label, attribute, v->proportion});
      }
    }
  }
  return outcome;
}

CorpusScore ScoreCorpus(const PromptDataset& dataset, const std::vector<ImageRecord>& records,
                        const ReferencePalette& palette, const ScoringThresholds& thresholds, unsigned threads,
                        bool audit) {
  CorpusScore result;
  result.records_in = records.size();

  std::vector<const PromptInstance*> instances(records.size());
  std::vector<std::size_t> accepted;
  std::set<PromptSeed> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto* instance = dataset.Find(records[i].prompt_id);
    if (!instance) {
      throw Error(Errc::kUnresolvedPrompt, "records[" + std::to_string(i) + "].prompt_id: unknown prompt_id '" +
                                               records[i].prompt_id + "'");
    }
    instances[i] = instance;
    PromptSeed key{records[i].prompt_id, records[i].seed};
    if (!seen.insert(key).second) {
      result.rejected.push_back(std::move(key));
      continue;
    }
    accepted.push_back(i);
  }

  std::vector<Outcome> outcomes(accepted.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < accepted.size(); k += step) {
      const std::size_t i = accepted[k];
      outcomes[k] = ScoreImage(*instances[i], PrepareRecord(records[i], thresholds), palette, thresholds, audit);
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, accepted.size()));
  if (n_threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, n_threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) {
    return std::tie(a.prompt_id, a.seed) < std::tie(b.prompt_id, b.seed);
  });
  result.outcomes = std::move(outcomes);

  std::set<std::int64_t> seeds;
  for (const auto& key : seen) seeds.insert(key.seed);
  result.coverage.seeds.assign(seeds.begin(), seeds.end());
  result.coverage.expected = dataset.prompts().size() * seeds.size();
  std::vector<std::string> ids;
  for (const auto& prompt : dataset.prompts()) ids.push_back(prompt.prompt_id);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    for (auto seed : seeds) {
      if (!seen.count({id, seed})) result.coverage.missing.push_back({id, seed});
    }
  }
  std::sort(result.rejected.begin(), result.rejected.end());
  return result;
}

nlohmann::ordered_json OutcomeToJson(const Outcome& outcome) {
  nlohmann::ordered_json j;
  j["prompt_id"] = outcome.prompt_id;
  j["seed"] = outcome.seed;
  j["success"] = outcome.success ? 1 : 0;
  j["presence"] = nlohmann::ordered_json::array();
  for (bool b : outcome.position_presence) j["presence"].push_back(b);
  j["binding"] = nlohmann::ordered_json::array();
  for (const auto& b : outcome.position_binding) {
    j["binding"].push_back(b ? nlohmann::ordered_json(*b) : nlohmann::ordered_json());
  }
  j["matched"] = nlohmann::ordered_json::array();
  for (const auto& m : outcome.matched_detection_ids) {
    j["matched"].push_back(m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json());
  }
  if (!outcome.audit.empty()) {
    auto& audit = j["audit"] = nlohmann::ordered_json::array();
    for (const auto& a : outcome.audit) {
      nlohmann::ordered_json entry;
      entry["detection_id"] = a.detection_id;
      entry["label"] = a.label;
      entry["attribute"] = a.attribute;
      entry["proportion"] = a.proportion;
      audit.push_back(std::move(entry));
    }
  }
  return j;
}

Outcome OutcomeFromJson(const nlohmann::json& j) {
  try {
    Outcome outcome;
    outcome.prompt_id = j.at("prompt_id").get<std::string>();
    outcome.seed = j.at("seed").get<std::int64_t>();
    outcome.success = j.at("success").get<int>() != 0;
    for (const auto& b : j.at("presence")) outcome.position_presence.push_back(b.get<bool>());
    for (const auto& b : j.at("binding")) {
      outcome.position_binding.push_back(b.is_null() ? std::nullopt : std::optional<bool>(b.get<bool>()));
    }
    if (j.contains("matched")) {
      for (const auto& m : j.at("matched")) {
        outcome.matched_detection_ids.push_back(m.is_null() ? std::nullopt : std::optional<int>(m.get<int>()));
      }
    }
    if (j.contains("audit")) {
      for (const auto& a : j.at("audit")) {
        outcome.audit.push_back({a.at("detection_id").get<int>(), a.at("label").get<std::string>(),
                                 a.at("attribute").get<std::string>(), a.at("proportion").get<double>()});
      }
    }
    if (outcome.position_binding.size() != outcome.position_presence.size()) {
      throw Error(Errc::kSchema, "presence and binding lists differ in length");
    }
    if (!outcome.DiagnosticsAgree()) {
      throw Error(Errc::kSchema, "success bit disagrees with the per-position diagnostics");
    }
    return outcome;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchema, std::string("outcome record: ") + e.what());
  }
}

std::string WriteOutcomeStream(const std::vector<Outcome>& outcomes) {
  std::string out;
  for (const auto& outcome : outcomes) {
    out += OutcomeToJson(outcome).dump();
    out += '\n';
  }
  return out;
}

std::vector<Outcome> ReadOutcomeStream(std::string_view text) {
  std::vector<Outcome> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(OutcomeFromJson(ParseJson(line, "outcome stream")));
    } catch (const Error& e) {
      throw Error(e.code(), "outcome stream line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace tiam
