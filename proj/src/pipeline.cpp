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

#include "pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "analytics.hpp"
#include "color_space.hpp"
#include "dataset.hpp"
#include "embedding.hpp"
#include "error.hpp"
#include "ingestion.hpp"
#include "io.hpp"
#include "scoring.hpp"

namespace tiam {
namespace {

namespace fs = std::filesystem;

enum class Kind { kString, kDouble, kInt, kBool };

struct KeySpec {
  const char* name;
  Kind kind;
};

constexpr KeySpec kKeys[] = {
    {"template_path", Kind::kString},
    {"dataset_path", Kind::kString},
    {"results_path", Kind::kString},
    {"outcomes_path", Kind::kString},
    {"output_dir", Kind::kString},
    {"palette_path", Kind::kString},
    {"external_path", Kind::kString},
    {"model_name", Kind::kString},
    {"confidence_threshold", Kind::kDouble},
    {"dedup_iou", Kind::kDouble},
    {"binding_threshold", Kind::kDouble},
    {"min_images_per_prompt", Kind::kInt},
    {"threads", Kind::kInt},
    {"audit", Kind::kBool},
    {"k", Kind::kInt},
    {"mds_dim", Kind::kInt},
};

const KeySpec& FindKey(std::string_view key) {
  for (const auto& spec : kKeys) {
    if (key == spec.name) return spec;
  }
  throw Error(Errc::kSchema, "unknown configuration key '" + std::string(key) + "'");
}

std::string* StringField(RunConfig& c, std::string_view key) {
  if (key == "template_path") return &c.template_path;
  if (key == "dataset_path") return &c.dataset_path;
  if (key == "results_path") return &c.results_path;
  if (key == "outcomes_path") return &c.outcomes_path;
  if (key == "output_dir") return &c.output_dir;
  if (key == "palette_path") return &c.palette_path;
  if (key == "external_path") return &c.external_path;
  return &c.model_name;
}

double* DoubleField(RunConfig& c, std::string_view key) {
  if (key == "confidence_threshold") return &c.confidence_threshold;
  if (key == "dedup_iou") return &c.dedup_iou;
  return &c.binding_threshold;
}

int* IntField(RunConfig& c, std::string_view key) {
  if (key == "min_images_per_prompt") return &c.min_images_per_prompt;
  if (key == "threads") return &c.threads;
  if (key == "k") return &c.k;
  return &c.mds_dim;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::kSchema, "option '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool ParseBool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw Error(Errc::kSchema, "option '" + std::string(key) + "': expected a boolean, got '" + std::string(text) + "'");
}

void CheckUnit(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(Errc::kOutOfRange, std::string(name) + " = " + FormatDouble(v) + " outside [0, 1]");
  }
}

void Require(const std::string& value, const char* key, const char* command) {
  if (value.empty()) throw Error(Errc::kSchema, std::string(command) + " requires " + key);
}

fs::path OutputPath(const RunConfig& config, const char* name) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create output directory '" + config.output_dir + "'");
  return fs::path(config.output_dir) / name;
}

void Emit(CommandResult& result, const fs::path& path, std::string_view contents) {
  WriteFileAtomic(path, contents);
  result.written.push_back(path.string());
}

std::string Dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<Outcome> LoadOutcomes(const RunConfig& config) {
  auto outcomes = ReadOutcomeStream(ReadTextFile(config.OutcomesPath()));
  if (outcomes.empty()) throw Error(Errc::kEmptyInput, "outcome stream '" + config.OutcomesPath().string() + "' is empty");
  return outcomes;
}

ScoringThresholds Thresholds(const RunConfig& config) {
  return ScoringThresholds{config.confidence_threshold, config.dedup_iou, config.binding_threshold};
}

std::string RatioCell(const Ratio& r) { return FormatOptional(r.value()); }

}  // namespace

void RunConfig::Validate() const {
  CheckUnit("confidence_threshold", confidence_threshold);
  CheckUnit("dedup_iou", dedup_iou);
  CheckUnit("binding_threshold", binding_threshold);
  if (min_images_per_prompt < 1) throw Error(Errc::kOutOfRange, "min_images_per_prompt must be >= 1");
  if (threads < 1) throw Error(Errc::kOutOfRange, "threads must be >= 1");
  if (k < 1) throw Error(Errc::kOutOfRange, "k must be >= 1");
  if (mds_dim < 1) throw Error(Errc::kOutOfRange, "mds_dim must be >= 1");
}

fs::path RunConfig::OutcomesPath() const {
  if (!outcomes_path.empty()) return outcomes_path;
  return fs::path(output_dir) / "outcomes.jsonl";
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& spec : kKeys) out.emplace_back(spec.name);
    return out;
  }();
  return keys;
}

void SetOption(RunConfig& config, std::string_view key, std::string_view value) {
  switch (FindKey(key).kind) {
    case Kind::kString: *StringField(config, key) = std::string(value); break;
    case Kind::kDouble: *DoubleField(config, key) = ParseNumber<double>(key, value); break;
    case Kind::kInt: *IntField(config, key) = ParseNumber<int>(key, value); break;
    case Kind::kBool: config.audit = ParseBool(key, value); break;
  }
}

void ApplyConfigJson(RunConfig& config, const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::kSchema, "configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto& spec = FindKey(key);
    const std::string where = "configuration key '" + key + "'";
    switch (spec.kind) {
      case Kind::kString:
        if (!value.is_string()) throw Error(Errc::kSchema, where + " must be a string");
        *StringField(config, key) = value.get<std::string>();
        break;
      case Kind::kDouble:
        if (!value.is_number()) throw Error(Errc::kSchema, where + " must be a number");
        *DoubleField(config, key) = value.get<double>();
        break;
      case Kind::kInt:
        if (!value.is_number_integer()) throw Error(Errc::kSchema, where + " must be an integer");
        *IntField(config, key) = value.get<int>();
        break;
      case Kind::kBool:
        if (!value.is_boolean()) throw Error(Errc::kSchema, where + " must be a boolean");
        config.audit = value.get<bool>();
        break;
    }
  }
}

void ConfigBuilder::LoadFile(const fs::path& path) {
  auto doc = LoadJsonFile(path);
  RunConfig probe;
  ApplyConfigJson(probe, doc);
  file_ = std::move(doc);
}

void ConfigBuilder::Set(std::string_view key, std::string_view value) {
  RunConfig probe;
  SetOption(probe, key, value);
  options_.emplace_back(std::string(key), std::string(value));
}

RunConfig ConfigBuilder::Resolve() const {
  RunConfig config;
  ApplyConfigJson(config, file_);
  for (const auto& [key, value] : options_) SetOption(config, key, value);
  config.Validate();
  return config;
}

CommandResult CmdGenerate(const RunConfig& config) {
  config.Validate();
  Require(config.template_path, "template_path", "generate");
  Require(config.dataset_path, "dataset_path", "generate");
  auto dataset = PromptDataset::Generate(LoadTemplate(config.template_path));
  CommandResult result;
  Emit(result, config.dataset_path, Dump(dataset.ToJson()));
  result.summary["template"] = dataset.tmpl().name;
  result.summary["count"] = dataset.declared_count();
  return result;
}

CommandResult CmdValidate(const RunConfig& config) {
  config.Validate();
  CommandResult result;
  auto palette = ReferencePalette::Load(config.palette_path);
  result.summary["palette"] = {{"path", config.palette_path}, {"entries", palette.entries().size()}};
  if (!config.template_path.empty()) {
    auto tpl = LoadTemplate(config.template_path);
    for (const auto& set : tpl.attribute_sets) {
      for (const auto& a : set.attributes) {
        if (!palette.IsAttribute(a)) {
          throw Error(Errc::kTemplateInvalid, "position " + std::to_string(set.position) + ": attribute '" + a +
                                                  "' is not a palette attribute color");
        }
      }
    }
    result.summary["template"] = {{"name", tpl.name}, {"count", CountPrompts(tpl)}};
  }
  std::optional<PromptDataset> dataset;
  if (!config.dataset_path.empty()) {
    dataset.emplace(PromptDataset::Load(config.dataset_path));
    result.summary["dataset"] = {{"template", dataset->tmpl().name}, {"count", dataset->prompts().size()}};
  }
  if (!config.results_path.empty()) {
    auto doc = LoadResults(config.results_path, dataset ? &*dataset : nullptr, &result.warnings);
    std::size_t detections = 0;
    for (const auto& r : doc.records) detections += r.detections.size();
    result.summary["results"] = {{"model_name", doc.model_name},
                                 {"records", doc.records.size()},
                                 {"detections", detections},
                                 {"resolved_against_dataset", dataset.has_value()}};
  }
  result.summary["warnings"] = result.warnings.size();
  return result;
}

CommandResult CmdScore(const RunConfig& config) {
  config.Validate();
  Require(config.dataset_path, "dataset_path", "score");
  Require(config.results_path, "results_path", "score");
  auto palette = ReferencePalette::Load(config.palette_path);
  auto dataset = PromptDataset::Load(config.dataset_path);
  CommandResult result;
  auto doc = LoadResults(config.results_path, &dataset, &result.warnings);
  auto score = ScoreCorpus(dataset, doc.records, palette, Thresholds(config),
                           static_cast<unsigned>(config.threads), config.audit);

  std::map<std::string, std::size_t> per_prompt;
  for (const auto& p : dataset.prompts()) per_prompt[p.prompt_id] = 0;
  for (const auto& o : score.outcomes) ++per_prompt[o.prompt_id];
  for (const auto& [id, n] : per_prompt) {
    if (static_cast<int>(n) < config.min_images_per_prompt) {
      result.warnings.push_back("prompt '" + id + "' has " + std::to_string(n) + " images, fewer than " +
                                std::to_string(config.min_images_per_prompt));
    }
  }
  for (const auto& r : score.rejected) {
    result.warnings.push_back("duplicate record for prompt '" + r.prompt_id + "' seed " + std::to_string(r.seed) +
                              " rejected");
  }

  auto& s = result.summary;
  s["model_name"] = doc.model_name;
  s["dataset_ref"] = doc.dataset_ref;
  s["thresholds"] = {{"confidence", config.confidence_threshold},
                     {"dedup_iou", config.dedup_iou},
                     {"binding", config.binding_threshold}};
  s["records_in"] = score.records_in;
  s["outcomes"] = score.outcomes.size();
  auto& rejected = s["rejected"] = nlohmann::ordered_json::array();
  for (const auto& r : score.rejected) rejected.push_back({{"prompt_id", r.prompt_id}, {"seed", r.seed}});
  auto& cov = s["coverage"];
  cov["prompts"] = dataset.prompts().size();
  cov["seeds"] = score.coverage.seeds.size();
  cov["expected"] = score.coverage.expected;
  cov["complete"] = score.coverage.complete();
  auto& missing = cov["missing"] = nlohmann::ordered_json::array();
  for (const auto& m : score.coverage.missing) missing.push_back({{"prompt_id", m.prompt_id}, {"seed", m.seed}});
  s["global_tiam"] = score.outcomes.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(ComputeTiam(score.outcomes));
  s["warnings"] = result.warnings;

  Emit(result, OutputPath(config, "outcomes.jsonl"), WriteOutcomeStream(score.outcomes));
  Emit(result, OutputPath(config, "score_summary.json"), Dump(s));
  return result;
}

CommandResult CmdReport(const RunConfig& config) {
  config.Validate();
  Require(config.dataset_path, "dataset_path", "report");
  auto dataset = PromptDataset::Load(config.dataset_path);
  auto outcomes = LoadOutcomes(config);
  auto report = BuildReport(outcomes, dataset, config.model_name);
  CommandResult result;
  const std::string model = report.model_name;

  Emit(result, OutputPath(config, "report.json"), Dump(ReportToJson(report)));

  CsvTable t1("TIAM by model and number of objects",
              {"model", "n_objects", "attributed", "tiam", "object_only_tiam", "n_images"});
  t1.AddRow({model, std::to_string(report.n_positions), report.attributed ? "true" : "false",
             FormatDouble(report.global_tiam), FormatDouble(report.object_only_tiam),
             std::to_string(report.n_outcomes)});
  Emit(result, OutputPath(config, "table_1.csv"), t1.ToString());

  std::vector<std::string> t2_header{"model"};
  for (int i = 0; i < report.n_positions; ++i) t2_header.push_back("o" + std::to_string(i + 1));
  CsvTable t2("proportion of appearance per position in the prompt", t2_header);
  std::vector<std::string> t2_row{model};
  for (double v : report.per_position_occurrence) t2_row.push_back(FormatDouble(v));
  t2.AddRow(std::move(t2_row));
  Emit(result, OutputPath(config, "table_2.csv"), t2.ToString());

  CsvTable box("per-seed TIAM distribution (box plot; mean marked separately)",
               {"model", "n_seeds", "min", "q1", "median", "q3", "max", "mean"});
  box.AddRow({model, std::to_string(report.per_seed.size()), FormatDouble(report.seed_box.min),
              FormatDouble(report.seed_box.q1), FormatDouble(report.seed_box.median),
              FormatDouble(report.seed_box.q3), FormatDouble(report.seed_box.max),
              FormatDouble(report.seed_box.mean)});
  Emit(result, OutputPath(config, "per_seed_boxplot.csv"), box.ToString());

  CsvTable seeds("per-seed TIAM with standardized score and rank",
                 {"seed", "raw_tiam", "z_score", "rank", "n_images"});
  for (const auto& p : report.per_seed) {
    seeds.AddRow({std::to_string(p.seed), FormatDouble(p.raw_tiam), FormatOptional(p.z_score),
                  std::to_string(p.rank), std::to_string(p.n_outcomes)});
  }
  Emit(result, OutputPath(config, "seeds.csv"), seeds.ToString());

  CsvTable occ("occurrence proportion per position", {"position", "occurrence"});
  for (std::size_t i = 0; i < report.per_position_occurrence.size(); ++i) {
    occ.AddRow({std::to_string(i + 1), FormatDouble(report.per_position_occurrence[i])});
  }
  Emit(result, OutputPath(config, "occurrence_positions.csv"), occ.ToString());

  CsvTable bind("color attribution success among detected objects",
                {"position", "color", "rate", "bound", "detected"});
  for (std::size_t i = 0; i < report.binding_success_rate.size(); ++i) {
    const auto& r = report.binding_success_rate[i];
    bind.AddRow({std::to_string(i + 1), "*", RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
  }
  for (const auto& [key, r] : report.binding_by_color) {
    bind.AddRow({std::to_string(key.first), key.second, RatioCell(r), std::to_string(r.numerator),
                 std::to_string(r.denominator)});
  }
  Emit(result, OutputPath(config, "binding_rates.csv"), bind.ToString());

  CsvTable conv("TIAM over the first n seeds of every prompt", {"n", "tiam"});
  for (const auto& [n, t] : report.convergence) conv.AddRow({std::to_string(n), FormatDouble(t)});
  Emit(result, OutputPath(config, "convergence.csv"), conv.ToString());

  CsvTable pco("generation rate of each requested colored object", {"color", "object", "rate", "bound", "requested"});
  for (const auto& [key, r] : report.per_color_object) {
    pco.AddRow({key.first, key.second, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
  }
  Emit(result, OutputPath(config, "per_color_object.csv"), pco.ToString());

  CsvTable slices("TIAM over the prompts that mention a color or an object", {"kind", "name", "tiam", "successes", "images"});
  for (const auto& [c, r] : report.tiam_by_color) {
    slices.AddRow({"color", c, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
  }
  for (const auto& [o, r] : report.tiam_by_object) {
    slices.AddRow({"object", o, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
  }
  Emit(result, OutputPath(config, "tiam_by_color_object.csv"), slices.ToString());

  CsvTable prompts("TIAM per prompt", {"prompt_id", "text", "tiam", "successes", "images"});
  for (const auto& p : dataset.prompts()) {
    auto it = report.per_prompt.find(p.prompt_id);
    Ratio r = it == report.per_prompt.end() ? Ratio{} : it->second;
    prompts.AddRow({p.prompt_id, p.text, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
  }
  Emit(result, OutputPath(config, "per_prompt.csv"), prompts.ToString());

  if (!report.ordered_pairs.empty()) {
    CsvTable ordered("TIAM per ordered object pair", {"object_1", "object_2", "tiam", "successes", "images"});
    std::map<std::pair<std::string, std::string>, Ratio> unordered;
    for (const auto& [key, r] : report.ordered_pairs) {
      ordered.AddRow({key.first, key.second, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
      auto ukey = std::minmax(key.first, key.second);
      auto& u = unordered[{ukey.first, ukey.second}];
      u.numerator += r.numerator;
      u.denominator += r.denominator;
    }
    Emit(result, OutputPath(config, "pair_tiam_ordered.csv"), ordered.ToString());
    CsvTable sym("TIAM per unordered object pair, pooled over both orders",
                 {"object_a", "object_b", "tiam", "successes", "images"});
    for (const auto& [key, r] : unordered) {
      sym.AddRow({key.first, key.second, RatioCell(r), std::to_string(r.numerator), std::to_string(r.denominator)});
    }
    Emit(result, OutputPath(config, "pair_tiam_unordered.csv"), sym.ToString());
  }

  if (report.n_images_per_prompt < config.min_images_per_prompt) {
    result.warnings.push_back("only " + std::to_string(report.n_images_per_prompt) +
                              " images for the least covered prompt, fewer than " +
                              std::to_string(config.min_images_per_prompt));
  }
  result.summary["global_tiam"] = report.global_tiam;
  result.summary["n_outcomes"] = report.n_outcomes;
  return result;
}

CommandResult CmdMds(const RunConfig& config) {
  config.Validate();
  Require(config.dataset_path, "dataset_path", "mds");
  auto dataset = PromptDataset::Load(config.dataset_path);
  auto outcomes = LoadOutcomes(config);
  std::map<std::pair<std::string, std::string>, double> scores;
  for (const auto& [key, r] : OrderedPairTiam(outcomes, dataset)) scores[key] = *r.value();

  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& set : dataset.tmpl().object_sets) {
    for (const auto& l : set.labels) {
      if (seen.insert(l).second) labels.push_back(l);
    }
  }
  auto matrix = BuildDissimilarity(scores, labels);
  auto embedding = ClassicalMds(matrix, config.mds_dim);

  CommandResult result;
  Emit(result, OutputPath(config, "dissimilarity.csv"),
       DistanceMatrixToCsv(matrix, "label dissimilarity: mean TIAM of both orders, zero diagonal"));
  Emit(result, OutputPath(config, "embedding.csv"), EmbeddingToCsv(embedding));
  Emit(result, OutputPath(config, "embedding.json"), Dump(EmbeddingToJson(embedding)));
  if (embedding.deficient) {
    result.warnings.push_back("embedding has " + std::to_string(embedding.axes) + " informative axes of " +
                              std::to_string(embedding.requested_dim) + " requested");
  }
  result.summary["stress"] = embedding.stress;
  result.summary["axes"] = embedding.axes;
  if (!config.external_path.empty()) {
    auto external = ParseDistanceCsv(ReadTextFile(config.external_path));
    const double r = Correlate(matrix, external);
    nlohmann::ordered_json corr;
    corr["external"] = fs::path(config.external_path).filename().string();
    corr["pairs"] = matrix.size() * (matrix.size() - 1) / 2;
    corr["pearson"] = r;
    Emit(result, OutputPath(config, "correlation.json"), Dump(corr));
    result.summary["pearson"] = r;
  }
  return result;
}

CommandResult CmdSeeds(const RunConfig& config) {
  config.Validate();
  auto outcomes = LoadOutcomes(config);
  auto profiles = PerSeedTiam(outcomes);
  auto selection = SelectSeeds(profiles, static_cast<std::size_t>(config.k));
  auto lines = [](const std::vector<std::int64_t>& seeds) {
    std::string out;
    for (auto s : seeds) out += std::to_string(s) + "\n";
    return out;
  };
  CommandResult result;
  Emit(result, OutputPath(config, "best_seeds.txt"), lines(selection.best));
  Emit(result, OutputPath(config, "worst_seeds.txt"), lines(selection.worst));
  result.summary["k"] = config.k;
  result.summary["best"] = selection.best;
  result.summary["worst"] = selection.worst;
  return result;
}

}  // namespace tiam
