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

// tiam: command-line front end over the C API.
//
// Exit status: 0 success, 1 validation failure, 2 I/O failure.
// TIAM_VERBOSITY: 0 errors only, 1 (default) adds warnings, 2 adds written
// files and the run summary.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tiam/tiam.h"

namespace {

struct OptionSpec {
  const char* key;
  const char* help;
};

// Subcommand -> RunConfig keys it exposes as --flags.
const std::map<std::string, std::vector<OptionSpec>>& CommandOptions() {
  static const OptionSpec kTemplate{"template_path", "Template JSON"};
  static const OptionSpec kDataset{"dataset_path", "Prompt dataset JSON"};
  static const OptionSpec kResults{"results_path", "Detector results JSON"};
  static const OptionSpec kOutcomes{"outcomes_path", "Outcome stream (default <output_dir>/outcomes.jsonl)"};
  static const OptionSpec kOutput{"output_dir", "Output directory"};
  static const OptionSpec kPalette{"palette_path", "Reference palette JSON"};
  static const OptionSpec kConfidence{"confidence_threshold", "Detection confidence threshold (default 0.25)"};
  static const OptionSpec kDedup{"dedup_iou", "IoU above which differently labelled overlaps are removed (default 0.95)"};
  static const OptionSpec kBinding{"binding_threshold", "Pixel proportion needed for a color binding (default 0.40)"};
  static const OptionSpec kMinImages{"min_images_per_prompt", "Images per prompt below which a warning is issued (default 32)"};
  static const OptionSpec kThreads{"threads", "Worker threads; never changes the output"};
  static const OptionSpec kModel{"model_name", "Model name shown in report tables"};
  static const OptionSpec kK{"k", "Number of best and worst seeds"};
  static const OptionSpec kDim{"mds_dim", "Embedding dimension (default 2)"};
  static const OptionSpec kExternal{"external_path", "External distance matrix CSV to correlate with"};
  static const std::map<std::string, std::vector<OptionSpec>> options = {
      {"generate", {kTemplate, kDataset}},
      {"validate", {kTemplate, kDataset, kResults, kPalette}},
      {"score", {kDataset, kResults, kOutput, kPalette, kConfidence, kDedup, kBinding, kMinImages, kThreads}},
      {"report", {kDataset, kOutcomes, kOutput, kModel, kMinImages}},
      {"mds", {kDataset, kOutcomes, kOutput, kDim, kExternal}},
      {"seeds", {kOutcomes, kOutput, kK}},
  };
  return options;
}

std::string FlagName(const char* key) {
  std::string flag = "--";
  for (const char* c = key; *c; ++c) flag += (*c == '_') ? '-' : *c;
  return flag;
}

int Verbosity() {
  const char* env = std::getenv("TIAM_VERBOSITY");
  if (!env || !*env) return 1;
  return std::atoi(env);
}

int ExitCode(tiam_status status) {
  switch (status) {
    case TIAM_OK: return 0;
    case TIAM_ERR_IO: return 2;
    default: return 1;
  }
}

int Report(tiam_status status, const char* context) {
  std::fprintf(stderr, "tiam: %s: [%s] %s\n", context, tiam_last_error_kind(), tiam_last_error());
  return ExitCode(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-image alignment scoring toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tiam_version()));

  std::string config_path;
  bool audit = false;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subcommands;

  const std::map<std::string, std::string> descriptions = {
      {"generate", "Enumerate a template into a prompt dataset"},
      {"validate", "Check templates, datasets, results files and the palette"},
      {"score", "Score detector results against a prompt dataset"},
      {"report", "Aggregate an outcome stream into report tables"},
      {"mds", "Embed object labels from pairwise scores"},
      {"seeds", "List the best and worst seeds"},
  };
  for (const auto& [name, specs] : CommandOptions()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    for (const auto& spec : specs) {
      sub->add_option(FlagName(spec.key), values[name][spec.key], spec.help);
    }
    if (name == "score") sub->add_flag("--audit", audit, "Record attribute-leak diagnostics");
    subcommands[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string command;
  for (const auto& [name, sub] : subcommands) {
    if (sub->parsed()) command = name;
  }

  tiam_session* session = nullptr;
  if (tiam_status s = tiam_session_create(&session); s != TIAM_OK) return Report(s, "session");

  int rc = 0;
  tiam_status status = TIAM_OK;
  if (!config_path.empty()) status = tiam_session_load_config(session, config_path.c_str());
  if (status == TIAM_OK) {
    for (const auto& spec : CommandOptions().at(command)) {
      auto* opt = subcommands[command]->get_option(FlagName(spec.key));
      if (opt->count() == 0) continue;
      status = tiam_session_set_option(session, spec.key, values[command][spec.key].c_str());
      if (status != TIAM_OK) break;
    }
  }
  if (status == TIAM_OK && audit) status = tiam_session_set_option(session, "audit", "true");
  if (status == TIAM_OK) status = tiam_session_run(session, command.c_str());

  const int verbosity = Verbosity();
  if (status != TIAM_OK) {
    rc = Report(status, command.c_str());
  } else {
    if (verbosity >= 1) {
      for (size_t i = 0; i < tiam_session_warning_count(session); ++i) {
        std::fprintf(stderr, "tiam: warning: %s\n", tiam_session_warning(session, i));
      }
    }
    if (verbosity >= 2) {
      for (size_t i = 0; i < tiam_session_output_count(session); ++i) {
        std::fprintf(stderr, "tiam: wrote %s\n", tiam_session_output(session, i));
      }
      std::fprintf(stdout, "%s\n", tiam_session_summary_json(session));
    } else if (verbosity >= 1 && command == "validate") {
      std::fprintf(stdout, "ok (%zu warnings)\n", tiam_session_warning_count(session));
    }
  }
  tiam_session_destroy(session);
  return rc;
}
