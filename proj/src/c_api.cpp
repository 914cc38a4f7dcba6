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

#include "tiam/tiam.h"

#include <new>
#include <optional>
#include <string>
#include <vector>

#include "color_space.hpp"
#include "error.hpp"
#include "ingestion.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "prompt_engine.hpp"

struct tiam_session {
  tiam::ConfigBuilder builder;
  tiam::CommandResult last;
  std::string summary;
  std::string config_json;
};

struct tiam_template {
  tiam::Template tpl;
  std::optional<std::vector<tiam::PromptInstance>> prompts;
};

struct tiam_palette {
  tiam::ReferencePalette palette;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_kind;

tiam_status Fail(tiam_status status, std::string message, std::string kind) {
  g_last_error = std::move(message);
  g_last_kind = std::move(kind);
  return status;
}

template <typename F>
tiam_status Guard(F&& body) {
  try {
    body();
    return TIAM_OK;
  } catch (const tiam::Error& e) {
    const tiam_status status = e.code() == tiam::Errc::kIo ? TIAM_ERR_IO : TIAM_ERR_VALIDATION;
    return Fail(status, e.what(), tiam::ErrcName(e.code()));
  } catch (const std::bad_alloc&) {
    return Fail(TIAM_ERR_INTERNAL, "out of memory", "internal");
  } catch (const std::exception& e) {
    return Fail(TIAM_ERR_INTERNAL, e.what(), "internal");
  }
}

tiam_status NullArgument(const char* name) {
  return Fail(TIAM_ERR_ARGUMENT, std::string(name) + " is NULL", "argument");
}

nlohmann::ordered_json ConfigToJson(const tiam::RunConfig& c) {
  nlohmann::ordered_json j;
  j["template_path"] = c.template_path;
  j["dataset_path"] = c.dataset_path;
  j["results_path"] = c.results_path;
  j["outcomes_path"] = c.outcomes_path;
  j["output_dir"] = c.output_dir;
  j["palette_path"] = c.palette_path;
  j["external_path"] = c.external_path;
  j["model_name"] = c.model_name;
  j["confidence_threshold"] = c.confidence_threshold;
  j["dedup_iou"] = c.dedup_iou;
  j["binding_threshold"] = c.binding_threshold;
  j["min_images_per_prompt"] = c.min_images_per_prompt;
  j["threads"] = c.threads;
  j["audit"] = c.audit;
  j["k"] = c.k;
  j["mds_dim"] = c.mds_dim;
  return j;
}

}  // namespace

extern "C" {

const char* tiam_version(void) { return "1.0.0"; }

const char* tiam_status_name(tiam_status status) {
  switch (status) {
    case TIAM_OK: return "ok";
    case TIAM_ERR_VALIDATION: return "validation";
    case TIAM_ERR_IO: return "io";
    case TIAM_ERR_ARGUMENT: return "argument";
    case TIAM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tiam_last_error(void) { return g_last_error.c_str(); }
const char* tiam_last_error_kind(void) { return g_last_kind.c_str(); }

tiam_status tiam_session_create(tiam_session** out) {
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] { *out = new tiam_session(); });
}

void tiam_session_destroy(tiam_session* session) { delete session; }

tiam_status tiam_session_set_option(tiam_session* session, const char* key, const char* value) {
  if (!session) return NullArgument("session");
  if (!key || !value) return NullArgument("key/value");
  return Guard([&] { session->builder.Set(key, value); });
}

tiam_status tiam_session_load_config(tiam_session* session, const char* path) {
  if (!session) return NullArgument("session");
  if (!path) return NullArgument("path");
  return Guard([&] { session->builder.LoadFile(path); });
}

tiam_status tiam_session_config_json(tiam_session* session, const char** out) {
  if (!session) return NullArgument("session");
  if (!out) return NullArgument("out");
  return Guard([&] {
    session->config_json = ConfigToJson(session->builder.Resolve()).dump(2);
    *out = session->config_json.c_str();
  });
}

tiam_status tiam_session_run(tiam_session* session, const char* command) {
  if (!session) return NullArgument("session");
  if (!command) return NullArgument("command");
  const std::string cmd = command;
  tiam::CommandResult (*fn)(const tiam::RunConfig&) = nullptr;
  if (cmd == "generate") fn = tiam::CmdGenerate;
  else if (cmd == "validate") fn = tiam::CmdValidate;
  else if (cmd == "score") fn = tiam::CmdScore;
  else if (cmd == "report") fn = tiam::CmdReport;
  else if (cmd == "mds") fn = tiam::CmdMds;
  else if (cmd == "seeds") fn = tiam::CmdSeeds;
  else return Fail(TIAM_ERR_ARGUMENT, "unknown command '" + cmd + "'", "argument");
  return Guard([&] {
    session->last = tiam::CommandResult{};
    session->summary.clear();
    auto result = fn(session->builder.Resolve());
    session->summary = result.summary.dump(2);
    session->last = std::move(result);
  });
}

size_t tiam_session_warning_count(const tiam_session* session) {
  return session ? session->last.warnings.size() : 0;
}

const char* tiam_session_warning(const tiam_session* session, size_t index) {
  if (!session || index >= session->last.warnings.size()) return nullptr;
  return session->last.warnings[index].c_str();
}

size_t tiam_session_output_count(const tiam_session* session) { return session ? session->last.written.size() : 0; }

const char* tiam_session_output(const tiam_session* session, size_t index) {
  if (!session || index >= session->last.written.size()) return nullptr;
  return session->last.written[index].c_str();
}

const char* tiam_session_summary_json(const tiam_session* session) {
  return session ? session->summary.c_str() : nullptr;
}

tiam_status tiam_template_load(const char* path, tiam_template** out) {
  if (!path) return NullArgument("path");
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] { *out = new tiam_template{tiam::LoadTemplate(path), std::nullopt}; });
}

tiam_status tiam_template_parse(const char* json_text, tiam_template** out) {
  if (!json_text) return NullArgument("json_text");
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    *out = new tiam_template{tiam::TemplateFromJson(tiam::ParseJson(json_text, "template")), std::nullopt};
  });
}

void tiam_template_destroy(tiam_template* tpl) { delete tpl; }

tiam_status tiam_template_count(const tiam_template* tpl, uint64_t* out) {
  if (!tpl) return NullArgument("tpl");
  if (!out) return NullArgument("out");
  return Guard([&] { *out = tiam::CountPrompts(tpl->tpl); });
}

tiam_status tiam_template_enumerate(tiam_template* tpl, size_t* n_out) {
  if (!tpl) return NullArgument("tpl");
  return Guard([&] {
    if (!tpl->prompts) tpl->prompts = tiam::EnumeratePrompts(tpl->tpl);
    if (n_out) *n_out = tpl->prompts->size();
  });
}

tiam_status tiam_template_prompt(const tiam_template* tpl, size_t index, const char** prompt_id, const char** text) {
  if (!tpl) return NullArgument("tpl");
  if (!tpl->prompts) return Fail(TIAM_ERR_ARGUMENT, "call tiam_template_enumerate first", "argument");
  if (index >= tpl->prompts->size()) return Fail(TIAM_ERR_ARGUMENT, "prompt index out of range", "argument");
  const auto& p = (*tpl->prompts)[index];
  if (prompt_id) *prompt_id = p.prompt_id.c_str();
  if (text) *text = p.text.c_str();
  return TIAM_OK;
}

tiam_status tiam_palette_load(const char* path, tiam_palette** out) {
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    *out = new tiam_palette{tiam::ReferencePalette::Load(path ? path : TIAM_DEFAULT_PALETTE)};
  });
}

void tiam_palette_destroy(tiam_palette* palette) { delete palette; }

tiam_status tiam_palette_classify(const tiam_palette* palette, uint8_t r, uint8_t g, uint8_t b, const char** name) {
  if (!palette) return NullArgument("palette");
  if (!name) return NullArgument("name");
  return Guard([&] { *name = palette->palette.Classify(tiam::SrgbToLab(r, g, b)).c_str(); });
}

tiam_status tiam_palette_binding(const tiam_palette* palette, const uint8_t* rgb, size_t n, const char* target,
                                 double threshold, double* proportion, int* success) {
  if (!palette) return NullArgument("palette");
  if (!target) return NullArgument("target");
  if (!rgb && n > 0) return NullArgument("rgb");
  return Guard([&] {
    std::vector<tiam::Rgb8> pixels(n);
    for (size_t i = 0; i < n; ++i) pixels[i] = tiam::Rgb8{rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
    auto verdict = tiam::CheckBinding(std::span<const tiam::Rgb8>(pixels), target, palette->palette, threshold);
    if (proportion) *proportion = verdict.proportion;
    if (success) *success = verdict.success ? 1 : 0;
  });
}

tiam_status tiam_srgb_to_lab(uint8_t r, uint8_t g, uint8_t b, double lab[3]) {
  if (!lab) return NullArgument("lab");
  const auto c = tiam::SrgbToLab(r, g, b);
  lab[0] = c.L;
  lab[1] = c.a;
  lab[2] = c.b;
  return TIAM_OK;
}

tiam_status tiam_rle_iou(int width, int height, const uint32_t* counts_a, size_t n_a, const uint32_t* counts_b,
                         size_t n_b, double* out) {
  if (!out) return NullArgument("out");
  if ((!counts_a && n_a) || (!counts_b && n_b)) return NullArgument("counts");
  return Guard([&] {
    tiam::SegmentationMask a{width, height, std::vector<uint32_t>(counts_a, counts_a + n_a)};
    tiam::SegmentationMask b{width, height, std::vector<uint32_t>(counts_b, counts_b + n_b)};
    a.Validate();
    b.Validate();
    *out = tiam::MaskIou(a, b);
  });
}

}  // extern "C"
