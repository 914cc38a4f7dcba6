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

#include "prompt_engine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "error.hpp"
#include "io.hpp"

namespace tiam {
namespace {

[[noreturn]] void TemplateError(const std::string& message) {
  throw Error(Errc::kTemplateInvalid, message);
}

std::string PositionContext(int position) {
  return "position " + std::to_string(position);
}

struct PatternToken {
  enum class Kind { kText, kDet, kAttr, kObj };
  Kind kind = Kind::kText;
  std::string text;
  int index = 0;  // 1-based, placeholders only
};

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Splits the pattern into literal text and det/attr/obj placeholders. Any other
// identifier immediately followed by '(' is an unknown placeholder.
std::vector<PatternToken> ParsePattern(std::string_view pattern, int n_positions) {
  std::vector<PatternToken> tokens;
  std::string text;
  std::size_t i = 0;
  while (i < pattern.size()) {
    bool word_start = IsIdentChar(pattern[i]) && (i == 0 || !IsIdentChar(pattern[i - 1]));
    if (word_start) {
      std::size_t end = i;
      while (end < pattern.size() && IsIdentChar(pattern[end])) ++end;
      if (end < pattern.size() && pattern[end] == '(') {
        std::string_view name = pattern.substr(i, end - i);
        std::size_t close = pattern.find(')', end);
        if (close == std::string_view::npos) {
          TemplateError("text_pattern: unterminated placeholder '" + std::string(name) + "('");
        }
        std::string_view arg = pattern.substr(end + 1, close - end - 1);
        PatternToken token;
        if (name == "det") {
          token.kind = PatternToken::Kind::kDet;
        } else if (name == "attr") {
          token.kind = PatternToken::Kind::kAttr;
        } else if (name == "obj") {
          token.kind = PatternToken::Kind::kObj;
        } else {
          TemplateError("text_pattern: unknown placeholder '" + std::string(name) + "(" +
                        std::string(arg) + ")'");
        }
        int index = 0;
        bool numeric = !arg.empty() && arg.size() < 9 &&
                       std::all_of(arg.begin(), arg.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (numeric) index = std::stoi(std::string(arg));
        if (!numeric || index < 1 || index > n_positions) {
          TemplateError("text_pattern: placeholder '" + std::string(name) + "(" + std::string(arg) +
                        ")' index outside [1, " + std::to_string(n_positions) + "]");
        }
        if (!text.empty()) tokens.push_back({PatternToken::Kind::kText, std::move(text), 0});
        text.clear();
        token.index = index;
        tokens.push_back(std::move(token));
        i = close + 1;
        continue;
      }
      text.append(pattern.substr(i, end - i));
      i = end;
      continue;
    }
    text += pattern[i++];
  }
  if (!text.empty()) tokens.push_back({PatternToken::Kind::kText, std::move(text), 0});
  return tokens;
}

std::string CollapseSpaces(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (c == ' ' || c == '\t') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string Lower(std::string_view word) {
  std::string out(word);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool SameSetContents(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::uint64_t CheckedMul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(Errc::kOutOfRange, "prompt count overflows 64 bits");
  }
  return out;
}

std::uint64_t CheckedAdd(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(Errc::kOutOfRange, "prompt count overflows 64 bits");
  }
  return out;
}

// n! / (n - k)!
std::uint64_t Arrangements(std::uint64_t n, std::uint64_t k) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < k; ++i) out = CheckedMul(out, n - i);
  return out;
}

bool SlotsConflict(UniquenessMode mode, const Slot& a, const Slot& b) {
  switch (mode) {
    case UniquenessMode::kStrict:
      if (a.object == b.object) return true;
      return a.attribute && b.attribute && *a.attribute == *b.attribute;
    case UniquenessMode::kPairwise:
      return a == b;
    case UniquenessMode::kFree:
      return false;
  }
  return false;
}

}  // namespace

const char* ToString(UniquenessMode mode) {
  switch (mode) {
    case UniquenessMode::kStrict: return "STRICT";
    case UniquenessMode::kPairwise: return "PAIRWISE";
    case UniquenessMode::kFree: return "FREE";
  }
  return "STRICT";
}

UniquenessMode ParseUniquenessMode(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "STRICT") return UniquenessMode::kStrict;
  if (upper == "PAIRWISE") return UniquenessMode::kPairwise;
  if (upper == "FREE") return UniquenessMode::kFree;
  TemplateError("uniqueness_mode: expected STRICT, PAIRWISE or FREE, got '" + std::string(text) + "'");
}

std::string ToString(const ColoredObject& item) {
  return item.attribute ? *item.attribute + " " + item.object : item.object;
}

bool PromptInstance::HasAttributes() const {
  return std::any_of(ground_truth.begin(), ground_truth.end(),
                     [](const GroundTruthEntry& e) { return e.attribute.has_value(); });
}

void ValidateTemplate(const Template& tpl) {
  const int n = tpl.n_positions;
  if (n < 1) TemplateError("n_positions must be >= 1, got " + std::to_string(n));
  if (static_cast<int>(tpl.object_sets.size()) != n) {
    TemplateError("expected " + std::to_string(n) + " object_sets, got " +
                  std::to_string(tpl.object_sets.size()));
  }
  if (static_cast<int>(tpl.attribute_sets.size()) != n) {
    TemplateError("expected " + std::to_string(n) + " attribute_sets, got " +
                  std::to_string(tpl.attribute_sets.size()));
  }
  for (int i = 0; i < n; ++i) {
    const auto& objects = tpl.object_sets[static_cast<std::size_t>(i)];
    const auto& attributes = tpl.attribute_sets[static_cast<std::size_t>(i)];
    if (objects.position != i + 1 || attributes.position != i + 1) {
      TemplateError("object/attribute sets must be listed for positions 1.." + std::to_string(n) +
                    " in order; found position " + std::to_string(objects.position) + " at slot " +
                    std::to_string(i + 1));
    }
    if (objects.labels.empty()) TemplateError(PositionContext(i + 1) + ": object set is empty");
    std::set<std::string> seen;
    for (const auto& label : objects.labels) {
      if (label.empty()) TemplateError(PositionContext(i + 1) + ": empty object label");
      if (!seen.insert(label).second) {
        TemplateError(PositionContext(i + 1) + ": duplicate object label '" + label + "'");
      }
    }
    seen.clear();
    for (const auto& attr : attributes.attributes) {
      if (attr.empty()) TemplateError(PositionContext(i + 1) + ": empty attribute");
      if (!seen.insert(attr).second) {
        TemplateError(PositionContext(i + 1) + ": duplicate attribute '" + attr + "'");
      }
    }
  }

  auto tokens = ParsePattern(tpl.text_pattern, n);
  std::vector<int> obj_count(static_cast<std::size_t>(n), 0);
  for (const auto& token : tokens) {
    if (token.kind == PatternToken::Kind::kObj) ++obj_count[static_cast<std::size_t>(token.index - 1)];
  }
  for (int i = 0; i < n; ++i) {
    if (obj_count[static_cast<std::size_t>(i)] != 1) {
      TemplateError("text_pattern: obj(" + std::to_string(i + 1) + ") must appear exactly once, found " +
                    std::to_string(obj_count[static_cast<std::size_t>(i)]));
    }
  }

  if (!tpl.colored_objects.empty()) {
    if (static_cast<int>(tpl.colored_objects.size()) != n) {
      TemplateError("colored_objects must have one entry per position");
    }
    for (int i = 0; i < n; ++i) {
      const auto& restriction = tpl.colored_objects[static_cast<std::size_t>(i)];
      if (!restriction) continue;
      if (restriction->empty()) TemplateError(PositionContext(i + 1) + ": colored_objects list is empty");
      const auto& objects = tpl.object_sets[static_cast<std::size_t>(i)].labels;
      const auto& attributes = tpl.attribute_sets[static_cast<std::size_t>(i)].attributes;
      std::set<ColoredObject> seen;
      for (const auto& item : *restriction) {
        bool object_ok = std::find(objects.begin(), objects.end(), item.object) != objects.end();
        bool attr_ok = attributes.empty()
                           ? !item.attribute.has_value()
                           : item.attribute && std::find(attributes.begin(), attributes.end(),
                                                         *item.attribute) != attributes.end();
        if (!object_ok || !attr_ok) {
          TemplateError(PositionContext(i + 1) + ": colored object '" + ToString(item) +
                        "' is not in the position's attribute x object sets");
        }
        if (!seen.insert(item).second) {
          TemplateError(PositionContext(i + 1) + ": duplicate colored object '" + ToString(item) + "'");
        }
      }
    }
  }

  if (tpl.uniqueness_mode == UniquenessMode::kStrict) {
    for (int i = 1; i < n; ++i) {
      if (!SameSetContents(tpl.object_sets[0].labels, tpl.object_sets[static_cast<std::size_t>(i)].labels) ||
          !SameSetContents(tpl.attribute_sets[0].attributes,
                           tpl.attribute_sets[static_cast<std::size_t>(i)].attributes)) {
        TemplateError("STRICT mode requires identical object and attribute sets at every position; " +
                      PositionContext(i + 1) + " differs from position 1");
      }
    }
    bool restricted = std::any_of(tpl.colored_objects.begin(), tpl.colored_objects.end(),
                                  [](const auto& r) { return r.has_value(); });
    if (restricted) TemplateError("STRICT mode does not accept colored_objects restrictions");
  }

  for (const auto& [word, article] : tpl.article_overrides) {
    if (article != "a" && article != "an") {
      TemplateError("article_overrides['" + word + "'] must be \"a\" or \"an\"");
    }
  }
}

Template TemplateFromJson(const nlohmann::json& doc) {
  Template tpl;
  try {
    tpl.name = doc.at("name").get<std::string>();
    tpl.n_positions = doc.at("n_positions").get<int>();
    tpl.text_pattern = doc.at("text_pattern").get<std::string>();
    for (const auto& entry : doc.at("object_sets")) {
      tpl.object_sets.push_back(
          {entry.at("position").get<int>(), entry.at("labels").get<std::vector<std::string>>()});
    }
    for (const auto& entry : doc.at("attribute_sets")) {
      tpl.attribute_sets.push_back(
          {entry.at("position").get<int>(), entry.at("attributes").get<std::vector<std::string>>()});
    }
    tpl.uniqueness_mode = ParseUniquenessMode(doc.at("uniqueness_mode").get<std::string>());
    if (doc.contains("article_overrides")) {
      for (const auto& [word, article] : doc.at("article_overrides").items()) {
        tpl.article_overrides[Lower(word)] = article.get<std::string>();
      }
    }
    if (doc.contains("colored_objects")) {
      tpl.colored_objects.assign(static_cast<std::size_t>(std::max(tpl.n_positions, 0)), std::nullopt);
      for (const auto& entry : doc.at("colored_objects")) {
        int position = entry.at("position").get<int>();
        if (position < 1 || position > tpl.n_positions) {
          TemplateError("colored_objects: position " + std::to_string(position) + " out of range");
        }
        std::vector<ColoredObject> items;
        for (const auto& item : entry.at("items")) {
          ColoredObject co;
          co.object = item.at("object").get<std::string>();
          if (item.contains("attribute") && !item.at("attribute").is_null()) {
            co.attribute = item.at("attribute").get<std::string>();
          }
          items.push_back(std::move(co));
        }
        tpl.colored_objects[static_cast<std::size_t>(position - 1)] = std::move(items);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    TemplateError(std::string("template document: ") + e.what());
  }
  std::sort(tpl.object_sets.begin(), tpl.object_sets.end(),
            [](const ObjectSet& a, const ObjectSet& b) { return a.position < b.position; });
  std::sort(tpl.attribute_sets.begin(), tpl.attribute_sets.end(),
            [](const AttributeSet& a, const AttributeSet& b) { return a.position < b.position; });
  ValidateTemplate(tpl);
  return tpl;
}

nlohmann::ordered_json TemplateToJson(const Template& tpl) {
  nlohmann::ordered_json doc;
  doc["name"] = tpl.name;
  doc["n_positions"] = tpl.n_positions;
  doc["text_pattern"] = tpl.text_pattern;
  doc["object_sets"] = nlohmann::ordered_json::array();
  for (const auto& set : tpl.object_sets) {
    doc["object_sets"].push_back({{"position", set.position}, {"labels", set.labels}});
  }
  doc["attribute_sets"] = nlohmann::ordered_json::array();
  for (const auto& set : tpl.attribute_sets) {
    doc["attribute_sets"].push_back({{"position", set.position}, {"attributes", set.attributes}});
  }
  doc["uniqueness_mode"] = ToString(tpl.uniqueness_mode);
  doc["article_overrides"] = nlohmann::ordered_json::object();
  for (const auto& [word, article] : tpl.article_overrides) doc["article_overrides"][word] = article;
  bool restricted = std::any_of(tpl.colored_objects.begin(), tpl.colored_objects.end(),
                                [](const auto& r) { return r.has_value(); });
  if (restricted) {
    doc["colored_objects"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < tpl.colored_objects.size(); ++i) {
      if (!tpl.colored_objects[i]) continue;
      nlohmann::ordered_json items = nlohmann::ordered_json::array();
      for (const auto& item : *tpl.colored_objects[i]) {
        nlohmann::ordered_json j;
        j["attribute"] = item.attribute ? nlohmann::ordered_json(*item.attribute) : nlohmann::ordered_json();
        j["object"] = item.object;
        items.push_back(std::move(j));
      }
      doc["colored_objects"].push_back({{"position", static_cast<int>(i) + 1}, {"items", items}});
    }
  }
  return doc;
}

Template LoadTemplate(const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    TemplateError(path.string() + ": malformed JSON: " + e.what());
  }
  try {
    return TemplateFromJson(doc);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::vector<ColoredObject>> ColoredObjectsPerPosition(const Template& tpl) {
  std::vector<std::vector<ColoredObject>> out;
  out.reserve(static_cast<std::size_t>(tpl.n_positions));
  for (int i = 0; i < tpl.n_positions; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& objects = tpl.object_sets[idx].labels;
    const auto& attributes = tpl.attribute_sets[idx].attributes;
    const std::vector<ColoredObject>* restriction =
        (idx < tpl.colored_objects.size() && tpl.colored_objects[idx]) ? &*tpl.colored_objects[idx]
                                                                         : nullptr;
    std::vector<ColoredObject> choices;
    for (const auto& object : objects) {
      if (attributes.empty()) {
        ColoredObject item{std::nullopt, object};
        if (!restriction || std::find(restriction->begin(), restriction->end(), item) != restriction->end()) {
          choices.push_back(std::move(item));
        }
        continue;
      }
      for (const auto& attribute : attributes) {
        ColoredObject item{attribute, object};
        if (!restriction || std::find(restriction->begin(), restriction->end(), item) != restriction->end()) {
          choices.push_back(std::move(item));
        }
      }
    }
    out.push_back(std::move(choices));
  }
  return out;
}

bool SatisfiesUniqueness(UniquenessMode mode, const Assignment& assignment) {
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    for (std::size_t j = i + 1; j < assignment.size(); ++j) {
      if (SlotsConflict(mode, assignment[i], assignment[j])) return false;
    }
  }
  return true;
}

std::string IndefiniteArticle(std::string_view next_word,
                              const std::map<std::string, std::string>& overrides) {
  std::string key = Lower(next_word);
  if (auto it = overrides.find(key); it != overrides.end()) return it->second;
  if (key.empty()) return "a";
  switch (key.front()) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return "an";
    default: return "a";
  }
}

std::string MakePromptId(std::string_view template_name, const Assignment& assignment) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto feed = [&hash](std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  feed(template_name);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    feed("\x1f");
    feed(std::to_string(i + 1));
    feed("\x1e");
    feed(assignment[i].object);
    feed("\x1e");
    if (assignment[i].attribute) {
      feed("+");
      feed(*assignment[i].attribute);
    } else {
      feed("-");
    }
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

namespace {

PromptInstance RenderUnchecked(const Template& tpl, const std::vector<PatternToken>& tokens,
                               const Assignment& assignment) {
  // Articles are resolved after substitution so that det(i) sees whichever
  // word actually follows it.
  std::vector<std::string> pieces;
  std::vector<std::size_t> det_pieces;
  pieces.reserve(tokens.size());
  for (const auto& token : tokens) {
    const Slot* slot = token.index > 0 ? &assignment[static_cast<std::size_t>(token.index - 1)] : nullptr;
    switch (token.kind) {
      case PatternToken::Kind::kText: pieces.push_back(token.text); break;
      case PatternToken::Kind::kObj: pieces.push_back(slot->object); break;
      case PatternToken::Kind::kAttr: pieces.push_back(slot->attribute.value_or("")); break;
      case PatternToken::Kind::kDet:
        det_pieces.push_back(pieces.size());
        pieces.emplace_back();
        break;
    }
  }
  for (auto it = det_pieces.rbegin(); it != det_pieces.rend(); ++it) {
    std::string rest;
    for (std::size_t k = *it + 1; k < pieces.size(); ++k) rest += pieces[k];
    std::size_t begin = rest.find_first_not_of(" \t");
    std::string word;
    if (begin != std::string::npos) {
      std::size_t end = rest.find_first_of(" \t", begin);
      word = rest.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    }
    pieces[*it] = IndefiniteArticle(word, tpl.article_overrides);
  }
  std::string joined;
  for (const auto& piece : pieces) joined += piece;

  PromptInstance instance;
  instance.text = CollapseSpaces(joined);
  instance.prompt_id = MakePromptId(tpl.name, assignment);
  instance.ground_truth.reserve(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    instance.ground_truth.push_back({static_cast<int>(i) + 1, assignment[i].object, assignment[i].attribute});
  }
  return instance;
}

}  // namespace

PromptInstance RenderPrompt(const Template& tpl, const Assignment& assignment) {
  ValidateTemplate(tpl);
  if (static_cast<int>(assignment.size()) != tpl.n_positions) {
    throw Error(Errc::kAssignmentRejected, "assignment has " + std::to_string(assignment.size()) +
                                               " slots, template expects " + std::to_string(tpl.n_positions));
  }
  auto choices = ColoredObjectsPerPosition(tpl);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (std::find(choices[i].begin(), choices[i].end(), assignment[i]) == choices[i].end()) {
      throw Error(Errc::kAssignmentRejected, PositionContext(static_cast<int>(i) + 1) + ": '" +
                                                 ToString(assignment[i]) + "' is not drawn from the position's sets");
    }
  }
  if (!SatisfiesUniqueness(tpl.uniqueness_mode, assignment)) {
    throw Error(Errc::kAssignmentRejected,
                std::string("assignment violates ") + ToString(tpl.uniqueness_mode) + " uniqueness");
  }
  return RenderUnchecked(tpl, ParsePattern(tpl.text_pattern, tpl.n_positions), assignment);
}

std::vector<PromptInstance> EnumeratePrompts(const Template& tpl) {
  ValidateTemplate(tpl);
  const auto tokens = ParsePattern(tpl.text_pattern, tpl.n_positions);
  const auto choices = ColoredObjectsPerPosition(tpl);
  const auto n = static_cast<std::size_t>(tpl.n_positions);
  std::vector<PromptInstance> out;
  Assignment current;
  current.reserve(n);

  std::function<void(std::size_t)> descend = [&](std::size_t position) {
    if (position == n) {
      out.push_back(RenderUnchecked(tpl, tokens, current));
      return;
    }
    for (const auto& choice : choices[position]) {
      bool ok = std::none_of(current.begin(), current.end(), [&](const Slot& earlier) {
        return SlotsConflict(tpl.uniqueness_mode, earlier, choice);
      });
      if (!ok) continue;
      current.push_back(choice);
      descend(position + 1);
      current.pop_back();
    }
  };
  descend(0);
  return out;
}

PairwiseStructure BuildPairwiseStructure(const Template& tpl) {
  ValidateTemplate(tpl);
  const auto all = ColoredObjectsPerPosition(tpl);
  const auto n = all.size();
  PairwiseStructure out;
  out.unique_to_position.resize(n);
  out.shareable.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& item : all[i]) {
      bool elsewhere = false;
      for (std::size_t j = 0; j < n && !elsewhere; ++j) {
        if (j != i && std::find(all[j].begin(), all[j].end(), item) != all[j].end()) elsewhere = true;
      }
      (elsewhere ? out.shareable[i] : out.unique_to_position[i]).push_back(item);
    }
  }

  // Tree over (U_i \ U_i^0) u {empty}: a shared item may not repeat along a
  // branch; every leaf that placed at least one shared item is a configuration.
  std::vector<const ColoredObject*> used;
  std::vector<int> empty_positions;
  std::function<void(std::size_t)> descend = [&](std::size_t position) {
    if (position == n) {
      if (!used.empty()) out.configurations.push_back(empty_positions);
      return;
    }
    for (const auto& item : out.shareable[position]) {
      bool repeated = std::any_of(used.begin(), used.end(), [&](const ColoredObject* u) { return *u == item; });
      if (repeated) continue;
      used.push_back(&item);
      descend(position + 1);
      used.pop_back();
    }
    empty_positions.push_back(static_cast<int>(position) + 1);
    descend(position + 1);
    empty_positions.pop_back();
  };
  descend(0);
  return out;
}

std::uint64_t CountPrompts(const Template& tpl) {
  ValidateTemplate(tpl);
  const auto n = static_cast<std::uint64_t>(tpl.n_positions);
  switch (tpl.uniqueness_mode) {
    case UniquenessMode::kStrict: {
      const auto n_objects = static_cast<std::uint64_t>(tpl.object_sets[0].labels.size());
      const auto n_attributes = static_cast<std::uint64_t>(tpl.attribute_sets[0].attributes.size());
      if (n_objects < n) {
        throw Error(Errc::kInfeasible, "STRICT template needs at least " + std::to_string(n) +
                                           " objects, has " + std::to_string(n_objects));
      }
      if (n_attributes > 0 && n_attributes < n) {
        throw Error(Errc::kInfeasible, "STRICT template needs at least " + std::to_string(n) +
                                           " attributes, has " + std::to_string(n_attributes));
      }
      std::uint64_t count = Arrangements(n_objects, n);
      if (n_attributes > 0) count = CheckedMul(count, Arrangements(n_attributes, n));
      return count;
    }
    case UniquenessMode::kFree: {
      std::uint64_t count = 1;
      for (const auto& choices : ColoredObjectsPerPosition(tpl)) count = CheckedMul(count, choices.size());
      return count;
    }
    case UniquenessMode::kPairwise: {
      const auto structure = BuildPairwiseStructure(tpl);
      std::uint64_t count = 1;
      for (const auto& unique : structure.unique_to_position) count = CheckedMul(count, unique.size());
      for (const auto& config : structure.configurations) {
        std::uint64_t term = 1;
        for (int position : config) {
          term = CheckedMul(term, structure.unique_to_position[static_cast<std::size_t>(position - 1)].size());
        }
        count = CheckedAdd(count, term);
      }
      return count;
    }
  }
  return 0;
}

}  // namespace tiam
