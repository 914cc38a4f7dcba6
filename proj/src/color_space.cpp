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

#include "color_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "error.hpp"
#include "io.hpp"

namespace tiam {
namespace {

constexpr std::array<std::array<double, 3>, 3> kSrgbToXyz = {{
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
}};

// Row sums of kSrgbToXyz.
constexpr std::array<double, 3> kWhite = {0.9505, 1.0, 1.0890};

constexpr std::array<const char*, 8> kReferenceNames = {"white", "black", "red",  "green",
                                                        "blue",  "purple", "pink", "yellow"};
constexpr std::array<const char*, 6> kAttributeNames = {"red", "green", "blue", "purple", "pink", "yellow"};

double Linearize(std::uint8_t channel) {
  const double c = channel / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double LabCompand(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

std::vector<std::string> SortedNames(const std::vector<std::string>& names) {
  std::vector<std::string> out = names;
  std::sort(out.begin(), out.end());
  return out;
}

template <std::size_t N>
std::vector<std::string> SortedNames(const std::array<const char*, N>& names) {
  std::vector<std::string> out(names.begin(), names.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

LabColor SrgbToLab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const std::array<double, 3> rgb = {Linearize(r), Linearize(g), Linearize(b)};
  std::array<double, 3> f{};
  for (std::size_t row = 0; row < 3; ++row) {
    double v = 0.0;
    for (std::size_t col = 0; col < 3; ++col) v += kSrgbToXyz[row][col] * rgb[col];
    f[row] = LabCompand(v / kWhite[row]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

double SquaredDistance(const LabColor& x, const LabColor& y) {
  const double dl = x.L - y.L;
  const double da = x.a - y.a;
  const double db = x.b - y.b;
  return dl * dl + da * da + db * db;
}

ReferencePalette::ReferencePalette(std::vector<PaletteEntry> entries, std::vector<std::string> attribute_names)
    : entries_(std::move(entries)), attribute_names_(std::move(attribute_names)) {
  std::set<std::string> names;
  for (const auto& entry : entries_) {
    if (!names.insert(entry.name).second) {
      throw Error(Errc::kSchema, "palette: duplicate color '" + entry.name + "'");
    }
    const auto& lab = entry.lab;
    if (!(lab.L >= 0.0 && lab.L <= 100.0) || !std::isfinite(lab.a) || !std::isfinite(lab.b)) {
      throw Error(Errc::kSchema, "palette: color '" + entry.name + "' has Lab values out of range");
    }
  }
  if (SortedNames(std::vector<std::string>(names.begin(), names.end())) != SortedNames(kReferenceNames)) {
    throw Error(Errc::kSchema,
                "palette: reference colors must be exactly {white, black, red, green, blue, purple, pink, yellow}");
  }
  if (SortedNames(attribute_names_) != SortedNames(kAttributeNames)) {
    throw Error(Errc::kSchema, "palette: attribute colors must be exactly {red, green, blue, purple, pink, yellow}");
  }
}

ReferencePalette ReferencePalette::FromJson(const nlohmann::json& doc) {
  std::vector<PaletteEntry> entries;
  std::vector<std::string> attributes;
  try {
    for (const auto& item : doc.at("entries")) {
      PaletteEntry entry;
      entry.name = item.at("name").get<std::string>();
      entry.lab = {item.at("L").get<double>(), item.at("a").get<double>(), item.at("b").get<double>()};
      if (item.contains("provenance")) entry.provenance = item.at("provenance").get<std::string>();
      entries.push_back(std::move(entry));
    }
    attributes = doc.at("attribute_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchema, std::string("palette document: ") + e.what());
  }
  return ReferencePalette(std::move(entries), std::move(attributes));
}

ReferencePalette ReferencePalette::Load(const std::filesystem::path& path) {
  try {
    return FromJson(LoadJsonFile(path));
  } catch (const Error& e) {
    if (e.code() == Errc::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool ReferencePalette::IsAttribute(std::string_view name) const {
  return std::find(attribute_names_.begin(), attribute_names_.end(), name) != attribute_names_.end();
}

std::size_t ReferencePalette::NearestIndex(const LabColor& pixel) const {
  std::size_t best = 0;
  double best_distance = SquaredDistance(pixel, entries_[0].lab);
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const double d = SquaredDistance(pixel, entries_[i].lab);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

const PaletteEntry& ReferencePalette::Entry(std::string_view name) const {
  for (const auto& entry : entries_) {
    if (entry.name == name) return entry;
  }
  throw Error(Errc::kOutOfRange, "palette has no color '" + std::string(name) + "'");
}

const std::string& ClassifyPixel(const LabColor& pixel, const ReferencePalette& palette) {
  return palette.Classify(pixel);
}

namespace {

template <typename Pixel, typename ToLab>
BindingVerdict CheckBindingImpl(std::span<const Pixel> pixels, std::string_view target,
                                const ReferencePalette& palette, double threshold, ToLab to_lab) {
  if (!palette.IsAttribute(target)) {
    throw Error(Errc::kOutOfRange, "'" + std::string(target) + "' is not an attribute color of the palette");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::kOutOfRange, "binding threshold must lie in [0, 1]");
  }
  if (pixels.empty()) throw Error(Errc::kEmptyMask, "binding check on an empty mask");
  BindingVerdict verdict;
  verdict.target_attribute = std::string(target);
  verdict.total_pixels = pixels.size();
  for (const auto& pixel : pixels) {
    if (palette.Classify(to_lab(pixel)) == target) ++verdict.matching_pixels;
  }
  verdict.proportion = static_cast<double>(verdict.matching_pixels) / static_cast<double>(verdict.total_pixels);
  verdict.success = verdict.proportion >= threshold;
  return verdict;
}

}  // namespace

BindingVerdict CheckBinding(std::span<const LabColor> mask_pixels, std::string_view target,
                            const ReferencePalette& palette, double binding_threshold) {
  return CheckBindingImpl(mask_pixels, target, palette, binding_threshold,
                          [](const LabColor& c) -> const LabColor& { return c; });
}

BindingVerdict CheckBinding(std::span<const Rgb8> mask_pixels, std::string_view target,
                            const ReferencePalette& palette, double binding_threshold) {
  return CheckBindingImpl(mask_pixels, target, palette, binding_threshold,
                          [](const Rgb8& c) { return SrgbToLab(c); });
}

}  // namespace tiam
