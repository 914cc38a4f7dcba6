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

#ifndef TIAM_COLOR_SPACE_HPP_
#define TIAM_COLOR_SPACE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tiam {

inline constexpr double kDefaultBindingThreshold = 0.40;

struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

// sRGB (IEC 61966-2-1) -> XYZ -> CIELAB, D65 white, 2 degree observer. The
// white point is the one implied by the sRGB matrix, so (255,255,255) maps to
// L=100, a=b=0.
LabColor SrgbToLab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline LabColor SrgbToLab(Rgb8 c) { return SrgbToLab(c.r, c.g, c.b); }

double SquaredDistance(const LabColor& x, const LabColor& y);

struct PaletteEntry {
  std::string name;
  LabColor lab;
  std::string provenance;
};

// Reference colors used to classify mask pixels. Pixels are classified against
// every entry; only `attribute_names` may be requested as prompt attributes.
class ReferencePalette {
 public:
  ReferencePalette(std::vector<PaletteEntry> entries, std::vector<std::string> attribute_names);

  static ReferencePalette FromJson(const nlohmann::json& doc);
  static ReferencePalette Load(const std::filesystem::path& path);

  const std::vector<PaletteEntry>& entries() const { return entries_; }
  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  bool IsAttribute(std::string_view name) const;

  // Index of the nearest entry (Euclidean in Lab); ties go to the earlier entry.
  std::size_t NearestIndex(const LabColor& pixel) const;
  const std::string& Classify(const LabColor& pixel) const { return entries_[NearestIndex(pixel)].name; }
  const PaletteEntry& Entry(std::string_view name) const;

 private:
  std::vector<PaletteEntry> entries_;
  std::vector<std::string> attribute_names_;
};

const std::string& ClassifyPixel(const LabColor& pixel, const ReferencePalette& palette);

struct BindingVerdict {
  std::string target_attribute;
  double proportion = 0.0;
  std::size_t matching_pixels = 0;
  std::size_t total_pixels = 0;
  bool success = false;
};

// Fraction of mask pixels whose nearest reference color is `target`. Throws
// Error(kEmptyMask) on an empty mask and Error(kOutOfRange) when `target` is not
// an attribute color or the threshold is outside [0, 1].
BindingVerdict CheckBinding(std::span<const LabColor> mask_pixels, std::string_view target,
                            const ReferencePalette& palette,
                            double binding_threshold = kDefaultBindingThreshold);
BindingVerdict CheckBinding(std::span<const Rgb8> mask_pixels, std::string_view target,
                            const ReferencePalette& palette,
                            double binding_threshold = kDefaultBindingThreshold);

}  // namespace tiam

#endif  // TIAM_COLOR_SPACE_HPP_
