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

// Detection/segmentation results for generated images: the results document
// schema, its validation, confidence filtering, and the mask-overlap rule that
// discards both members of a cross-label near-duplicate pair.

#ifndef TIAM_INGESTION_HPP_
#define TIAM_INGESTION_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "color_space.hpp"
#include "json.hpp"

namespace tiam {

class PromptDataset;

inline constexpr std::string_view kResultsSchemaId = "tiam.results/1";
inline constexpr double kDefaultConfidenceThreshold = 0.25;
inline constexpr double kDefaultDedupIou = 0.95;

// Uncompressed COCO-style RLE: column-major runs alternating background and
// foreground, starting with background (a leading run may be 0).
struct SegmentationMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;

  std::uint64_t PixelCount() const { return static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height); }
  std::uint64_t Area() const;  // foreground pixels

  // Column-major 0/1 bitmap of size width*height.
  std::vector<std::uint8_t> Decode() const;
  static SegmentationMask Encode(int width, int height, const std::vector<std::uint8_t>& column_major);

  // Throws Error(kRleMismatch) when the runs do not cover width*height and
  // Error(kEmptyMask) when there is no foreground pixel.
  void Validate() const;

  friend bool operator==(const SegmentationMask&, const SegmentationMask&) = default;
};

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  int id = 0;  // unique within its record; defaults to the list index
  std::string label;
  double confidence = 0.0;
  BoundingBox bbox;
  SegmentationMask mask;
  // Foreground pixel colors in RLE order; empty when the adapter did not inline them.
  std::vector<Rgb8> pixels;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct ImageRecord {
  std::string prompt_id;
  std::int64_t seed = 0;
  std::optional<std::string> image_path;
  int image_width = 0;
  int image_height = 0;
  std::vector<Detection> detections;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct DetectorMeta {
  double confidence_threshold = kDefaultConfidenceThreshold;
  double nms_iou = 0.8;  // upstream detector setting, recorded only
  nlohmann::json extra = nlohmann::json::object();

  friend bool operator==(const DetectorMeta&, const DetectorMeta&) = default;
};

struct ResultsDocument {
  std::string dataset_ref;
  std::string model_name;
  DetectorMeta detector_meta;
  std::vector<ImageRecord> records;

  friend bool operator==(const ResultsDocument&, const ResultsDocument&) = default;
};

// Parses and validates a results document. Violations raise Error with a
// "records[i].detections[j].field" locator. When `dataset` is given, every
// prompt_id must resolve (Error(kUnresolvedPrompt)) and non-fatal findings,
// such as a detection that needs a binding check but carries no pixels, are
// appended to `warnings`.
ResultsDocument ResultsFromJson(const nlohmann::json& doc, const PromptDataset* dataset = nullptr,
                                std::vector<std::string>* warnings = nullptr);
ResultsDocument LoadResults(const std::filesystem::path& path, const PromptDataset* dataset = nullptr,
                            std::vector<std::string>* warnings = nullptr);
nlohmann::ordered_json ResultsToJson(const ResultsDocument& doc);
void SaveResults(const std::filesystem::path& path, const ResultsDocument& doc);

std::vector<ImageRecord> LoadRecords(const std::filesystem::path& path, const PromptDataset& dataset);

// Keeps detections with confidence >= threshold, preserving order.
ImageRecord FilterConfidence(const ImageRecord& record, double threshold = kDefaultConfidenceThreshold);

// |A n B| / |A u B| over foreground pixels, computed on the runs directly.
double MaskIou(const SegmentationMask& a, const SegmentationMask& b);

// Removes both detections of every differently-labelled pair whose masks
// overlap with IoU >= iou_threshold. Pairs are evaluated on the input set.
ImageRecord DedupOverlaps(const ImageRecord& record, double iou_threshold = kDefaultDedupIou);

}  // namespace tiam

#endif  // TIAM_INGESTION_HPP_
