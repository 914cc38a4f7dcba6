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

#include "ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "dataset.hpp"
#include "error.hpp"
#include "io.hpp"

namespace tiam {
namespace {

using Interval = std::pair<std::uint64_t, std::uint64_t>;  // [begin, end)

std::vector<Interval> ForegroundIntervals(const SegmentationMask& mask) {
  std::vector<Interval> out;
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < mask.counts.size(); ++i) {
    const std::uint64_t run = mask.counts[i];
    if (i % 2 == 1 && run > 0) out.emplace_back(cursor, cursor + run);
    cursor += run;
  }
  return out;
}

constexpr double kBoundsSlack = 1e-6;

class Locator {
 public:
  explicit Locator(std::string path) : path_(std::move(path)) {}
  Locator Child(std::string_view field) const { return Locator(path_ + "." + std::string(field)); }
  Locator Index(std::size_t i) const { return Locator(path_ + "[" + std::to_string(i) + "]"); }
  [[noreturn]] void Fail(Errc code, const std::string& message) const {
    throw Error(code, path_ + ": " + message);
  }
  const std::string& str() const { return path_; }

 private:
  std::string path_;
};

template <typename T>
T Field(const nlohmann::json& obj, std::string_view key, const Locator& where) {
  const std::string k(key);
  if (!obj.is_object() || !obj.contains(k)) where.Fail(Errc::kSchema, "missing field '" + k + "'");
  try {
    return obj.at(k).get<T>();
  } catch (const nlohmann::json::exception& e) {
    where.Child(k).Fail(Errc::kSchema, std::string("wrong type: ") + e.what());
  }
}

SegmentationMask ParseMask(const nlohmann::json& j, const Locator& where) {
  SegmentationMask mask;
  auto size = Field<std::vector<int>>(j, "size", where);
  if (size.size() != 2 || size[0] <= 0 || size[1] <= 0) {
    where.Child("size").Fail(Errc::kSchema, "expected [height, width] with positive entries");
  }
  mask.height = size[0];
  mask.width = size[1];
  mask.counts = Field<std::vector<std::uint32_t>>(j, "counts", where);
  try {
    mask.Validate();
  } catch (const Error& e) {
    where.Fail(e.code(), e.what());
  }
  return mask;
}

Detection ParseDetection(const nlohmann::json& j, std::size_t index, int width, int height, const Locator& where) {
  Detection det;
  det.id = j.contains("id") ? Field<int>(j, "id", where) : static_cast<int>(index);
  det.label = Field<std::string>(j, "label", where);
  if (det.label.empty()) where.Child("label").Fail(Errc::kSchema, "empty label");
  det.confidence = Field<double>(j, "confidence", where);
  if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
    where.Child("confidence").Fail(Errc::kSchema, "must lie in [0, 1]");
  }
  auto bbox = Field<std::vector<double>>(j, "bbox", where);
  if (bbox.size() != 4) where.Child("bbox").Fail(Errc::kSchema, "expected [x, y, w, h]");
  det.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
  const bool inside = det.bbox.x >= -kBoundsSlack && det.bbox.y >= -kBoundsSlack && det.bbox.w >= 0.0 &&
                      det.bbox.h >= 0.0 && det.bbox.x + det.bbox.w <= width + kBoundsSlack &&
                      det.bbox.y + det.bbox.h <= height + kBoundsSlack;
  if (!inside) where.Child("bbox").Fail(Errc::kSchema, "box lies outside the image bounds");
  if (!j.contains("mask")) where.Fail(Errc::kSchema, "missing field 'mask'");
  det.mask = ParseMask(j.at("mask"), where.Child("mask"));
  if (det.mask.width != width || det.mask.height != height) {
    where.Child("mask").Fail(Errc::kDimensionMismatch, "mask size " + std::to_string(det.mask.height) + "x" +
                                                           std::to_string(det.mask.width) +
                                                           " differs from the image size " + std::to_string(height) +
                                                           "x" + std::to_string(width));
  }
  if (j.contains("pixels") && !j.at("pixels").is_null()) {
    const auto& pixels = j.at("pixels");
    if (!pixels.is_array()) where.Child("pixels").Fail(Errc::kSchema, "expected an array of [r, g, b]");
    det.pixels.reserve(pixels.size());
    for (std::size_t p = 0; p < pixels.size(); ++p) {
      const auto& px = pixels[p];
      bool ok = px.is_array() && px.size() == 3;
      for (std::size_t c = 0; ok && c < 3; ++c) {
        ok = px[c].is_number_integer() && px[c].get<int>() >= 0 && px[c].get<int>() <= 255;
      }
      if (!ok) where.Child("pixels").Index(p).Fail(Errc::kSchema, "expected [r, g, b] with channels in 0..255");
      det.pixels.push_back({static_cast<std::uint8_t>(px[0].get<int>()), static_cast<std::uint8_t>(px[1].get<int>()),
                            static_cast<std::uint8_t>(px[2].get<int>())});
    }
    if (det.pixels.size() != det.mask.Area()) {
      where.Child("pixels").Fail(Errc::kRleMismatch, std::to_string(det.pixels.size()) +
                                                         " pixel colors for a mask with " +
                                                         std::to_string(det.mask.Area()) + " foreground pixels");
    }
  }
  return det;
}

ImageRecord ParseRecord(const nlohmann::json& j, const Locator& where, const PromptDataset* dataset,
                        std::vector<std::string>* warnings) {
  ImageRecord record;
  record.prompt_id = Field<std::string>(j, "prompt_id", where);
  record.seed = Field<std::int64_t>(j, "seed", where);
  if (j.contains("image_path") && !j.at("image_path").is_null()) {
    record.image_path = Field<std::string>(j, "image_path", where);
  }
  record.image_width = Field<int>(j, "image_width", where);
  record.image_height = Field<int>(j, "image_height", where);
  if (record.image_width <= 0 || record.image_height <= 0) {
    where.Fail(Errc::kSchema, "image dimensions must be positive");
  }
  const PromptInstance* prompt = nullptr;
  if (dataset) {
    prompt = dataset->Find(record.prompt_id);
    if (!prompt) {
      where.Child("prompt_id").Fail(Errc::kUnresolvedPrompt,
                                    "unknown prompt_id '" + record.prompt_id + "' (not in the prompt dataset)");
    }
  }
  if (!j.contains("detections") || !j.at("detections").is_array()) {
    where.Fail(Errc::kSchema, "missing array field 'detections'");
  }
  const auto& dets = j.at("detections");
  std::set<int> ids;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    const auto det_where = where.Child("detections").Index(d);
    Detection det = ParseDetection(dets[d], d, record.image_width, record.image_height, det_where);
    if (!ids.insert(det.id).second) det_where.Child("id").Fail(Errc::kSchema, "duplicate detection id");
    if (prompt && warnings && det.pixels.empty()) {
      for (const auto& gt : prompt->ground_truth) {
        if (gt.attribute && gt.object == det.label) {
          warnings->push_back(det_where.str() + ": no inline pixels; '" + det.label +
                              "' cannot be checked for its attribute and counts as unbound");
          break;
        }
      }
    }
    record.detections.push_back(std::move(det));
  }
  return record;
}

nlohmann::ordered_json MaskToJson(const SegmentationMask& mask) {
  nlohmann::ordered_json j;
  j["size"] = {mask.height, mask.width};
  j["counts"] = mask.counts;
  return j;
}

}  // namespace

std::uint64_t SegmentationMask::Area() const {
  std::uint64_t area = 0;
  for (std::size_t i = 1; i < counts.size(); i += 2) area += counts[i];
  return area;
}

std::vector<std::uint8_t> SegmentationMask::Decode() const {
  std::vector<std::uint8_t> bits;
  bits.reserve(PixelCount());
  for (std::size_t i = 0; i < counts.size(); ++i) bits.insert(bits.end(), counts[i], static_cast<std::uint8_t>(i % 2));
  return bits;
}

SegmentationMask SegmentationMask::Encode(int width, int height, const std::vector<std::uint8_t>& column_major) {
  SegmentationMask mask;
  mask.width = width;
  mask.height = height;
  if (column_major.size() != mask.PixelCount()) {
    throw Error(Errc::kDimensionMismatch, "bitmap size does not match width*height");
  }
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::uint8_t bit : column_major) {
    const std::uint8_t value = bit ? 1 : 0;
    if (value != current) {
      mask.counts.push_back(run);
      run = 0;
      current = value;
    }
    ++run;
  }
  mask.counts.push_back(run);
  return mask;
}

void SegmentationMask::Validate() const {
  std::uint64_t total = 0;
  for (auto run : counts) total += run;
  if (total != PixelCount()) {
    throw Error(Errc::kRleMismatch, "RLE runs sum to " + std::to_string(total) + ", expected width*height = " +
                                        std::to_string(PixelCount()));
  }
  if (Area() == 0) throw Error(Errc::kEmptyMask, "mask has no foreground pixel");
}

ResultsDocument ResultsFromJson(const nlohmann::json& doc, const PromptDataset* dataset,
                                std::vector<std::string>* warnings) {
  const Locator root("results");
  if (!doc.is_object()) root.Fail(Errc::kSchema, "expected a JSON object");
  if (doc.value("schema_id", std::string()) != kResultsSchemaId) {
    root.Child("schema_id").Fail(Errc::kSchema, "must be '" + std::string(kResultsSchemaId) + "'");
  }
  ResultsDocument out;
  out.dataset_ref = doc.value("dataset_ref", std::string());
  out.model_name = doc.value("model_name", std::string());
  if (doc.contains("detector_meta")) {
    const auto& meta = doc.at("detector_meta");
    const auto where = root.Child("detector_meta");
    out.detector_meta.confidence_threshold = Field<double>(meta, "confidence_threshold", where);
    out.detector_meta.nms_iou = Field<double>(meta, "nms_iou", where);
    for (const auto& [key, value] : meta.items()) {
      if (key != "confidence_threshold" && key != "nms_iou") out.detector_meta.extra[key] = value;
    }
  }
  if (!doc.contains("records") || !doc.at("records").is_array()) {
    root.Fail(Errc::kSchema, "missing array field 'records'");
  }
  const auto& records = doc.at("records");
  out.records.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    out.records.push_back(ParseRecord(records[r], Locator("records").Index(r), dataset, warnings));
  }
  return out;
}

ResultsDocument LoadResults(const std::filesystem::path& path, const PromptDataset* dataset,
                            std::vector<std::string>* warnings) {
  auto doc = LoadJsonFile(path);
  try {
    return ResultsFromJson(doc, dataset, warnings);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json ResultsToJson(const ResultsDocument& doc) {
  nlohmann::ordered_json j;
  j["schema_id"] = kResultsSchemaId;
  j["dataset_ref"] = doc.dataset_ref;
  j["model_name"] = doc.model_name;
  nlohmann::ordered_json meta;
  meta["confidence_threshold"] = doc.detector_meta.confidence_threshold;
  meta["nms_iou"] = doc.detector_meta.nms_iou;
  for (const auto& [key, value] : doc.detector_meta.extra.items()) meta[key] = value;
  j["detector_meta"] = std::move(meta);
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& record : doc.records) {
    nlohmann::ordered_json r;
    r["prompt_id"] = record.prompt_id;
    r["seed"] = record.seed;
    r["image_path"] = record.image_path ? nlohmann::ordered_json(*record.image_path) : nlohmann::ordered_json();
    r["image_width"] = record.image_width;
    r["image_height"] = record.image_height;
    auto& dets = r["detections"] = nlohmann::ordered_json::array();
    for (const auto& det : record.detections) {
      nlohmann::ordered_json d;
      d["id"] = det.id;
      d["label"] = det.label;
      d["confidence"] = det.confidence;
      d["bbox"] = {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h};
      d["mask"] = MaskToJson(det.mask);
      if (!det.pixels.empty()) {
        auto& px = d["pixels"] = nlohmann::ordered_json::array();
        for (const auto& p : det.pixels) px.push_back({p.r, p.g, p.b});
      }
      dets.push_back(std::move(d));
    }
    records.push_back(std::move(r));
  }
  return j;
}

void SaveResults(const std::filesystem::path& path, const ResultsDocument& doc) {
  WriteFileAtomic(path, ResultsToJson(doc).dump() + "\n");
}

std::vector<ImageRecord> LoadRecords(const std::filesystem::path& path, const PromptDataset& dataset) {
  return LoadResults(path, &dataset).records;
}

ImageRecord FilterConfidence(const ImageRecord& record, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::kOutOfRange, "confidence threshold must lie in [0, 1]");
  }
  ImageRecord out = record;
  out.detections.clear();
  for (const auto& det : record.detections) {
    if (det.confidence >= threshold) out.detections.push_back(det);
  }
  return out;
}

double MaskIou(const SegmentationMask& a, const SegmentationMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(Errc::kDimensionMismatch, "mask IoU on masks of different sizes");
  }
  const auto ia = ForegroundIntervals(a);
  const auto ib = ForegroundIntervals(b);
  std::uint64_t intersection = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ia.size() && j < ib.size()) {
    const std::uint64_t lo = std::max(ia[i].first, ib[j].first);
    const std::uint64_t hi = std::min(ia[i].second, ib[j].second);
    if (hi > lo) intersection += hi - lo;
    if (ia[i].second < ib[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::uint64_t union_area = a.Area() + b.Area() - intersection;
  if (union_area == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(union_area);
}

ImageRecord DedupOverlaps(const ImageRecord& record, double iou_threshold) {
  const auto& dets = record.detections;
  std::vector<bool> removed(dets.size(), false);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = i + 1; j < dets.size(); ++j) {
      if (dets[i].label == dets[j].label) continue;
      if (MaskIou(dets[i].mask, dets[j].mask) >= iou_threshold) {
        removed[i] = true;
        removed[j] = true;
      }
    }
  }
  ImageRecord out = record;
  out.detections.clear();
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!removed[i]) out.detections.push_back(dets[i]);
  }
  return out;
}

}  // namespace tiam
