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

#ifndef TIAM_IO_HPP_
#define TIAM_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tiam {

std::string ReadTextFile(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over the target.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

// Parses JSON; syntax errors become Error(kSchema) naming `what`.
nlohmann::json ParseJson(std::string_view text, std::string_view what);
nlohmann::json LoadJsonFile(const std::filesystem::path& path);

// Shortest round-trippable decimal form ("%.17g" trimmed to the first
// representation that parses back to the same double).
std::string FormatDouble(double value);
std::string FormatOptional(const std::optional<double>& value);  // "null" when absent

// Minimal CSV table writer; fields containing separators or quotes are quoted.
class CsvTable {
 public:
  CsvTable(std::string caption, std::vector<std::string> header);
  void AddRow(std::vector<std::string> row);
  std::string ToString() const;

 private:
  std::string caption_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Reads a CSV document into rows of fields. Lines starting with '#' are skipped.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace tiam

#endif  // TIAM_IO_HPP_
