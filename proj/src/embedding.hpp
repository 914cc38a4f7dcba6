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

// Label dissimilarities from ordered-pair scores, classical (Torgerson) MDS and
// Pearson correlation against externally supplied distance matrices.
//
// The dissimilarity of two labels is the mean score of the two orderings, so a
// pair that is easy to generate together sits far apart.

#ifndef TIAM_EMBEDDING_HPP_
#define TIAM_EMBEDDING_HPP_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tiam {

struct DissimilarityMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;

  std::size_t size() const { return labels.size(); }
  std::size_t IndexOf(const std::string& label) const;  // throws Error(kMissingPair)

  // Square, symmetric (1e-12), zero diagonal, finite and nonnegative; with
  // `unit_range` also every value <= 1. Throws Error(kSchema).
  void Validate(bool unit_range = false) const;
};

// d(x, y) = (s(x, y) + s(y, x)) / 2 for x != y, d(x, x) = 0. Labels keep the
// given order. Throws Error(kMissingPair) when either ordering is absent and
// Error(kOutOfRange) for scores outside [0, 1].
DissimilarityMatrix BuildDissimilarity(const std::map<std::pair<std::string, std::string>, double>& ordered_scores,
                                       const std::vector<std::string>& labels);

struct Embedding {
  std::vector<std::string> labels;
  int requested_dim = 2;
  int axes = 0;                               // axes with a strictly positive eigenvalue
  bool deficient = false;                     // axes < requested_dim
  std::vector<double> eigenvalues;            // top requested_dim, descending, unclipped
  std::vector<std::vector<double>> coords;    // n x requested_dim; missing axes are 0
  double stress = 0.0;                        // Kruskal stress-1
};

// Throws Error(kEmptyInput) for an empty matrix and Error(kOutOfRange) for dim < 1.
Embedding ClassicalMds(const DissimilarityMatrix& matrix, int dim = 2);

// Pearson correlation over the unordered label pairs of `scores`, looked up by
// label in `external`. Throws Error(kMissingPair), Error(kInsufficientData)
// with fewer than two pairs and Error(kZeroVariance).
double Correlate(const DissimilarityMatrix& scores, const DissimilarityMatrix& external);

// CSV with a header row of labels and one row per label starting with its name.
DissimilarityMatrix ParseDistanceCsv(std::string_view text);
std::string DistanceMatrixToCsv(const DissimilarityMatrix& matrix, const std::string& caption);

std::string EmbeddingToCsv(const Embedding& embedding);
nlohmann::ordered_json EmbeddingToJson(const Embedding& embedding);

}  // namespace tiam

#endif  // TIAM_EMBEDDING_HPP_
