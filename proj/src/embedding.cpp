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

#include "embedding.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "io.hpp"

namespace tiam {

std::size_t DissimilarityMatrix::IndexOf(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(Errc::kMissingPair, "label '" + label + "' not in matrix");
  return static_cast<std::size_t>(it - labels.begin());
}

void DissimilarityMatrix::Validate(bool unit_range) const {
  const std::size_t n = labels.size();
  if (std::set<std::string>(labels.begin(), labels.end()).size() != n) {
    throw Error(Errc::kSchema, "duplicate labels in dissimilarity matrix");
  }
  if (values.size() != n) throw Error(Errc::kSchema, "dissimilarity matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].size() != n) throw Error(Errc::kSchema, "dissimilarity matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i][i] != 0.0) throw Error(Errc::kSchema, "nonzero diagonal at '" + labels[i] + "'");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i][j];
      if (!std::isfinite(v) || v < 0.0 || (unit_range && v > 1.0)) {
        throw Error(Errc::kSchema, "invalid dissimilarity between '" + labels[i] + "' and '" + labels[j] + "'");
      }
      if (std::abs(v - values[j][i]) > 1e-12) {
        throw Error(Errc::kSchema, "asymmetric entry between '" + labels[i] + "' and '" + labels[j] + "'");
      }
    }
  }
}

DissimilarityMatrix BuildDissimilarity(const std::map<std::pair<std::string, std::string>, double>& ordered_scores,
                                       const std::vector<std::string>& labels) {
  DissimilarityMatrix m;
  m.labels = labels;
  const std::size_t n = labels.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  auto lookup = [&](const std::string& a, const std::string& b) {
    auto it = ordered_scores.find({a, b});
    if (it == ordered_scores.end()) {
      throw Error(Errc::kMissingPair, "no score for the ordered pair (" + a + ", " + b + ")");
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      throw Error(Errc::kOutOfRange, "score for (" + a + ", " + b + ") outside [0, 1]");
    }
    return it->second;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (lookup(labels[i], labels[j]) + lookup(labels[j], labels[i])) / 2.0;
      m.values[i][j] = d;
      m.values[j][i] = d;
    }
  }
  m.Validate(true);
  return m;
}

Embedding ClassicalMds(const DissimilarityMatrix& matrix, int dim) {
  matrix.Validate();
  const auto n = static_cast<Eigen::Index>(matrix.size());
  if (n == 0) throw Error(Errc::kEmptyInput, "MDS of an empty matrix");
  if (dim < 1) throw Error(Errc::kOutOfRange, "MDS dimension must be >= 1");

  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = matrix.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      d2(i, j) = v * v;
    }
  }
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * centering * d2 * centering;
  b = 0.5 * (b + b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw Error(Errc::kInsufficientData, "eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  const double lambda_max = evals(n - 1);
  const double tol = 1e-9 * std::max(1.0, std::abs(lambda_max));

  Embedding e;
  e.labels = matrix.labels;
  e.requested_dim = dim;
  e.coords.assign(matrix.size(), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  for (int k = 0; k < dim; ++k) {
    const Eigen::Index col = n - 1 - k;
    if (col < 0) break;
    e.eigenvalues.push_back(evals(col));
    if (evals(col) <= tol) continue;
    ++e.axes;
    Eigen::VectorXd v = evecs.col(col) * std::sqrt(evals(col));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    const double mean = v.mean();
    for (Eigen::Index i = 0; i < n; ++i) e.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = v(i) - mean;
  }
  e.deficient = e.axes < dim;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      double sq = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double diff = e.coords[i][static_cast<std::size_t>(k)] - e.coords[j][static_cast<std::size_t>(k)];
        sq += diff * diff;
      }
      const double delta = matrix.values[i][j];
      num += (std::sqrt(sq) - delta) * (std::sqrt(sq) - delta);
      den += delta * delta;
    }
  }
  e.stress = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return e;
}

double Correlate(const DissimilarityMatrix& scores, const DissimilarityMatrix& external) {
  scores.Validate();
  external.Validate();
  std::vector<std::size_t> ext_index;
  ext_index.reserve(scores.size());
  for (const auto& label : scores.labels) ext_index.push_back(external.IndexOf(label));

  std::size_t count = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      const double x = scores.values[i][j];
      const double y = external.values[ext_index[i]][ext_index[j]];
      ++count;
      const double dx = x - mean_x;
      const double dy = y - mean_y;
      mean_x += dx / static_cast<double>(count);
      mean_y += dy / static_cast<double>(count);
      sxx += dx * (x - mean_x);
      syy += dy * (y - mean_y);
      sxy += dx * (y - mean_y);
    }
  }
  if (count < 2) throw Error(Errc::kInsufficientData, "correlation needs at least two label pairs");
  if (sxx <= 0.0 || syy <= 0.0) throw Error(Errc::kZeroVariance, "correlation of a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DissimilarityMatrix ParseDistanceCsv(std::string_view text) {
  auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(Errc::kSchema, "distance CSV is empty");
  DissimilarityMatrix m;
  const auto& header = rows.front();
  if (header.size() < 2) throw Error(Errc::kSchema, "distance CSV header has no labels");
  m.labels.assign(header.begin() + 1, header.end());
  if (rows.size() != m.labels.size() + 1) {
    throw Error(Errc::kSchema, "distance CSV has " + std::to_string(rows.size() - 1) + " rows for " +
                                   std::to_string(m.labels.size()) + " labels");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "distance CSV row " + std::to_string(r);
    if (row.size() != m.labels.size() + 1) throw Error(Errc::kSchema, where + ": wrong number of fields");
    if (row[0] != m.labels[r - 1]) {
      throw Error(Errc::kSchema, where + ": label '" + row[0] + "' does not match header '" + m.labels[r - 1] + "'");
    }
    std::vector<double> values;
    for (std::size_t c = 1; c < row.size(); ++c) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(row[c], &used));
        if (used != row[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(Errc::kSchema, where + ": '" + row[c] + "' is not a number");
      }
    }
    m.values.push_back(std::move(values));
  }
  m.Validate();
  return m;
}

std::string DistanceMatrixToCsv(const DissimilarityMatrix& matrix, const std::string& caption) {
  std::vector<std::string> header{"label"};
  header.insert(header.end(), matrix.labels.begin(), matrix.labels.end());
  CsvTable table(caption, header);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::vector<std::string> row{matrix.labels[i]};
    for (double v : matrix.values[i]) row.push_back(FormatDouble(v));
    table.AddRow(std::move(row));
  }
  return table.ToString();
}

std::string EmbeddingToCsv(const Embedding& embedding) {
  std::vector<std::string> header{"label"};
  static const char* kAxisNames[] = {"x", "y", "z"};
  for (int k = 0; k < embedding.requested_dim; ++k) {
    header.push_back(k < 3 ? kAxisNames[k] : "axis_" + std::to_string(k + 1));
  }
  CsvTable table("classical MDS of the label dissimilarities; stress-1 = " + FormatDouble(embedding.stress), header);
  for (std::size_t i = 0; i < embedding.labels.size(); ++i) {
    std::vector<std::string> row{embedding.labels[i]};
    for (double v : embedding.coords[i]) row.push_back(FormatDouble(v));
    table.AddRow(std::move(row));
  }
  return table.ToString();
}

nlohmann::ordered_json EmbeddingToJson(const Embedding& embedding) {
  nlohmann::ordered_json j;
  j["requested_dim"] = embedding.requested_dim;
  j["axes"] = embedding.axes;
  j["deficient"] = embedding.deficient;
  j["stress"] = embedding.stress;
  j["eigenvalues"] = embedding.eigenvalues;
  auto& points = j["points"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < embedding.labels.size(); ++i) {
    points.push_back({{"label", embedding.labels[i]}, {"coords", embedding.coords[i]}});
  }
  return j;
}

}  // namespace tiam
