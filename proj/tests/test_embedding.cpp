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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "embedding.hpp"
#include "error.hpp"
#include "oracles.hpp"

namespace tiam {
namespace {

using Points = std::vector<std::array<double, 2>>;

DissimilarityMatrix FromPoints(const Points& pts) {
  DissimilarityMatrix m;
  for (std::size_t i = 0; i < pts.size(); ++i) m.labels.push_back("p" + std::to_string(i));
  m.values.assign(pts.size(), std::vector<double>(pts.size(), 0.0));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      m.values[i][j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
    }
  }
  return m;
}

double MaxDistanceError(const DissimilarityMatrix& m, const Embedding& e) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < e.coords[i].size(); ++k) {
        d2 += (e.coords[i][k] - e.coords[j][k]) * (e.coords[i][k] - e.coords[j][k]);
      }
      worst = std::max(worst, std::abs(std::sqrt(d2) - m.values[i][j]));
    }
  }
  return worst;
}

Errc CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::kIo;
}

TEST(Mds, PlantedPointsReembed) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 10; n <= 30; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      Points pts(static_cast<std::size_t>(n));
      for (auto& p : pts) p = {u(rng), u(rng)};
      const auto m = FromPoints(pts);
      const auto e = ClassicalMds(m, 2);
      EXPECT_LT(MaxDistanceError(m, e), 1e-6) << n;
      EXPECT_EQ(e.axes, 2);
      EXPECT_FALSE(e.deficient);
      EXPECT_LT(e.stress, 1e-6);
      EXPECT_GE(e.eigenvalues[0], e.eigenvalues[1]);
      for (int k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (const auto& c : e.coords) mean += c[static_cast<std::size_t>(k)];
        EXPECT_NEAR(mean / n, 0.0, 1e-9);
      }
    }
  }
}

TEST(Mds, EquilateralTriangle) {
  const double h = std::sqrt(3.0) / 2.0;
  const auto m = FromPoints({{{0.0, 0.0}}, {{1.0, 0.0}}, {{0.5, h}}});
  const auto e = ClassicalMds(m, 2);
  EXPECT_EQ(e.axes, 2);
  EXPECT_NEAR(e.eigenvalues[0], 0.5, 1e-12);
  EXPECT_NEAR(e.eigenvalues[1], 0.5, 1e-12);
  EXPECT_LT(MaxDistanceError(m, e), 1e-12);
}

TEST(Mds, TwoPointsDegenerate) {
  DissimilarityMatrix m{{"a", "b"}, {{0.0, 0.8}, {0.8, 0.0}}};
  const auto e = ClassicalMds(m, 2);
  EXPECT_EQ(e.axes, 1);
  EXPECT_TRUE(e.deficient);
  ASSERT_EQ(e.coords.size(), 2u);
  EXPECT_NEAR(e.coords[0][0], 0.4, 1e-12);
  EXPECT_NEAR(e.coords[1][0], -0.4, 1e-12);
  EXPECT_EQ(e.coords[0][1], 0.0);
  EXPECT_EQ(e.coords[1][1], 0.0);
  EXPECT_LT(MaxDistanceError(m, e), 1e-12);
}

TEST(Mds, CollinearIsDeficient) {
  const auto m = FromPoints({{{0, 0}}, {{1, 0}}, {{3, 0}}, {{7, 0}}});
  const auto e = ClassicalMds(m, 2);
  EXPECT_EQ(e.axes, 1);
  EXPECT_TRUE(e.deficient);
  EXPECT_LT(MaxDistanceError(m, e), 1e-9);
}

// Permuting the labels permutes the coordinates (up to the fixed sign rule,
// distances agree exactly).
TEST(Mds, RelabelingInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int iter = 0; iter < 30; ++iter) {
    Points pts(12);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto m = FromPoints(pts);
    std::vector<std::size_t> perm(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Points shuffled(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = pts[perm[i]];
    const auto a = ClassicalMds(m);
    const auto b = ClassicalMds(FromPoints(shuffled));
    EXPECT_NEAR(a.stress, b.stress, 1e-9);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.eigenvalues[static_cast<std::size_t>(k)], b.eigenvalues[static_cast<std::size_t>(k)], 1e-9);
  }
}

TEST(Mds, Deterministic) {
  const auto m = FromPoints({{{0.1, 0.2}}, {{0.9, 0.4}}, {{0.3, 0.8}}, {{0.5, 0.5}}});
  EXPECT_EQ(EmbeddingToJson(ClassicalMds(m)).dump(), EmbeddingToJson(ClassicalMds(m)).dump());
  EXPECT_EQ(EmbeddingToCsv(ClassicalMds(m)), EmbeddingToCsv(ClassicalMds(m)));
}

TEST(Mds, RejectsBadInput) {
  DissimilarityMatrix asym{{"a", "b"}, {{0.0, 0.5}, {0.4, 0.0}}};
  EXPECT_EQ(CodeOf([&] { ClassicalMds(asym); }), Errc::kSchema);
  DissimilarityMatrix diag{{"a", "b"}, {{0.1, 0.5}, {0.5, 0.0}}};
  EXPECT_EQ(CodeOf([&] { ClassicalMds(diag); }), Errc::kSchema);
  DissimilarityMatrix neg{{"a", "b"}, {{0.0, -0.5}, {-0.5, 0.0}}};
  EXPECT_EQ(CodeOf([&] { ClassicalMds(neg); }), Errc::kSchema);
  DissimilarityMatrix ragged{{"a", "b"}, {{0.0, 0.5}, {0.5}}};
  EXPECT_EQ(CodeOf([&] { ClassicalMds(ragged); }), Errc::kSchema);
  DissimilarityMatrix ok{{"a", "b"}, {{0.0, 0.5}, {0.5, 0.0}}};
  EXPECT_THROW(ClassicalMds(ok, 0), Error);
}

TEST(Dissimilarity, AveragesBothOrderings) {
  std::map<std::pair<std::string, std::string>, double> s = {
      {{"a", "b"}, 0.2}, {{"b", "a"}, 0.4}, {{"a", "c"}, 1.0}, {{"c", "a"}, 0.0}, {{"b", "c"}, 0.5}, {{"c", "b"}, 0.5}};
  auto m = BuildDissimilarity(s, {"a", "b", "c"});
  EXPECT_DOUBLE_EQ(m.values[0][1], 0.3);
  EXPECT_DOUBLE_EQ(m.values[1][0], 0.3);
  EXPECT_DOUBLE_EQ(m.values[0][2], 0.5);
  EXPECT_DOUBLE_EQ(m.values[1][2], 0.5);
  EXPECT_EQ(m.values[2][2], 0.0);
  EXPECT_EQ(m.IndexOf("c"), 2u);
  EXPECT_EQ(CodeOf([&] { m.IndexOf("zzz"); }), Errc::kMissingPair);
  s.erase({"c", "b"});
  EXPECT_EQ(CodeOf([&] { BuildDissimilarity(s, {"a", "b", "c"}); }), Errc::kMissingPair);
  s[{"c", "b"}] = 1.5;
  EXPECT_EQ(CodeOf([&] { BuildDissimilarity(s, {"a", "b", "c"}); }), Errc::kOutOfRange);
}

TEST(Correlate, SignAndOracle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int iter = 0; iter < 100; ++iter) {
    Points pts(8);
    for (auto& p : pts) p = {u(rng), u(rng)};
    auto a = FromPoints(pts);
    auto same = a;
    for (auto& row : same.values) {
      for (auto& v : row) v = 3.0 * v;
    }
    EXPECT_NEAR(Correlate(a, same), 1.0, 1e-12);
    auto flipped = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) flipped.values[i][j] = i == j ? 0.0 : 10.0 - a.values[i][j];
    }
    EXPECT_NEAR(Correlate(a, flipped), -1.0, 1e-12);

    Points other(8);
    for (auto& p : other) p = {u(rng), u(rng)};
    auto b = FromPoints(other);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        x.push_back(a.values[i][j]);
        y.push_back(b.values[i][j]);
      }
    }
    EXPECT_NEAR(Correlate(a, b), oracle::TwoPassPearson(x, y), 1e-12);
  }
}

TEST(Correlate, LooksUpByLabel) {
  DissimilarityMatrix a{{"x", "y", "z"}, {{0, 1, 2}, {1, 0, 3}, {2, 3, 0}}};
  DissimilarityMatrix b{{"z", "x", "y"}, {{0, 2, 3}, {2, 0, 1}, {3, 1, 0}}};
  EXPECT_NEAR(Correlate(a, b), 1.0, 1e-12);
  DissimilarityMatrix missing{{"x", "y"}, {{0, 1}, {1, 0}}};
  EXPECT_EQ(CodeOf([&] { Correlate(a, missing); }), Errc::kMissingPair);
  DissimilarityMatrix flat{{"x", "y", "z"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
  EXPECT_EQ(CodeOf([&] { Correlate(a, flat); }), Errc::kZeroVariance);
  DissimilarityMatrix two{{"x", "y"}, {{0, 1}, {1, 0}}};
  EXPECT_EQ(CodeOf([&] { Correlate(two, two); }), Errc::kInsufficientData);
}

TEST(DistanceCsv, RoundTripAndErrors) {
  DissimilarityMatrix a{{"car", "zebra", "bus"}, {{0, 0.25, 0.5}, {0.25, 0, 0.75}, {0.5, 0.75, 0}}};
  const auto text = DistanceMatrixToCsv(a, "test matrix");
  auto back = ParseDistanceCsv(text);
  EXPECT_EQ(back.labels, a.labels);
  EXPECT_EQ(back.values, a.values);
  EXPECT_EQ(CodeOf([] { ParseDistanceCsv(",a,b\nb,0,1\na,1,0\n"); }), Errc::kSchema);
  EXPECT_EQ(CodeOf([] { ParseDistanceCsv(",a,b\na,0,x\nb,1,0\n"); }), Errc::kSchema);
  EXPECT_EQ(CodeOf([] { ParseDistanceCsv(",a,b\na,0,1\n"); }), Errc::kSchema);
  EXPECT_EQ(CodeOf([] { ParseDistanceCsv(",a,b\na,0,1\nb,2,0\n"); }), Errc::kSchema);
  EXPECT_EQ(CodeOf([] { ParseDistanceCsv(""); }), Errc::kSchema);
}

}  // namespace
}  // namespace tiam
