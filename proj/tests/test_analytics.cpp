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

#include <algorithm>
#include <cmath>
#include <random>

#include "analytics.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "scoring.hpp"
#include "test_support.hpp"

namespace tiam {
namespace {

Outcome Make(std::string id, std::int64_t seed, bool success, std::vector<bool> presence = {true},
             std::vector<std::optional<bool>> binding = {std::nullopt}) {
  Outcome o;
  o.prompt_id = std::move(id);
  o.seed = seed;
  o.success = success;
  o.position_presence = std::move(presence);
  o.position_binding = std::move(binding);
  o.matched_detection_ids.resize(o.position_presence.size());
  return o;
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

std::vector<Outcome> RandomOutcomes(std::mt19937_64& rng, int prompts, int seeds, double p_keep) {
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution keep(p_keep);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  std::vector<double> seed_rate(static_cast<std::size_t>(seeds));
  for (auto& r : seed_rate) r = rate(rng);
  std::vector<Outcome> out;
  for (int p = 0; p < prompts; ++p) {
    for (int s = 0; s < seeds; ++s) {
      if (!keep(rng)) continue;
      std::bernoulli_distribution hit(seed_rate[static_cast<std::size_t>(s)]);
      const bool a = hit(rng), b = coin(rng);
      out.push_back(Make("p" + std::to_string(p), 100 + s, a && b, {a, b}, {a, std::nullopt}));
    }
  }
  return out;
}

TEST(Tiam, Examples) {
  std::vector<Outcome> o = {Make("a", 1, true), Make("a", 2, false), Make("b", 1, true), Make("b", 2, false)};
  EXPECT_DOUBLE_EQ(ComputeTiam(o), 0.5);
  std::vector<Outcome> all = {Make("a", 1, true), Make("a", 2, true)};
  EXPECT_DOUBLE_EQ(ComputeTiam(all), 1.0);
  EXPECT_EQ(CodeOf([] { ComputeTiam({}); }), Errc::kEmptyInput);
}

TEST(Tiam, ObjectOnlyIgnoresBinding) {
  std::vector<Outcome> o = {Make("a", 1, false, {true, true}, {false, std::nullopt}),
                            Make("a", 2, false, {true, false}, {true, std::nullopt})};
  EXPECT_DOUBLE_EQ(ComputeObjectOnlyTiam(o), 0.5);
  EXPECT_DOUBLE_EQ(ComputeTiam(o), 0.0);
}

// Global TIAM equals the count-weighted mean of the per-prompt and the
// per-seed values.
TEST(Tiam, WeightedMeanInvariants) {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 200; ++iter) {
    auto outcomes = RandomOutcomes(rng, 1 + iter % 9, 1 + iter % 7, 0.8);
    if (outcomes.empty()) continue;
    const double global = ComputeTiam(outcomes);
    double by_prompt = 0.0;
    std::size_t n = 0;
    for (const auto& [id, r] : PerPromptTiam(outcomes)) {
      by_prompt += *r.value() * static_cast<double>(r.denominator);
      n += r.denominator;
    }
    EXPECT_EQ(n, outcomes.size());
    EXPECT_NEAR(by_prompt / static_cast<double>(n), global, 1e-12);
    double by_seed = 0.0;
    for (const auto& p : PerSeedTiam(outcomes)) by_seed += p.raw_tiam * static_cast<double>(p.n_outcomes);
    EXPECT_NEAR(by_seed / static_cast<double>(outcomes.size()), global, 1e-12);
  }
}

TEST(PerSeed, Examples) {
  std::vector<Outcome> o = {Make("a", 7, true), Make("b", 7, true), Make("a", 3, false), Make("b", 3, false)};
  auto profiles = PerSeedTiam(o);
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles[0].seed, 7);
  EXPECT_DOUBLE_EQ(profiles[0].raw_tiam, 1.0);
  EXPECT_EQ(profiles[0].rank, 1);
  EXPECT_EQ(profiles[1].seed, 3);
  EXPECT_DOUBLE_EQ(profiles[1].raw_tiam, 0.0);
  EXPECT_EQ(profiles[1].rank, 2);
  EXPECT_DOUBLE_EQ(*profiles[0].z_score, 1.0);
  EXPECT_DOUBLE_EQ(*profiles[1].z_score, -1.0);
}

TEST(PerSeed, DegenerateZScores) {
  auto single = PerSeedTiam(std::vector<Outcome>{Make("a", 1, true), Make("b", 1, false)});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_FALSE(single[0].z_score);
  auto flat = PerSeedTiam(std::vector<Outcome>{Make("a", 1, true), Make("a", 2, true), Make("a", 3, true)});
  for (const auto& p : flat) EXPECT_FALSE(p.z_score);
  EXPECT_EQ(flat[0].seed, 1);
  EXPECT_EQ(flat[2].seed, 3);
}

TEST(PerSeed, ZScoreProperties) {
  std::mt19937_64 rng(55);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    auto outcomes = RandomOutcomes(rng, 5 + iter % 11, 2 + iter % 13, 1.0);
    auto profiles = PerSeedTiam(outcomes);
    if (!profiles[0].z_score) continue;
    ++checked;
    double mean = 0.0, sq = 0.0;
    for (const auto& p : profiles) mean += *p.z_score;
    mean /= static_cast<double>(profiles.size());
    for (const auto& p : profiles) sq += (*p.z_score - mean) * (*p.z_score - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(sq / static_cast<double>(profiles.size()), 1.0, 1e-9);
    for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
      EXPECT_EQ(profiles[i].rank + 1, profiles[i + 1].rank);
      EXPECT_GE(*profiles[i].z_score, *profiles[i + 1].z_score);
      EXPECT_GE(profiles[i].raw_tiam, profiles[i + 1].raw_tiam);
      if (profiles[i].raw_tiam == profiles[i + 1].raw_tiam) {
        EXPECT_LT(profiles[i].seed, profiles[i + 1].seed);
      }
    }
  }
  EXPECT_GT(checked, 150);
}

TEST(BoxStats, MatchesDirectComputation) {
  std::mt19937_64 rng(64);
  auto dataset = PromptDataset::Generate(LoadTemplate(testing::TemplatePath("coco24_two_objects")));
  std::uniform_real_distribution<double> rate(0.1, 0.9);
  std::vector<Outcome> outcomes;
  for (int s = 0; s < 64; ++s) {
    std::bernoulli_distribution hit(rate(rng));
    for (const auto& p : dataset.prompts()) outcomes.push_back(Make(p.prompt_id, s, hit(rng), {true, true}, {std::nullopt, std::nullopt}));
  }
  auto profiles = PerSeedTiam(outcomes);
  auto stats = SeedBoxStats(profiles);
  std::vector<double> v;
  for (int s = 0; s < 64; ++s) {
    int hits = 0;
    for (std::size_t i = 0; i < 552; ++i) hits += outcomes[static_cast<std::size_t>(s) * 552 + i].success ? 1 : 0;
    v.push_back(hits / 552.0);
  }
  std::sort(v.begin(), v.end());
  // Linear interpolation between order statistics, 64 values.
  auto q = [&](double f) {
    const double pos = f * 63.0;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < v.size() ? v[lo] + frac * (v[lo + 1] - v[lo]) : v[lo];
  };
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= 64.0;
  EXPECT_DOUBLE_EQ(stats.min, v.front());
  EXPECT_DOUBLE_EQ(stats.max, v.back());
  EXPECT_NEAR(stats.q1, q(0.25), 1e-12);
  EXPECT_NEAR(stats.median, (v[31] + v[32]) / 2.0, 1e-12);
  EXPECT_NEAR(stats.q3, q(0.75), 1e-12);
  EXPECT_NEAR(stats.mean, mean, 1e-12);
  EXPECT_EQ(CodeOf([] { SeedBoxStats({}); }), Errc::kEmptyInput);
}

TEST(Occurrence, Examples) {
  std::vector<Outcome> o = {Make("a", 1, false, {true, false}, {std::nullopt, std::nullopt}),
                            Make("a", 2, true, {true, true}, {std::nullopt, std::nullopt})};
  EXPECT_EQ(OccurrenceByPosition(o), (std::vector<double>{1.0, 0.5}));
  o.push_back(Make("b", 1, true));
  EXPECT_EQ(CodeOf([&] { OccurrenceByPosition(o); }), Errc::kDimensionMismatch);
}

TEST(Binding, Examples) {
  std::vector<Outcome> o = {Make("a", 1, true, {true, true}, {true, std::nullopt}),
                            Make("a", 2, false, {true, false}, {false, std::nullopt}),
                            Make("a", 3, false, {false, true}, {false, std::nullopt})};
  auto rates = BindingSuccessRate(o);
  ASSERT_EQ(rates.size(), 2u);
  EXPECT_EQ(rates[0].numerator, 1u);
  EXPECT_EQ(rates[0].denominator, 2u);
  EXPECT_DOUBLE_EQ(*rates[0].value(), 0.5);
  EXPECT_FALSE(rates[1].value());
}

class WithDataset : public ::testing::Test {
 protected:
  void SetUp() override {
    dataset_ = std::make_unique<PromptDataset>(
        PromptDataset::Generate(LoadTemplate(testing::TemplatePath("colored_2"))));
  }
  std::unique_ptr<PromptDataset> dataset_;
};

TEST_F(WithDataset, SlicesCountEveryRequestedSlot) {
  const auto& p = dataset_->prompts()[0];
  const auto c0 = *p.ground_truth[0].attribute, c1 = *p.ground_truth[1].attribute;
  const auto o0 = p.ground_truth[0].object, o1 = p.ground_truth[1].object;
  std::vector<Outcome> o = {Make(p.prompt_id, 1, false, {true, false}, {true, false}),
                            Make(p.prompt_id, 2, true, {true, true}, {true, true})};
  auto by_color = BindingSuccessByColor(o, *dataset_);
  EXPECT_EQ(by_color.at({1, c0}).numerator, 2u);
  EXPECT_EQ(by_color.at({1, c0}).denominator, 2u);
  EXPECT_EQ(by_color.at({2, c1}).numerator, 1u);
  EXPECT_EQ(by_color.at({2, c1}).denominator, 1u);
  auto pco = PerColorObject(o, *dataset_);
  EXPECT_EQ(pco.at({c1, o1}).numerator, 1u);
  EXPECT_EQ(pco.at({c1, o1}).denominator, 2u);
  EXPECT_EQ(pco.at({c0, o0}).numerator, 2u);
  auto by_object = TiamByObject(o, *dataset_);
  EXPECT_EQ(by_object.at(o0).denominator, 2u);
  EXPECT_EQ(by_object.at(o0).numerator, 1u);
  auto pairs = OrderedPairTiam(o, *dataset_);
  EXPECT_DOUBLE_EQ(*pairs.at({o0, o1}).value(), 0.5);
  auto bad = o;
  bad[0].prompt_id = "unknown";
  EXPECT_THROW(TiamByColor(bad, *dataset_), Error);
}

TEST_F(WithDataset, ReportFractionsInRangeAndNullsSerialize) {
  auto planted = testing::PlantCorpus(*dataset_, testing::SeedRange(0, 3), 9,
                                      [](const PromptInstance& p, std::int64_t, std::mt19937_64& r) {
                                        std::bernoulli_distribution coin(0.6);
                                        std::vector<testing::PlannedSlot> plan(p.ground_truth.size());
                                        for (auto& s : plan) s = {coin(r), coin(r)};
                                        return plan;
                                      });
  auto score = ScoreCorpus(*dataset_, planted.records, testing::ShippedPalette());
  auto report = BuildReport(score.outcomes, *dataset_, "m");
  auto in_range = [](double v) { return v >= 0.0 && v <= 1.0; };
  EXPECT_TRUE(in_range(report.global_tiam));
  EXPECT_EQ(report.n_images_per_prompt, 3);
  for (const auto& [k, r] : report.per_prompt) EXPECT_LE(r.numerator, r.denominator);
  for (const auto& r : report.binding_success_rate) EXPECT_LE(r.numerator, r.denominator);
  for (const auto& [k, r] : report.per_color_object) EXPECT_LE(r.numerator, r.denominator);
  for (double v : report.per_position_occurrence) EXPECT_TRUE(in_range(v));
  EXPECT_DOUBLE_EQ(report.convergence.back().second, report.global_tiam);
  auto j = ReportToJson(report);
  EXPECT_EQ(j["model_name"], "m");
  EXPECT_TRUE(j.contains("per_seed"));

  std::vector<Outcome> one = {Make(dataset_->prompts()[0].prompt_id, 1, false, {false, false}, {false, false})};
  auto sparse = ReportToJson(BuildReport(one, *dataset_));
  EXPECT_TRUE(sparse["binding_success_rate"][0].is_null() ||
              (sparse["binding_success_rate"][0].is_object() && sparse["binding_success_rate"][0]["value"].is_null()))
      << sparse["binding_success_rate"].dump();
}

TEST(Convergence, Examples) {
  std::vector<Outcome> flat;
  for (int s = 0; s < 4; ++s) {
    flat.push_back(Make("a", s, true));
    flat.push_back(Make("b", s, true));
  }
  for (const auto& [n, v] : ConvergenceCurve(flat, 4)) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(CodeOf([&] { ConvergenceCurve(flat, 5); }), Errc::kInsufficientData);
  EXPECT_EQ(CodeOf([&] { ConvergenceCurve(flat, 0); }), Errc::kOutOfRange);
}

// Each prefix point equals TIAM restricted to the n smallest seeds per prompt.
TEST(Convergence, PrefixProperty) {
  std::mt19937_64 rng(808);
  for (int iter = 0; iter < 50; ++iter) {
    auto outcomes = RandomOutcomes(rng, 3 + iter % 5, 4 + iter % 6, 1.0);
    std::shuffle(outcomes.begin(), outcomes.end(), rng);
    const int max_n = MinSeedsPerPrompt(outcomes);
    auto curve = ConvergenceCurve(outcomes, max_n);
    ASSERT_EQ(curve.size(), static_cast<std::size_t>(max_n));
    for (const auto& [n, v] : curve) {
      std::vector<Outcome> prefix;
      for (const auto& o : outcomes) {
        if (o.seed < 100 + n) prefix.push_back(o);
      }
      EXPECT_NEAR(v, ComputeTiam(prefix), 1e-12);
    }
    EXPECT_NEAR(curve.back().second, ComputeTiam(outcomes), 1e-12);
  }
}

TEST(SelectSeeds, Examples) {
  std::vector<Outcome> o = {Make("a", 10, true), Make("a", 20, false), Make("a", 30, true), Make("b", 30, false),
                            Make("b", 10, true), Make("b", 20, false)};
  auto profiles = PerSeedTiam(o);
  auto one = SelectSeeds(profiles, 1);
  EXPECT_EQ(one.best, (std::vector<std::int64_t>{10}));
  EXPECT_EQ(one.worst, (std::vector<std::int64_t>{20}));
  auto all = SelectSeeds(profiles, 3);
  EXPECT_EQ(all.best, (std::vector<std::int64_t>{10, 30, 20}));
  EXPECT_EQ(all.worst, (std::vector<std::int64_t>{20, 30, 10}));
  EXPECT_EQ(CodeOf([&] { SelectSeeds(profiles, 0); }), Errc::kOutOfRange);
  EXPECT_EQ(CodeOf([&] { SelectSeeds(profiles, 4); }), Errc::kOutOfRange);
}

TEST(SelectSeeds, TiesBreakBySeed) {
  std::vector<Outcome> o = {Make("a", 9, true), Make("a", 4, true), Make("a", 6, true)};
  auto sel = SelectSeeds(PerSeedTiam(o), 1);
  EXPECT_EQ(sel.best, (std::vector<std::int64_t>{4}));
  EXPECT_EQ(sel.worst, (std::vector<std::int64_t>{9}));
}

}  // namespace
}  // namespace tiam
