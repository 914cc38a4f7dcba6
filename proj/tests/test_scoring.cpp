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

#include <random>

#include "dataset.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "scoring.hpp"
#include "scoring_fixture.hpp"
#include "test_support.hpp"

namespace tiam {
namespace {

using testing::ShippedPalette;

TEST(Fixture, EveryCaseMatches) {
  const auto cases = testing::BuildScoringFixture();
  ASSERT_GE(cases.size(), 40u);
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    const auto outcome = ScoreImage(c.prompt, PrepareRecord(c.record, {}), ShippedPalette());
    EXPECT_EQ(outcome.success, c.success);
    EXPECT_EQ(outcome.position_presence, c.presence);
    EXPECT_EQ(outcome.position_binding, c.binding);
    EXPECT_TRUE(outcome.DiagnosticsAgree());
  }
}

TEST(Fixture, CoversEveryCategory) {
  std::map<std::string, int> seen;
  for (const auto& c : testing::BuildScoringFixture()) ++seen[c.category];
  for (const char* cat : {"neglect", "confidence", "dedup", "binding", "swap", "leak", "matching"}) {
    EXPECT_GT(seen[cat], 0) << cat;
  }
}

ImageRecord RandomRecord(std::mt19937_64& rng, const PromptInstance& prompt) {
  const auto& rgb = testing::RepresentativeRgb();
  std::vector<std::string> labels;
  for (const auto& gt : prompt.ground_truth) labels.push_back(gt.object);
  labels.push_back("distractor");
  std::vector<Rgb8> colors;
  for (const auto& [name, c] : rgb) colors.push_back(c);

  std::uniform_int_distribution<int> n_dets(0, 5);
  std::uniform_int_distribution<std::size_t> pick_label(0, labels.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_color(0, colors.size() - 1);
  std::uniform_int_distribution<std::size_t> split(0, 10);

  ImageRecord record;
  record.prompt_id = prompt.prompt_id;
  record.seed = 1;
  record.image_width = 60;
  record.image_height = 10;
  const int count = n_dets(rng);
  for (int d = 0; d < count; ++d) {
    auto mask = testing::RectMask(60, 10, 10 * d, 0, 10 * d + 10, 1);
    // 10 pixels: the first color on `first` of them.
    record.detections.push_back(testing::MakeSplitDetection(d, labels[pick_label(rng)], 0.9, mask, split(rng),
                                                            colors[pick_color(rng)], colors[pick_color(rng)]));
  }
  return record;
}

// Success from the matching equals an exhaustive search over injective
// assignments, and success equals the AND of the per-position diagnostics.
TEST(Matching, AgreesWithBruteForce) {
  std::mt19937_64 rng(8675309);
  for (const char* name : {"colored_2", "objects_3", "pairwise_example", "colored_1"}) {
    auto dataset = PromptDataset::Generate(LoadTemplate(testing::TemplatePath(name)));
    std::uniform_int_distribution<std::size_t> pick(0, dataset.prompts().size() - 1);
    int successes = 0;
    for (int iter = 0; iter < 1500; ++iter) {
      const auto& prompt = dataset.prompts()[pick(rng)];
      const auto record = RandomRecord(rng, prompt);
      const auto outcome = ScoreImage(prompt, record, ShippedPalette());
      ASSERT_EQ(outcome.success, oracle::BruteForceSuccess(prompt, record, ShippedPalette(), 0.40))
          << name << " iteration " << iter;
      ASSERT_TRUE(outcome.DiagnosticsAgree());
      successes += outcome.success ? 1 : 0;
    }
    EXPECT_GT(successes, 0) << name;
  }
}

// Renumbering detections while keeping their relative id order, or reversing
// the list order, does not change the verdicts.
TEST(Matching, InvariantToDetectionListOrder) {
  std::mt19937_64 rng(77);
  auto dataset = PromptDataset::Generate(LoadTemplate(testing::TemplatePath("colored_2")));
  for (int iter = 0; iter < 300; ++iter) {
    const auto& prompt = dataset.prompts()[static_cast<std::size_t>(iter) % dataset.prompts().size()];
    auto record = RandomRecord(rng, prompt);
    auto reversed = record;
    std::reverse(reversed.detections.begin(), reversed.detections.end());
    const auto a = ScoreImage(prompt, record, ShippedPalette());
    const auto b = ScoreImage(prompt, reversed, ShippedPalette());
    EXPECT_EQ(a, b);
  }
}

TEST(Scoring, RejectsMismatchedPrompt) {
  const auto cases = testing::BuildScoringFixture();
  auto record = cases[0].record;
  record.prompt_id = "other";
  EXPECT_THROW(ScoreImage(cases[0].prompt, record, ShippedPalette()), Error);
}

TEST(Scoring, AuditListsUnmatchedDetections) {
  auto dataset = PromptDataset::Generate(LoadTemplate(testing::TemplatePath("colored_1")));
  const auto& prompt = dataset.prompts()[0];
  auto record = testing::SynthesizeRecord(prompt, 3, {{true, true}});
  const Rgb8 target = testing::RepresentativeRgb().at(*prompt.ground_truth[0].attribute);
  record.detections.push_back(
      testing::MakeDetection(99, "zebra", 0.9, testing::RectMask(testing::kSynthWidth, testing::kSynthHeight, 20, 0, 24, 2),
                             target));
  const auto plain = ScoreImage(prompt, record, ShippedPalette());
  EXPECT_TRUE(plain.audit.empty());
  const auto audited = ScoreImage(prompt, record, ShippedPalette(), {}, true);
  ASSERT_EQ(audited.audit.size(), 1u);
  EXPECT_EQ(audited.audit[0].detection_id, 99);
  EXPECT_EQ(audited.audit[0].label, "zebra");
  EXPECT_DOUBLE_EQ(audited.audit[0].proportion, 1.0);
  EXPECT_EQ(audited.success, plain.success);
}

// A low-confidence detection of another label that duplicates the requested
// object's mask hides it until the threshold rises past the impostor, so
// success is not monotone in the confidence threshold once such overlaps exist.
TEST(Scoring, ThresholdSweepCounterexample) {
  auto dataset = PromptDataset::Generate(LoadTemplate(testing::TemplatePath("objects_1")));
  const auto& prompt = dataset.prompts()[0];
  auto record = testing::SynthesizeRecord(prompt, 1, {{true, true}});
  auto impostor = record.detections[0];
  impostor.id = 7;
  impostor.label = prompt.ground_truth[0].object == "car" ? "zebra" : "car";
  impostor.confidence = 0.3;
  record.detections.push_back(impostor);
  ScoringThresholds low;
  ScoringThresholds high;
  high.confidence = 0.5;
  EXPECT_FALSE(ScoreImage(prompt, PrepareRecord(record, low), ShippedPalette()).success);
  EXPECT_TRUE(ScoreImage(prompt, PrepareRecord(record, high), ShippedPalette()).success);
}

class Corpus : public ::testing::Test {
 protected:
  void SetUp() override {
    dataset_ = std::make_unique<PromptDataset>(
        PromptDataset::Generate(LoadTemplate(testing::TemplatePath("colored_2"))));
    auto planted = testing::PlantCorpus(*dataset_, testing::SeedRange(0, 4), 5,
                                        [](const PromptInstance& p, std::int64_t, std::mt19937_64& rng) {
                                          std::bernoulli_distribution coin(0.7);
                                          std::vector<testing::PlannedSlot> plan(p.ground_truth.size());
                                          for (auto& s : plan) s = {coin(rng), coin(rng)};
                                          return plan;
                                        });
    records_ = std::move(planted.records);
  }
  std::unique_ptr<PromptDataset> dataset_;
  std::vector<ImageRecord> records_;
};

TEST_F(Corpus, ThreadCountDoesNotChangeResults) {
  const auto one = ScoreCorpus(*dataset_, records_, ShippedPalette(), {}, 1);
  auto shuffled = records_;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
  for (unsigned threads : {2u, 4u, 7u}) {
    const auto many = ScoreCorpus(*dataset_, shuffled, ShippedPalette(), {}, threads);
    EXPECT_EQ(many.outcomes, one.outcomes);
    EXPECT_EQ(WriteOutcomeStream(many.outcomes), WriteOutcomeStream(one.outcomes));
  }
  EXPECT_EQ(one.outcomes.size(), 600u * 4u);
  EXPECT_TRUE(one.coverage.complete());
  EXPECT_EQ(one.coverage.expected, 2400u);
  EXPECT_EQ(one.coverage.seeds, (std::vector<std::int64_t>{0, 1, 2, 3}));
}

TEST_F(Corpus, DuplicatesAndMissing) {
  auto records = records_;
  records.push_back(records_[10]);
  records.push_back(records_[10]);
  records.erase(records.begin());
  const auto score = ScoreCorpus(*dataset_, records, ShippedPalette());
  EXPECT_EQ(score.records_in, records.size());
  EXPECT_EQ(score.rejected.size(), 2u);
  EXPECT_EQ(score.outcomes.size() + score.rejected.size(), score.records_in);
  ASSERT_EQ(score.coverage.missing.size(), 1u);
  EXPECT_EQ(score.coverage.missing[0].prompt_id, records_[0].prompt_id);
  EXPECT_EQ(score.coverage.missing[0].seed, records_[0].seed);
}

TEST_F(Corpus, UnknownPrompt) {
  auto records = records_;
  records[5].prompt_id = "missing";
  try {
    ScoreCorpus(*dataset_, records, ShippedPalette(), {}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnresolvedPrompt);
  }
}

TEST_F(Corpus, OutcomeStreamRoundTrip) {
  auto score = ScoreCorpus(*dataset_, records_, ShippedPalette(), {}, 2, true);
  const auto text = WriteOutcomeStream(score.outcomes);
  EXPECT_EQ(ReadOutcomeStream(text), score.outcomes);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(score.outcomes.size()));
  EXPECT_THROW(ReadOutcomeStream("{\"prompt_id\": 3}\n"), Error);
}

}  // namespace
}  // namespace tiam
