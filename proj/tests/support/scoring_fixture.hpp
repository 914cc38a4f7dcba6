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

// Hand-built image records with their expected outcomes written out by hand.

#ifndef TIAM_TESTS_SUPPORT_SCORING_FIXTURE_HPP_
#define TIAM_TESTS_SUPPORT_SCORING_FIXTURE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ingestion.hpp"
#include "prompt_engine.hpp"

namespace tiam::testing {

struct ScoringCase {
  std::string name;
  std::string category;  // neglect, confidence, dedup, binding, swap, leak, matching
  PromptInstance prompt;
  ImageRecord record;
  bool success = false;
  std::vector<bool> presence;
  std::vector<std::optional<bool>> binding;
};

std::vector<ScoringCase> BuildScoringFixture();

}  // namespace tiam::testing

#endif  // TIAM_TESTS_SUPPORT_SCORING_FIXTURE_HPP_
