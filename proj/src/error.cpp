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

#include "error.hpp"

namespace tiam {

const char* ErrcName(Errc code) {
  switch (code) {
    case Errc::kTemplateInvalid: return "template_invalid";
    case Errc::kAssignmentRejected: return "assignment_rejected";
    case Errc::kInfeasible: return "infeasible";
    case Errc::kSchema: return "schema";
    case Errc::kUnresolvedPrompt: return "unresolved_prompt";
    case Errc::kRleMismatch: return "rle_mismatch";
    case Errc::kEmptyMask: return "empty_mask";
    case Errc::kDimensionMismatch: return "dimension_mismatch";
    case Errc::kEmptyInput: return "empty_input";
    case Errc::kInsufficientData: return "insufficient_data";
    case Errc::kOutOfRange: return "out_of_range";
    case Errc::kZeroVariance: return "zero_variance";
    case Errc::kMissingPair: return "missing_pair";
    case Errc::kIo: return "io";
  }
  return "unknown";
}

}  // namespace tiam
