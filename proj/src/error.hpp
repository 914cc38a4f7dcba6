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

#ifndef TIAM_ERROR_HPP_
#define TIAM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tiam {

enum class Errc {
  kTemplateInvalid,
  kAssignmentRejected,
  kInfeasible,
  kSchema,
  kUnresolvedPrompt,
  kRleMismatch,
  kEmptyMask,
  kDimensionMismatch,
  kEmptyInput,
  kInsufficientData,
  kOutOfRange,
  kZeroVariance,
  kMissingPair,
  kIo,
};

const char* ErrcName(Errc code);

// Every failure raised by the toolkit carries a machine-readable code. The C
// API maps kIo to the I/O status and everything else to the validation status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tiam

#endif  // TIAM_ERROR_HPP_
