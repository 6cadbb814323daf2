// Copyright 2026 The vacheat Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace vacheat {

// Every failure the library reports carries one of these codes so callers
// (the CLI in particular) can map them to exit statuses without parsing text.
enum class ErrorCode {
  InvalidArgument,
  ZeroModes,
  ResonantPole,
  NonDegenerateMirrors,
  OutOfDomain,
  QuadratureNonConvergence,
  DimensionCap,
  TruncationLeak,
  NonUniqueSteadyState,
  NonConvergence,
  ZeroPopulation,
  DegenerateRates,
  SingularSystem,
  NonDegenerateShifts,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by a numerical method running out of budget rather
// than by a wrong answer or bad input.
bool is_nonconvergence(ErrorCode code) noexcept;

}  // namespace vacheat
