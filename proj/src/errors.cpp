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

#include "vacheat/errors.hpp"

namespace vacheat {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroModes: return "ZeroModes";
    case ErrorCode::ResonantPole: return "ResonantPole";
    case ErrorCode::NonDegenerateMirrors: return "NonDegenerateMirrors";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::TruncationLeak: return "TruncationLeak";
    case ErrorCode::NonUniqueSteadyState: return "NonUniqueSteadyState";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroPopulation: return "ZeroPopulation";
    case ErrorCode::DegenerateRates: return "DegenerateRates";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonDegenerateShifts: return "NonDegenerateShifts";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool is_nonconvergence(ErrorCode code) noexcept {
  return code == ErrorCode::QuadratureNonConvergence || code == ErrorCode::NonConvergence;
}

}  // namespace vacheat
