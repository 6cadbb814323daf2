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

// Steady state inside the zero-coherence sector. With q = N_ket - N_bra the
// generator conserves q, and the q = 0 sector is block tridiagonal in the
// total excitation N: block N couples to N - 1 through the thermal pumping
// b^+ rho b and to N + 1 through the decay b rho b^+.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vacheat/lindblad.hpp"

namespace vacheat::detail {

struct SectorSolve {
  std::vector<CMatrix> blocks;  // N = 0 .. dim1 + dim2 - 2, unit total trace
  std::vector<int> j_low;       // first mode-1 index of each block
  int iterations = 0;
  std::string method;
};

SectorSolve solve_zero_coherence_sector(const ExchangeRates& rates, FockTruncation trunc,
                                        const SteadyStateOptions& options);

}  // namespace vacheat::detail
