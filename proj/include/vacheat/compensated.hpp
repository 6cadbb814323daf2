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

#include <cmath>

namespace vacheat {

// Neumaier's variant of Kahan summation: also safe when an addend is larger
// in magnitude than the running sum.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  CompensatedSum& operator+=(double value) {
    const double t = sum + value;
    if (std::abs(sum) >= std::abs(value)) {
      compensation += (sum - t) + value;
    } else {
      compensation += (value - t) + sum;
    }
    sum = t;
    return *this;
  }

  double value() const { return sum + compensation; }
};

}  // namespace vacheat
