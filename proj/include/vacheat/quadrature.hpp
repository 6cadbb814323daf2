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

// Adaptive 7/15-point Gauss-Kronrod quadrature on a fixed set of panels.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vacheat {

struct QuadratureOptions {
  double rel_tol = 1e-10;  // relative to the integral of |f|
  double abs_tol = 0.0;
  int max_evaluations = 200'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;    // per panel max(|K15 - G7|, 50 eps * L1), summed
  double l1_norm = 0.0;  // integral of |f|, the scale for rel_tol
  int evaluations = 0;
};

// Integrates f over [breakpoints.front(), breakpoints.back()]. Every interval
// between consecutive breakpoints starts as its own panel; the panel with the
// largest error estimate is bisected until the total estimate meets the
// tolerance. Throws QuadratureNonConvergence when the budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

// n + 1 evenly spaced breakpoints over [a, b].
std::vector<double> uniform_breakpoints(double a, double b, int panels);

}  // namespace vacheat
