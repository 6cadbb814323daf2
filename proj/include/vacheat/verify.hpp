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

// Self-check driver behind the `verify` subcommand.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vacheat/config.hpp"
#include "vacheat/lindblad.hpp"
#include "vacheat/moments.hpp"

namespace vacheat {

enum class CheckStatus { pass, fail, nonconvergence };
const char* to_string(CheckStatus s) noexcept;

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double metric = 0.0;     // worst observed error
  double tolerance = 0.0;
  int cases = 0;
  std::string detail;
};

struct VerifyOptions {
  bool flip_sigma2_sign = false;             // mutation hook for the ratio checks
  std::optional<double> quadrature_rel_tol;  // overrides the config value
  bool lindblad = true;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  // 0 all pass, 1 any failure, else 3 if something did not converge.
  int exit_code() const;
  std::string to_json() const;
  std::string to_log() const;
};

VerifyReport run_verify(const RunConfig& config, const VerifyOptions& options = {});

// Lindblad steady state against the moment closed forms at one rate point.
struct SolverComparison {
  explicit SolverComparison(SteadyStateResult s) : steady(std::move(s)) {}

  SteadyStateResult steady;
  SecondMoments second_numeric, second_closed;
  FourthMoments fourth_numeric, fourth_closed;
  std::array<double, 2> fourth_diag_closed{};
  HeatFlux flux_numeric, flux_closed;
  double second_rel = 0.0;  // max over n1, n2, <b1+ b2> of |diff| / |closed|
  double fourth_rel = 0.0;  // diagonal terms vs the closed form, the rest vs max |closed|
  double flux_rel = 0.0;
};

SolverComparison compare_solvers(const ExchangeRates& rates, double omega_m,
                                 const SteadyStateOptions& options = {});

}  // namespace vacheat
