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

#include <optional>
#include <string>
#include <vector>

#include "vacheat/multimode.hpp"
#include "vacheat/params.hpp"

namespace vacheat {

// User-facing mirror description; frequencies in Hz as written in the file.
struct MirrorSpec {
  double mass_kg = 0.3e-18;
  double freq_hz = 50e6;
  double gamma_rad_per_s = 1e-6 * 2.0 * 3.14159265358979323846 * 50e6;
  double T_bath_K = 0.0;

  MirrorParams params() const;
};

struct CavitySpec {
  double l0_m = 1e-6;
  std::optional<double> cutoff_freq_hz;
  std::optional<int> n_cut = 130;

  CavityConfig config() const;
};

struct SolverSettings {
  SumMode mode = SumMode::beta_zero;
  int dimension_cap = 4096;
  double quadrature_rel_tol = 1e-10;
  double steady_residual_tol = 1e-10;
  double cross_solver_rel_tol = 1e-6;
  double leak_threshold = 1e-6;
  int threads = 0;  // 0: hardware concurrency
};

enum class SweepVariable { l0, n_cut, xi_over_gamma, T1, T2 };
const char* to_string(SweepVariable v) noexcept;  // the column name, unit included
SweepVariable sweep_variable_from_string(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::l0;
  double start = 1e-7;
  double stop = 1e-4;
  int points = 61;
  bool log_scale = true;

  void validate() const;
  std::vector<double> values() const;
};

struct RunConfig {
  PhysicalConstants constants = PhysicalConstants::codata();
  MirrorSpec mirror1{0.3e-18, 50e6, 1e-6 * 2.0 * 3.14159265358979323846 * 50e6, 15.0};
  MirrorSpec mirror2{0.3e-18, 50e6, 1e-6 * 2.0 * 3.14159265358979323846 * 50e6, 3.0};
  CavitySpec cavity;
  SolverSettings solver;
  std::optional<SweepSpec> sweep;
  std::string output_dir = ".";

  void validate() const;
};

// All parse and validation problems surface as ErrorCode::ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

}  // namespace vacheat
