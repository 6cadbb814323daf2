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

#include "vacheat/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::ConfigError, what);
}

void allow_keys(const json& obj, const std::string& where, std::set<std::string> keys) {
  if (!obj.is_object()) config_error(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(where + "." + key + " must be a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) config_error(where + "." + key + " must be a string");
  return v.get<std::string>();
}

MirrorSpec parse_mirror(const json& j, const MirrorSpec& base, const std::string& where) {
  allow_keys(j, where, {"mass_kg", "freq_hz", "gamma_rad_per_s", "T_bath_K"});
  MirrorSpec m = base;
  m.mass_kg = number(j, "mass_kg", m.mass_kg, where);
  m.freq_hz = number(j, "freq_hz", m.freq_hz, where);
  m.gamma_rad_per_s = number(j, "gamma_rad_per_s", m.gamma_rad_per_s, where);
  m.T_bath_K = number(j, "T_bath_K", m.T_bath_K, where);
  return m;
}

json mirror_json(const MirrorSpec& m) {
  return {{"mass_kg", m.mass_kg},
          {"freq_hz", m.freq_hz},
          {"gamma_rad_per_s", m.gamma_rad_per_s},
          {"T_bath_K", m.T_bath_K}};
}

template <typename F>
void as_config_error(F&& check) {
  try {
    check();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(e.what());
  }
}

}  // namespace

MirrorParams MirrorSpec::params() const {
  return {mass_kg, 2.0 * std::numbers::pi * freq_hz, gamma_rad_per_s, T_bath_K};
}

CavityConfig CavitySpec::config() const {
  CavityConfig c;
  c.l0 = l0_m;
  if (cutoff_freq_hz) c.omega_cut = 2.0 * std::numbers::pi * *cutoff_freq_hz;
  c.n_cut = n_cut;
  return c;
}

const char* to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::l0: return "l0_m";
    case SweepVariable::n_cut: return "n_cut";
    case SweepVariable::xi_over_gamma: return "xi_over_gamma";
    case SweepVariable::T1: return "T1_K";
    case SweepVariable::T2: return "T2_K";
  }
  return "unknown";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  for (SweepVariable v : {SweepVariable::l0, SweepVariable::n_cut, SweepVariable::xi_over_gamma,
                          SweepVariable::T1, SweepVariable::T2}) {
    if (name == to_string(v)) return v;
  }
  config_error("unknown sweep variable '" + name + "'");
}

void SweepSpec::validate() const {
  if (points < 2) config_error("a sweep needs at least two points");
  if (!(std::isfinite(start) && std::isfinite(stop) && start > 0.0 && stop > start)) {
    config_error("sweep range must be positive with stop > start");
  }
  if (variable == SweepVariable::n_cut && start < 1.0) config_error("n_cut sweep starts at 1");
}

std::vector<double> SweepSpec::values() const {
  validate();
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double f = double(i) / (points - 1);
    out[i] = log_scale ? start * std::pow(stop / start, f) : start + (stop - start) * f;
  }
  out.front() = start;
  out.back() = stop;
  if (variable == SweepVariable::n_cut) {
    for (double& v : out) v = std::round(v);
  }
  return out;
}

void RunConfig::validate() const {
  as_config_error([&] {
    constants.validate();
    mirror1.params().validate();
    mirror2.params().validate();
    cavity.config().validate();
  });
  if (solver.dimension_cap < 4) config_error("solver.dimension_cap must be at least 4");
  if (!(solver.quadrature_rel_tol > 0.0 && solver.steady_residual_tol > 0.0 &&
        solver.cross_solver_rel_tol > 0.0 && solver.leak_threshold > 0.0)) {
    config_error("solver tolerances must be positive");
  }
  if (solver.threads < 0) config_error("solver.threads must be >= 0");
  if (sweep) sweep->validate();
  if (output_dir.empty()) config_error("output_dir must not be empty");
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  allow_keys(root, "config",
             {"constants", "mirror1", "mirror2", "cavity", "solver", "sweep", "output_dir"});
  RunConfig cfg;
  try {
    if (root.contains("constants")) {
      const json& c = root.at("constants");
      allow_keys(c, "constants", {"hbar_J_s", "k_B_J_per_K", "c_m_per_s"});
      cfg.constants.hbar = number(c, "hbar_J_s", cfg.constants.hbar, "constants");
      cfg.constants.k_B = number(c, "k_B_J_per_K", cfg.constants.k_B, "constants");
      cfg.constants.c = number(c, "c_m_per_s", cfg.constants.c, "constants");
    }
    if (root.contains("mirror1")) cfg.mirror1 = parse_mirror(root.at("mirror1"), cfg.mirror1, "mirror1");
    if (root.contains("mirror2")) cfg.mirror2 = parse_mirror(root.at("mirror2"), cfg.mirror2, "mirror2");
    if (root.contains("cavity")) {
      const json& c = root.at("cavity");
      allow_keys(c, "cavity", {"l0_m", "cutoff_freq_hz", "n_cut"});
      cfg.cavity.l0_m = number(c, "l0_m", cfg.cavity.l0_m, "cavity");
      const bool has_freq = c.contains("cutoff_freq_hz");
      const bool has_count = c.contains("n_cut");
      if (has_freq && has_count) config_error("cavity takes cutoff_freq_hz or n_cut, not both");
      if (has_freq) {
        cfg.cavity.cutoff_freq_hz = number(c, "cutoff_freq_hz", 0.0, "cavity");
        cfg.cavity.n_cut.reset();
      } else if (has_count) {
        cfg.cavity.n_cut = integer(c, "n_cut", 0, "cavity");
        cfg.cavity.cutoff_freq_hz.reset();
      }
    }
    if (root.contains("solver")) {
      const json& s = root.at("solver");
      allow_keys(s, "solver",
                 {"mode", "dimension_cap", "quadrature_rel_tol", "steady_residual_tol",
                  "cross_solver_rel_tol", "leak_threshold", "threads"});
      SolverSettings& so = cfg.solver;
      const std::string mode = text(s, "mode", to_string(so.mode), "solver");
      try {
        so.mode = sum_mode_from_string(mode.c_str());
      } catch (const Error&) {
        config_error("unknown solver.mode '" + mode + "'");
      }
      so.dimension_cap = integer(s, "dimension_cap", so.dimension_cap, "solver");
      so.quadrature_rel_tol = number(s, "quadrature_rel_tol", so.quadrature_rel_tol, "solver");
      so.steady_residual_tol = number(s, "steady_residual_tol", so.steady_residual_tol, "solver");
      so.cross_solver_rel_tol = number(s, "cross_solver_rel_tol", so.cross_solver_rel_tol, "solver");
      so.leak_threshold = number(s, "leak_threshold", so.leak_threshold, "solver");
      so.threads = integer(s, "threads", so.threads, "solver");
    }
    if (root.contains("sweep")) {
      const json& s = root.at("sweep");
      allow_keys(s, "sweep", {"variable", "start", "stop", "points", "scale"});
      SweepSpec sw;
      sw.variable = sweep_variable_from_string(text(s, "variable", to_string(sw.variable), "sweep"));
      sw.start = number(s, "start", sw.start, "sweep");
      sw.stop = number(s, "stop", sw.stop, "sweep");
      sw.points = integer(s, "points", sw.points, "sweep");
      const std::string scale = text(s, "scale", "log", "sweep");
      if (scale != "log" && scale != "linear") config_error("sweep.scale must be log or linear");
      sw.log_scale = scale == "log";
      cfg.sweep = sw;
    }
    cfg.output_dir = text(root, "output_dir", cfg.output_dir, "config");
  } catch (const json::exception& e) {
    config_error(std::string("bad value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["constants"] = {{"hbar_J_s", cfg.constants.hbar},
                       {"k_B_J_per_K", cfg.constants.k_B},
                       {"c_m_per_s", cfg.constants.c}};
  root["mirror1"] = mirror_json(cfg.mirror1);
  root["mirror2"] = mirror_json(cfg.mirror2);
  json cav = {{"l0_m", cfg.cavity.l0_m}};
  if (cfg.cavity.cutoff_freq_hz) cav["cutoff_freq_hz"] = *cfg.cavity.cutoff_freq_hz;
  if (cfg.cavity.n_cut) cav["n_cut"] = *cfg.cavity.n_cut;
  root["cavity"] = cav;
  const SolverSettings& s = cfg.solver;
  root["solver"] = {{"mode", to_string(s.mode)},
                    {"dimension_cap", s.dimension_cap},
                    {"quadrature_rel_tol", s.quadrature_rel_tol},
                    {"steady_residual_tol", s.steady_residual_tol},
                    {"cross_solver_rel_tol", s.cross_solver_rel_tol},
                    {"leak_threshold", s.leak_threshold},
                    {"threads", s.threads}};
  if (cfg.sweep) {
    root["sweep"] = {{"variable", to_string(cfg.sweep->variable)},
                     {"start", cfg.sweep->start},
                     {"stop", cfg.sweep->stop},
                     {"points", cfg.sweep->points},
                     {"scale", cfg.sweep->log_scale ? "log" : "linear"}};
  }
  root["output_dir"] = cfg.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace vacheat
