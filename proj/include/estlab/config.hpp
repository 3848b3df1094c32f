// Copyright 2026 The estlab Authors
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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "estlab/bullet.hpp"
#include "estlab/collapse.hpp"
#include "estlab/evolution.hpp"
#include "estlab/experiment.hpp"
#include "estlab/pauli.hpp"

namespace estlab {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every knob of a batch run. Built from a flat `key = value` file:
///
///   # comment
///   model = transverse_coupled
///   n_list = 2, 4, 6, 8
///
/// Blank lines and `#` comments are ignored, keys may appear once, and any key
/// not listed in `config_keys()` is an error.
struct RunConfig {
  ModelKind model = ModelKind::TransverseCoupled;
  double coupling = 1.0;
  std::vector<int> n_list{2, 4, 6, 8};
  InitialEnv initial_env = InitialEnv::Plus;
  double threshold = std::numeric_limits<double>::infinity();
  BasisMethod basis_method = BasisMethod::Scan;
  /// Trace sampling step and threshold check interval.
  double dt = 0.005;
  double t_max = 3.0;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "csv";
  std::string entropy_units = "nats";
  int jobs = 0;
  int trials = 100;
  int scan_theta = 64;
  int scan_phi = 64;
  double acceleration_step = 1e-3;
  ProductStencil product_stencil = ProductStencil::Symmetric;
  EvolutionMethod evolution = EvolutionMethod::Auto;
  bool sample_clicks = false;
  bullet::BulletParams bullet;
  bullet::GridSpec bullet_grid;

  /// Applies one key. Throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  /// Canonical `key = value` lines in key order, leaving out `out` and `jobs`
  /// (neither changes a payload). Hashing this gives the config hash recorded
  /// in every CSV.
  std::string canonical() const;
  std::string hash() const;

  ModelSpec model_spec(int env_spins) const;
  ScanOptions scan_options() const;
  EvolutionOptions evolution_options() const;
  TraceOptions trace_options() const;
  ThresholdPolicy policy() const { return {threshold, dt}; }
};

/// Keys with their documented defaults, in canonical order.
const std::map<std::string, std::string>& config_keys();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace estlab
