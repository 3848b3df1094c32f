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

#include <iosfwd>
#include <string>
#include <vector>

#include "estlab/evolution.hpp"
#include "estlab/state.hpp"

namespace estlab {

/// Eigenvalues below this contribute 0 to -sum(lambda ln lambda).
inline constexpr double kEigenvalueCutoff = 1e-12;

/// Von Neumann entropy in nats.
double entropy(const DensityMatrix& rho);
/// Entropy of a 2x2 Hermitian unit-trace matrix, skipping validation.
double qubit_entropy(const Eigen::Matrix2cd& rho);
/// Entropy of the system qubit (site 0).
double system_entropy(const StateVector& psi);
/// True when the reduced state of site 0 has an eigenvalue below the cutoff.
bool is_product_state(const StateVector& psi);

enum class SpeedMethod { Analytic, FiniteDiff };

struct FiniteDiffOptions {
  double step = 1e-4;
  /// |D(h) - D(h/2)| above this marks the estimate step-sensitive.
  double level_tolerance = 1e-4;
};

struct SpeedEstimate {
  double value = 0.0;
  SpeedMethod method = SpeedMethod::Analytic;
  /// Analytic requested but rho_A had an eigenvalue below the cutoff.
  bool fell_back = false;
  double level_gap = 0.0;
  bool step_sensitive = false;
};

/// d(epsilon)/dt. Analytic: -Tr(rho_A' ln rho_A) with rho_A' = Tr_E(-i[H, rho]).
/// FiniteDiff: central difference at h and h/2 combined by Richardson.
SpeedEstimate entangling_speed(const StateVector& psi, const Propagator& prop,
                               SpeedMethod method = SpeedMethod::Analytic,
                               const FiniteDiffOptions& fd = {});

enum class ProductStencil {
  /// (eps(d) + eps(-d)) / d^2
  Symmetric,
  /// (eps(2d) - 2 eps(d)) / d^2
  OneSided,
};

struct AccelerationOptions {
  double step = 1e-3;
  ProductStencil product_stencil = ProductStencil::Symmetric;
};

/// d^2(epsilon)/dt^2 by central second difference along exact short
/// evolutions. Product states use `product_stencil`, which relies on
/// eps(0) = eps'(0) = 0. Throws std::invalid_argument when the step underflows.
double entangling_acceleration(const StateVector& psi, const Propagator& prop,
                               const AccelerationOptions& options = {});
/// As above, treating psi as a product state regardless of its entropy.
double product_state_acceleration(const StateVector& psi, const Propagator& prop,
                                  const AccelerationOptions& options = {});

struct TraceSample {
  double t = 0.0;
  double epsilon = 0.0;
  double epsilon_dot = 0.0;
  double epsilon_ddot = 0.0;
};

struct EntanglementTrace {
  std::string model_tag;
  int env_spins = 0;
  std::vector<TraceSample> samples;
};

struct TraceOptions {
  double dt = 0.005;
  double t_max = 3.0;
  bool with_acceleration = true;
  AccelerationOptions acceleration;
};

/// Samples on t = k * dt, k = 0..floor(t_max / dt). States are stepped
/// sequentially; the per-sample derivatives are evaluated in parallel.
EntanglementTrace compute_trace(const StateVector& initial, const Propagator& prop,
                                const TraceOptions& options, std::string model_tag);

/// Index of the first local maximum of epsilon_dot (falls back to the global
/// maximum when the series never turns over).
std::size_t first_speed_peak(const EntanglementTrace& trace);
double max_speed(const EntanglementTrace& trace);

/// Columns t,epsilon,epsilon_dot,epsilon_ddot. `bits` rescales the entropy
/// columns by 1/ln 2.
void write_trace_csv(std::ostream& out, const EntanglementTrace& trace,
                     const std::string& comment, bool bits = false);

}  // namespace estlab
