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
#include <iosfwd>
#include <string>
#include <vector>

#include "estlab/collapse.hpp"
#include "estlab/energy.hpp"

namespace estlab {

/// Closed-form state of g * sum_k Z_0 Z_k started from |+>^(N+1):
/// amplitude 2^(-(N+1)/2) exp(-i g t s (n0 - n1)) at index a 2^N + e, with
/// s = +1 for a = 0, -1 for a = 1 and n0, n1 the zeros and ones of e.
StateVector analytic_state(int env_spins, double g, double t);

/// Reduced eigenvalues (1 -+ |cos 2gt|^N) / 2 of the same state, ascending.
std::array<double, 2> analytic_reduced_eigenvalues(int env_spins, double g, double t);

enum class InitialEnv { Plus, Zero, RandomProduct };
InitialEnv parse_initial_env(const std::string& name);
std::string to_string(InitialEnv env);

/// |+> (x) environment. RandomProduct draws Haar qubits from stream
/// `stream` of `seed`.
StateVector initial_state(int env_spins, InitialEnv env, std::uint64_t seed = 0,
                          std::uint64_t stream = 0);

struct RevivalOptions {
  ThresholdPolicy policy;
  int trials = 1;
  std::uint64_t seed = 0;
  BasisMethod method = BasisMethod::Scan;
  ScanOptions scan;
  /// Also draw one +/- click per trial from the exact probabilities.
  bool sample_clicks = false;
};

struct RevivalReport {
  int env_spins = 0;
  double g = 0.0;
  double t_rev = 0.0;
  /// Mean over trials of |<psi(0)|psi(t_rev)>|^2.
  double fidelity_at_revival = 0.0;
  /// Mean over trials of <+|rho_A|+> and <-|rho_A|-> at t_rev.
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// Total collapse events over all trials, and trials with at least one.
  std::size_t collapse_events_before_revival = 0;
  int trials_with_collapse = 0;
  int trials = 0;
  /// Number of sampled |-> clicks (sample_clicks only).
  int minus_clicks = 0;
};

/// Runs each trial to t_rev = 2 pi / g under the policy and measures the
/// system in the X basis. Trials run concurrently on split RNG streams.
RevivalReport revival_protocol(int env_spins, double g, const RevivalOptions& options);

std::string revival_json(const RevivalReport& report);

struct CriticalSweepRow {
  int env_spins = 0;
  double max_speed = 0.0;
  std::size_t events = 0;
  double first_event_time = -1.0;
};

/// For each N: max entangling speed over [0, t_rev] without collapse and the
/// number of collapse events of one trajectory under the policy.
std::vector<CriticalSweepRow> critical_sweep(const std::vector<int>& env_spins, double g,
                                             const RevivalOptions& options);
/// First N with at least one event, or -1.
int critical_env_size(const std::vector<CriticalSweepRow>& rows);

void write_critical_csv(std::ostream& out, const std::vector<CriticalSweepRow>& rows,
                        const std::string& comment);

struct BasisAgreement {
  int env_spins = 0;
  double t_c = 0.0;
  CandidateBasis scan_basis;
  CandidateBasis operator_basis;
  bool operator_degenerate = false;
  /// Angular distance between the two bases (radians).
  double gap = 0.0;
  double scan_value = 0.0;
};

/// Compares scan and collapse-operator bases at the first entangling-speed peak.
BasisAgreement compare_basis_methods(const StateVector& initial, const Propagator& prop,
                                     const TraceOptions& trace, const ScanOptions& scan = {});

}  // namespace estlab
