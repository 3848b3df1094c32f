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

#include "estlab/basis.hpp"
#include "estlab/collapse.hpp"
#include "estlab/entanglement.hpp"
#include "estlab/pauli.hpp"

namespace estlab {

/// Denominator floor for relative deviations.
inline constexpr double kEnergyFloor = 1e-9;

/// <psi|H|psi>. Throws NumericalError if the imaginary residue exceeds 1e-10.
double energy_before(const StateVector& psi, const PauliTermSum& h);
/// sum_i |c_i|^2 <A_i E_i|H|A_i E_i>
double energy_after_ensemble(const RelativeDecomposition& decomp, const PauliTermSum& h);
/// Cross terms sum_{i != j} conj(c_j) c_i <A_j E_j|H|A_i E_i>, evaluated
/// directly (not by subtraction).
double energy_delta(const RelativeDecomposition& decomp, const PauliTermSum& h);

struct EnergyAudit {
  int env_spins = 0;
  double e_before = 0.0;
  double e_after_ensemble = 0.0;
  double delta_e = 0.0;
  double relative_deviation = 0.0;
  /// |e_before| fell below the floor; relative_deviation then holds |delta_e|.
  bool absolute = false;
};

EnergyAudit audit_energy(const StateVector& psi, const RelativeDecomposition& decomp,
                         const PauliTermSum& h);

struct EnergySweepRow {
  EnergyAudit audit;
  double t_c = 0.0;
  double peak_speed = 0.0;
  CandidateBasis basis;
  std::string basis_source;
  bool operator_degenerate = false;
};

/// Evolves `initial` along a trace, collapses at the first local maximum of
/// the entangling speed in the basis chosen by `method`, and audits the energy.
EnergySweepRow audit_at_speed_peak(const StateVector& initial, const Propagator& prop,
                                   const TraceOptions& trace, BasisMethod method,
                                   const ScanOptions& scan = {}, int auto_operator_min_env = 8);

/// Columns N,t_c,peak_speed,theta,phi,e_before,e_after_ensemble,delta_e,
/// relative_deviation,absolute,basis_source,fallback.
void write_energy_csv(std::ostream& out, const std::vector<EnergySweepRow>& rows,
                      const std::string& comment);

}  // namespace estlab
