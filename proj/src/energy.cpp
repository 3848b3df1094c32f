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

#include "estlab/energy.hpp"

#include <cmath>
#include <ostream>

#include "estlab/io.hpp"
#include "estlab/kernels.hpp"

namespace estlab {
namespace {

double real_part(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real()))) {
    throw NumericalError(std::string(what) + ": imaginary residue " + format_number(z.imag()));
  }
  return z.real();
}

}  // namespace

double energy_before(const StateVector& psi, const PauliTermSum& h) {
  if (psi.num_sites() != h.num_sites()) throw DimensionError("energy_before: size mismatch");
  return real_part(expectation(h, psi.amplitudes()), "energy_before");
}

double energy_after_ensemble(const RelativeDecomposition& decomp, const PauliTermSum& h) {
  if (decomp.num_sites != h.num_sites()) throw DimensionError("energy_after_ensemble: size mismatch");
  double e = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double w = decomp.born_weight(i);
    if (w == 0.0) continue;
    const StateVector b = decomp.branch(i);
    e += w * real_part(expectation(h, b.amplitudes()), "energy_after_ensemble");
  }
  return e;
}

double energy_delta(const RelativeDecomposition& decomp, const PauliTermSum& h) {
  if (decomp.num_sites != h.num_sites()) throw DimensionError("energy_delta: size mismatch");
  if (decomp.weights[0] == 0.0 || decomp.weights[1] == 0.0) return 0.0;
  const StateVector b0 = decomp.branch(0);
  const StateVector b1 = decomp.branch(1);
  const Complex cross =
      std::conj(decomp.weights[1]) * decomp.weights[0] *
          matrix_element(h, b1.amplitudes(), b0.amplitudes()) +
      std::conj(decomp.weights[0]) * decomp.weights[1] *
          matrix_element(h, b0.amplitudes(), b1.amplitudes());
  return real_part(cross, "energy_delta");
}

EnergyAudit audit_energy(const StateVector& psi, const RelativeDecomposition& decomp,
                         const PauliTermSum& h) {
  EnergyAudit a;
  a.env_spins = psi.num_sites() - 1;
  a.e_before = energy_before(psi, h);
  a.e_after_ensemble = energy_after_ensemble(decomp, h);
  a.delta_e = a.e_before - a.e_after_ensemble;
  a.absolute = std::abs(a.e_before) < kEnergyFloor;
  a.relative_deviation = std::abs(a.delta_e) / std::max(std::abs(a.e_before), kEnergyFloor);
  if (a.absolute) a.relative_deviation = std::abs(a.delta_e);
  return a;
}

EnergySweepRow audit_at_speed_peak(const StateVector& initial, const Propagator& prop,
                                   const TraceOptions& trace, BasisMethod method,
                                   const ScanOptions& scan, int auto_operator_min_env) {
  TraceOptions opts = trace;
  opts.with_acceleration = false;
  const EntanglementTrace tr = compute_trace(initial, prop, opts, "");
  const std::size_t peak = first_speed_peak(tr);
  EnergySweepRow row;
  row.t_c = tr.samples[peak].t;
  row.peak_speed = tr.samples[peak].epsilon_dot;
  // Re-evolve in one step rather than reusing the stepped trace state.
  const StateVector psi = prop.evolve(initial, row.t_c);
  const BasisChoice choice = choose_basis(psi, prop, method, scan, auto_operator_min_env);
  row.basis = choice.basis;
  row.basis_source = choice.source;
  row.operator_degenerate = choice.operator_degenerate;
  row.audit = audit_energy(psi, decompose(psi, choice.basis), prop.hamiltonian());
  return row;
}

void write_energy_csv(std::ostream& out, const std::vector<EnergySweepRow>& rows,
                      const std::string& comment) {
  CsvWriter csv(out, comment);
  csv.header({"N", "t_c", "peak_speed", "theta", "phi", "e_before", "e_after_ensemble", "delta_e",
              "relative_deviation", "absolute", "basis_source", "fallback"});
  for (const auto& r : rows) {
    csv.row_text({std::to_string(r.audit.env_spins), format_number(r.t_c),
                  format_number(r.peak_speed), format_number(r.basis.theta),
                  format_number(r.basis.phi), format_number(r.audit.e_before),
                  format_number(r.audit.e_after_ensemble), format_number(r.audit.delta_e),
                  format_number(r.audit.relative_deviation), r.audit.absolute ? "1" : "0",
                  r.basis_source, r.operator_degenerate ? "1" : "0"});
  }
}

}  // namespace estlab
