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

#include "estlab/entanglement.hpp"

#include <cmath>
#include <ostream>

#include "estlab/io.hpp"
#include "estlab/kernels.hpp"
#include "estlab/parallel.hpp"

namespace estlab {
namespace {

double shannon(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l >= kEigenvalueCutoff) s -= l * std::log(l);
  }
  return std::max(s, 0.0);
}

double analytic_speed(const StateVector& psi, const PauliTermSum& h, bool& degenerate) {
  const auto h_psi = apply_operator(h, psi);
  // rho_A' = -i (Tr_E |H psi><psi| - h.c.)
  const Eigen::Matrix2cd m = partial_trace_outer(h_psi, psi.amplitudes());
  const Eigen::Matrix2cd rho_dot = Complex(0.0, -1.0) * (m - m.adjoint());
  const Eigen::Matrix2cd rho = partial_trace_outer(psi.amplitudes(), psi.amplitudes());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho);
  const auto& l = solver.eigenvalues();
  if (l(0) < kEigenvalueCutoff) {
    degenerate = true;
    return 0.0;
  }
  const auto& v = solver.eigenvectors();
  double speed = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double diag = (v.col(k).adjoint() * rho_dot * v.col(k))(0, 0).real();
    speed -= diag * std::log(l(k));
  }
  return speed;
}

double check_step(double step) {
  if (!(step >= 1e-8) || !std::isfinite(step)) {
    throw std::invalid_argument("finite-difference step " + std::to_string(step) + " underflows");
  }
  return step;
}

double central_difference(const StateVector& psi, const Propagator& prop, double h) {
  return (system_entropy(prop.advance(psi, h)) - system_entropy(prop.advance(psi, -h))) / (2.0 * h);
}

}  // namespace

double entropy(const DensityMatrix& rho) { return shannon(rho.eigenvalues()); }

double qubit_entropy(const Eigen::Matrix2cd& rho) {
  const double a = rho(0, 0).real(), d = rho(1, 1).real();
  const double off2 = std::norm(rho(0, 1));
  const double hi = 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::sqrt(off2));
  Eigen::VectorXd l(2);
  l << (hi > 0.0 ? (a * d - off2) / hi : 0.0), hi;
  return shannon(l);
}

double system_entropy(const StateVector& psi) {
  if (psi.num_sites() < 2) throw DimensionError("system_entropy: need an environment");
  return qubit_entropy(partial_trace_outer(psi.amplitudes(), psi.amplitudes()));
}

bool is_product_state(const StateVector& psi) {
  return partial_trace_system(psi, BipartiteSplit(psi.num_sites())).eigenvalues()(0) < kEigenvalueCutoff;
}

SpeedEstimate entangling_speed(const StateVector& psi, const Propagator& prop, SpeedMethod method,
                               const FiniteDiffOptions& fd) {
  if (psi.num_sites() != prop.num_sites()) throw DimensionError("entangling_speed: size mismatch");
  SpeedEstimate est;
  if (method == SpeedMethod::Analytic) {
    bool degenerate = false;
    est.value = analytic_speed(psi, prop.hamiltonian(), degenerate);
    if (!degenerate) return est;
    est.fell_back = true;
  }
  const double h = check_step(fd.step);
  const double coarse = central_difference(psi, prop, h);
  const double fine = central_difference(psi, prop, 0.5 * h);
  est.method = SpeedMethod::FiniteDiff;
  est.value = (4.0 * fine - coarse) / 3.0;
  est.level_gap = std::abs(fine - coarse);
  est.step_sensitive = est.level_gap > fd.level_tolerance;
  return est;
}

double product_state_acceleration(const StateVector& psi, const Propagator& prop,
                                  const AccelerationOptions& options) {
  const double d = check_step(options.step);
  if (prop.hamiltonian().empty()) return 0.0;
  if (options.product_stencil == ProductStencil::OneSided) {
    const StateVector one = prop.advance(psi, d);
    const StateVector two = prop.advance(one, d);
    return (system_entropy(two) - 2.0 * system_entropy(one)) / (d * d);
  }
  return (system_entropy(prop.advance(psi, d)) + system_entropy(prop.advance(psi, -d))) / (d * d);
}

double entangling_acceleration(const StateVector& psi, const Propagator& prop,
                               const AccelerationOptions& options) {
  if (psi.num_sites() != prop.num_sites()) throw DimensionError("entangling_acceleration: size mismatch");
  const double d = check_step(options.step);
  if (prop.hamiltonian().empty()) return 0.0;
  const double e0 = system_entropy(psi);
  if (e0 < kEigenvalueCutoff && is_product_state(psi)) {
    return product_state_acceleration(psi, prop, options);
  }
  return (system_entropy(prop.advance(psi, d)) - 2.0 * e0 + system_entropy(prop.advance(psi, -d))) /
         (d * d);
}

EntanglementTrace compute_trace(const StateVector& initial, const Propagator& prop,
                                const TraceOptions& options, std::string model_tag) {
  if (!(options.dt > 0.0) || !(options.t_max >= 0.0)) {
    throw std::invalid_argument("compute_trace: need dt > 0 and t_max >= 0");
  }
  const auto count = static_cast<std::size_t>(std::floor(options.t_max / options.dt + 1e-9)) + 1;
  std::vector<StateVector> states;
  states.reserve(count);
  states.push_back(initial);
  for (std::size_t k = 1; k < count; ++k) states.push_back(prop.evolve(states.back(), options.dt));

  EntanglementTrace trace{std::move(model_tag), initial.num_sites() - 1,
                          std::vector<TraceSample>(count)};
  parallel_for(static_cast<std::int64_t>(count), [&](std::int64_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    TraceSample s;
    s.t = static_cast<double>(k) * options.dt;
    s.epsilon = system_entropy(states[k]);
    s.epsilon_dot = entangling_speed(states[k], prop).value;
    s.epsilon_ddot = options.with_acceleration
                         ? entangling_acceleration(states[k], prop, options.acceleration)
                         : 0.0;
    trace.samples[k] = s;
  });
  return trace;
}

std::size_t first_speed_peak(const EntanglementTrace& trace) {
  const auto& s = trace.samples;
  if (s.empty()) throw std::invalid_argument("first_speed_peak: empty trace");
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].epsilon_dot >= s[i - 1].epsilon_dot && s[i].epsilon_dot > s[i + 1].epsilon_dot &&
        s[i].epsilon_dot > 0.0) {
      return i;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].epsilon_dot > s[best].epsilon_dot) best = i;
  }
  return best;
}

double max_speed(const EntanglementTrace& trace) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : trace.samples) m = std::max(m, s.epsilon_dot);
  return m;
}

void write_trace_csv(std::ostream& out, const EntanglementTrace& trace, const std::string& comment,
                     bool bits) {
  const double scale = bits ? 1.0 / std::log(2.0) : 1.0;
  CsvWriter csv(out, comment);
  if (bits) out << "# units=bits\n";
  csv.header({"t", "epsilon", "epsilon_dot", "epsilon_ddot"});
  for (const auto& s : trace.samples) {
    csv.row({s.t, s.epsilon * scale, s.epsilon_dot * scale, s.epsilon_ddot * scale});
  }
}

}  // namespace estlab
