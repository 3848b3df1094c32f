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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "estlab/basis.hpp"
#include "estlab/entanglement.hpp"
#include "estlab/evolution.hpp"
#include "estlab/rng.hpp"

namespace estlab {

/// sum_i |c_i|^2 * (entangling acceleration of |A_i>|E_i> at t = 0+).
/// Zero-weight branches contribute nothing.
double mean_entangling_acceleration(const RelativeDecomposition& decomp, const Propagator& prop,
                                    const AccelerationOptions& options = {});

/// Evaluates mean_entangling_acceleration for many bases of one state.
///
/// A branch |A>|E_A> equals sum_{a,b} A_a conj(A_b) |a>|psi_b>, where psi_b is
/// the environment slice of psi with system index b. Evolving the four vectors
/// |a>|psi_b> once per stencil offset and caching the pairwise partial traces
/// turns every later evaluation into a few 2x2 products.
class BasisObjective {
 public:
  BasisObjective(const StateVector& psi, const Propagator& prop,
                 const AccelerationOptions& options = {});
  double operator()(const CandidateBasis& basis) const;
  double operator()(double theta, double phi) const { return (*this)({theta, phi}); }

 private:
  double branch_value(const Qubit& a, double& weight) const;

  AccelerationOptions options_;
  std::vector<double> offsets_;
  // traces_[o][p * 4 + q] = Tr_E |W_p><W_q| at offset o, p = 2a + b.
  std::vector<std::array<Eigen::Matrix2cd, 16>> traces_;
};

struct ScanOptions {
  int theta_points = 64;
  int phi_points = 64;
  bool refine = true;
  /// Nelder-Mead stops when the simplex size (radians) drops below this.
  double refine_tolerance = 1e-7;
  int max_iterations = 500;
  double tie_tolerance = 1e-9;
  double flat_tolerance = 1e-9;
  AccelerationOptions acceleration;
};

struct ScanReport {
  int theta_points = 0;
  int phi_points = 0;
  /// Row-major in theta: grid[i * phi_points + j] at theta_i = pi i / (T - 1),
  /// phi_j = 2 pi j / P.
  std::vector<double> grid;
  CandidateBasis grid_best;
  double grid_min = 0.0;
  double grid_max = 0.0;
  bool flat = false;
  bool refined = false;
  int iterations = 0;
  double value = 0.0;
};

struct ScanResult {
  CandidateBasis basis;
  ScanReport report;
};

double grid_theta(int i, const ScanOptions& options);
double grid_phi(int j, const ScanOptions& options);

/// Grid evaluation in parallel over the fast objective.
std::vector<double> scan_grid(const BasisObjective& objective, const ScanOptions& options);

/// Coarse grid followed by Nelder-Mead refinement in a tangent-plane chart
/// around the best cell. Ties on the grid go to the smallest theta, then phi.
/// Returns a canonical basis.
ScanResult scan_collapse_basis(const StateVector& psi, const Propagator& prop,
                               const ScanOptions& options = {});

namespace reference {
/// Serial grid built from decompose + mean_entangling_acceleration with fresh
/// evolutions at every point.
std::vector<double> scan_grid_serial(const StateVector& psi, const Propagator& prop,
                                     const ScanOptions& options);
}  // namespace reference

struct CollapseOperator {
  Eigen::Matrix2cd matrix;
  /// Ascending.
  Eigen::Vector2d eigenvalues;
  Eigen::Matrix2cd eigenvectors;
  bool degenerate = false;
  /// Eigenbasis (canonical); meaningless when degenerate.
  CandidateBasis basis;
};

/// C = sum over interaction terms w * P_sys * <P_env>, with the environment
/// expectation taken in the given environment vector (2^N entries).
CollapseOperator collapse_operator(const PauliTermSum& h, std::span<const Complex> env_state);
/// Same, with <P_env> = Tr(rho_E P_env) for the current global state.
CollapseOperator collapse_operator(const PauliTermSum& h, const StateVector& psi);

struct ThresholdPolicy {
  double threshold = std::numeric_limits<double>::infinity();
  double check_interval = 0.005;
  /// Throws std::invalid_argument unless threshold > 0 and check_interval > 0.
  void validate() const;
};

/// epsilon_dot >= threshold. Negative speeds never qualify.
bool check_threshold(double epsilon_dot, const ThresholdPolicy& policy);

struct SampledOutcome {
  int index = 0;
  StateVector state;
  double draw = 0.0;
};

/// Inverse-CDF draw over the Born weights; the state is |A_i>|E_i>.
SampledOutcome sample_outcome(const RelativeDecomposition& decomp, CounterRng& rng);

enum class BasisMethod { Scan, CollapseOperator, Auto };
BasisMethod parse_basis_method(const std::string& name);
std::string to_string(BasisMethod method);

struct BasisChoice {
  CandidateBasis basis;
  /// "scan", "collapse_operator" or "scan_fallback".
  std::string source;
  bool operator_degenerate = false;
  bool flat = false;
};

/// Auto uses the collapse operator when the environment has at least
/// `auto_operator_min_env` spins and the operator is nondegenerate, else scan.
BasisChoice choose_basis(const StateVector& psi, const Propagator& prop, BasisMethod method,
                         const ScanOptions& scan = {}, int auto_operator_min_env = 8);

struct CollapseEvent {
  double t_c = 0.0;
  CandidateBasis basis;
  std::string basis_source;
  std::array<double, 2> born_weights{};
  int outcome_index = 0;
  double e_before = 0.0;
  double e_after_ensemble = 0.0;
  double e_after_actual = 0.0;
  double rng_draw = 0.0;
  std::uint64_t seed = 0;
};

struct TrajectoryOptions {
  ThresholdPolicy policy;
  double t_max = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  BasisMethod method = BasisMethod::Scan;
  ScanOptions scan;
  int auto_operator_min_env = 8;
  bool with_acceleration = false;
};

struct TrajectoryResult {
  EntanglementTrace trace;
  std::vector<CollapseEvent> events;
  /// Crossing times where no basis could be determined (flat landscape).
  std::vector<double> skipped;
  StateVector final_state;
};

/// Checks the threshold at t = k * check_interval (k = 0, 1, ...) up to t_max
/// and replaces the state by a sampled branch on every crossing. The returned
/// final state is at exactly t_max.
TrajectoryResult run_trajectory(const StateVector& initial, const Propagator& prop,
                                const TrajectoryOptions& options, std::string model_tag = "");

/// One JSON object per line with keys t_c, theta, phi, weights, outcome,
/// e_before, e_after_ensemble, e_after_actual, rng_draw, seed, basis_source.
void write_events_jsonl(std::ostream& out, const std::vector<CollapseEvent>& events);

}  // namespace estlab
