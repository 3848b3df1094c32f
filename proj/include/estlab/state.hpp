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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "estlab/common.hpp"

namespace estlab {

class CounterRng;

using Qubit = std::array<Complex, 2>;

/// Normalized amplitudes over num_sites qubits. Site 0 is the system qubit and
/// the most significant index bit (see PauliString).
class StateVector {
 public:
  /// Normalizes the input. Throws DimensionError unless the length is a power
  /// of two with at least one site, and NumericalError for a zero vector.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);
  static StateVector basis_state(int num_sites, std::uint64_t index);
  /// |+>^num_sites
  static StateVector plus_state(int num_sites);
  /// Kronecker product, site 0 first.
  static StateVector product(std::span<const Qubit> sites);
  /// system (x) environment; env.size() must be a power of two.
  static StateVector product(const Qubit& system, std::span<const Complex> env);
  /// Haar-ish random state (complex Gaussian amplitudes, normalized).
  static StateVector random(int num_sites, CounterRng& rng);

  int num_sites() const { return num_sites_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  /// <this|other>
  Complex inner(const StateVector& other) const;
  /// |<this|other>|^2
  double fidelity(const StateVector& other) const;
  double distance(const StateVector& other) const;

  StateVector with_global_phase(double alpha) const;

 private:
  StateVector(int num_sites, std::vector<Complex> amplitudes);

  int num_sites_;
  std::vector<Complex> amplitudes_;
};

Qubit plus_qubit();
Qubit bloch_qubit(double theta, double phi);
/// Haar-random single-qubit state.
Qubit random_qubit(CounterRng& rng);

/// Which site is the system; the rest is environment. Only site 0 may be the
/// system.
class BipartiteSplit {
 public:
  explicit BipartiteSplit(int num_sites, int system_site = 0);

  int num_sites() const { return num_sites_; }
  int system_site() const { return system_site_; }
  const std::vector<int>& env_sites() const { return env_sites_; }
  int env_size() const { return num_sites_ - 1; }

 private:
  int num_sites_;
  int system_site_;
  std::vector<int> env_sites_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Validated on
/// construction (1e-12 Hermiticity, 1e-10 trace, eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }
  /// Ascending.
  Eigen::VectorXd eigenvalues() const;
  double purity() const;
  double trace() const;

 private:
  Eigen::MatrixXcd entries_;
};

/// rho_A = Tr_E |psi><psi|
DensityMatrix partial_trace_system(const StateVector& psi, const BipartiteSplit& split);

/// Tr_E |a><b| for two (not necessarily normalized) register vectors.
Eigen::Matrix2cd partial_trace_outer(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace estlab
