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
#include <vector>

#include <Eigen/Dense>

#include "estlab/state.hpp"

namespace estlab {

/// Orthonormal qubit basis given by the Bloch direction of its first vector:
///   |A0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
///   |A1> = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>
struct CandidateBasis {
  double theta = 0.0;
  double phi = 0.0;

  static CandidateBasis from_axis(const Eigen::Vector3d& axis);
  /// Basis whose first vector is proportional to q.
  static CandidateBasis from_qubit(const Qubit& q);

  Qubit state(int i) const;
  Eigen::Vector3d axis() const;
  /// Same basis with theta folded into [0, pi/2], phi into [0, 2 pi), and
  /// phi = 0 on the pole.
  CandidateBasis canonical() const;
};

/// Angle between the two basis axes modulo the antipode, in [0, pi/2].
double angular_distance(const CandidateBasis& a, const CandidateBasis& b);

/// psi = sum_i c_i |A_i>|E_i> for a fixed system basis.
struct RelativeDecomposition {
  CandidateBasis basis;
  int num_sites = 0;
  /// c_i = ||(<A_i| (x) I) psi||, real and nonnegative.
  std::array<Complex, 2> weights{};
  /// Normalized relative environment states. Zero-weight branches hold |0...0>
  /// and are flagged in `placeholder`.
  std::array<std::vector<Complex>, 2> env_states;
  std::array<bool, 2> placeholder{};

  double born_weight(int i) const { return std::norm(weights[i]); }
  /// |A_i>|E_i>, normalized.
  StateVector branch(int i) const;
  /// sum_i c_i |A_i>|E_i>
  std::vector<Complex> reconstruct() const;
};

RelativeDecomposition decompose(const StateVector& psi, const CandidateBasis& basis);

}  // namespace estlab
