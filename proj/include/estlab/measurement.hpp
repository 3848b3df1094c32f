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

#include <vector>

#include <Eigen/Dense>

#include "estlab/common.hpp"

namespace estlab {

/// Measurement operators M_m on S induced by a joint unitary on S (x) A, a
/// ready state of the apparatus and the apparatus collapse basis:
///   M_m = (<A_m| (x) I_S) U (I_S (x) |A_r>).
/// Joint indices are s * dim_A + a.
struct MeasurementOperators {
  std::vector<Eigen::MatrixXcd> ops;
  /// ||sum_m M_m^dag M_m - I|| (max-abs entry).
  double completeness_residual = 0.0;

  /// p_m = <s|M_m^dag M_m|s> for a normalized system state.
  std::vector<double> probabilities(const Eigen::VectorXcd& system_state) const;
};

/// `collapse_basis` holds the basis vectors as columns. Throws
/// std::invalid_argument for non-unitary U (1e-10), a non-orthonormal basis,
/// a ready state outside the span or dimensions above 16, and NumericalError
/// when the completeness residual exceeds 1e-9.
MeasurementOperators derive_measurement_operators(const Eigen::MatrixXcd& joint_unitary,
                                                  const Eigen::VectorXcd& ready_state,
                                                  const Eigen::MatrixXcd& collapse_basis);

/// Photon-detector interaction on (photon number {|0>,|1>}) (x)
/// (detector {|unclick>, |click>}):
///   |1>|unclick> -> sqrt(1 - |c|^2)|1>|unclick> + c|0>|click>,
/// vacuum unchanged, completed to a unitary on the remaining pair.
Eigen::MatrixXcd detector_unitary(Complex c_click);

}  // namespace estlab
