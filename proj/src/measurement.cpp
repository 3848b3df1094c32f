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

#include "estlab/measurement.hpp"

#include <cmath>
#include <string>

namespace estlab {

std::vector<double> MeasurementOperators::probabilities(const Eigen::VectorXcd& system_state) const {
  std::vector<double> p;
  p.reserve(ops.size());
  for (const auto& m : ops) p.push_back((m * system_state).squaredNorm());
  return p;
}

MeasurementOperators derive_measurement_operators(const Eigen::MatrixXcd& joint_unitary,
                                                  const Eigen::VectorXcd& ready_state,
                                                  const Eigen::MatrixXcd& collapse_basis) {
  const Eigen::Index da = ready_state.size();
  if (da < 1 || da > 16) throw std::invalid_argument("apparatus dimension must be in [1, 16]");
  if (collapse_basis.rows() != da || collapse_basis.cols() != da) {
    throw DimensionError("collapse basis must be dim_A x dim_A");
  }
  const Eigen::Index dj = joint_unitary.rows();
  if (joint_unitary.cols() != dj || dj % da != 0) throw DimensionError("joint unitary shape");
  const Eigen::Index ds = dj / da;
  if (ds > 16) throw std::invalid_argument("system dimension must be <= 16");

  const double unitarity =
      (joint_unitary.adjoint() * joint_unitary - Eigen::MatrixXcd::Identity(dj, dj)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    throw std::invalid_argument("joint operator is not unitary (residual " + std::to_string(unitarity) + ")");
  }
  const double ortho =
      (collapse_basis.adjoint() * collapse_basis - Eigen::MatrixXcd::Identity(da, da)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) throw std::invalid_argument("collapse basis is not orthonormal");
  if (std::abs(ready_state.norm() - 1.0) > 1e-10) throw std::invalid_argument("ready state not normalized");
  const Eigen::VectorXcd coords = collapse_basis.adjoint() * ready_state;
  if ((collapse_basis * coords - ready_state).norm() > 1e-10) {
    throw std::invalid_argument("ready state is outside the span of the collapse basis");
  }

  MeasurementOperators result;
  for (Eigen::Index m = 0; m < da; ++m) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(ds, ds);
    for (Eigen::Index so = 0; so < ds; ++so) {
      for (Eigen::Index si = 0; si < ds; ++si) {
        Complex acc = 0.0;
        for (Eigen::Index ao = 0; ao < da; ++ao) {
          const Complex bra = std::conj(collapse_basis(ao, m));
          if (bra == Complex(0.0)) continue;
          for (Eigen::Index ai = 0; ai < da; ++ai) {
            acc += bra * joint_unitary(so * da + ao, si * da + ai) * ready_state(ai);
          }
        }
        op(so, si) = acc;
      }
    }
    result.ops.push_back(std::move(op));
  }

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(ds, ds);
  for (const auto& op : result.ops) sum += op.adjoint() * op;
  result.completeness_residual = (sum - Eigen::MatrixXcd::Identity(ds, ds)).cwiseAbs().maxCoeff();
  if (result.completeness_residual > 1e-9) {
    throw NumericalError("measurement operators are incomplete: residual " +
                         std::to_string(result.completeness_residual));
  }
  return result;
}

Eigen::MatrixXcd detector_unitary(Complex c_click) {
  const double p = std::norm(c_click);
  if (p > 1.0 + 1e-15) throw std::invalid_argument("|c_click| must be <= 1");
  const double keep = std::sqrt(std::max(0.0, 1.0 - p));
  // Index = photon * 2 + detector; detector 0 = unclick, 1 = click.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = 1.0;                  // |0>|u> -> |0>|u>
  u(2, 2) = keep;                 // |1>|u> -> keep |1>|u>
  u(1, 2) = c_click;              //          + c |0>|c>
  u(2, 1) = -std::conj(c_click);  // |0>|c> -> -c* |1>|u>
  u(1, 1) = keep;                 //          + keep |0>|c>
  u(3, 3) = 1.0;                  // |1>|c> -> |1>|c>
  return u;
}

}  // namespace estlab
