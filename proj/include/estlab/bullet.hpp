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

#include <string>
#include <vector>

#include "estlab/common.hpp"

namespace estlab::bullet {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kLightSpeed = 2.99792458e8;   // m / s
inline constexpr double kSteelDensity = 7850.0;       // kg / m^3

/// SI throughout.
struct BulletParams {
  double mass = 0.010;
  double density = kSteelDensity;
  /// Potential barrier per collision.
  double eta = 1.0;
  /// Air molecules per metre of flight path (3.2e19 per cm).
  double line_density = 3.2e21;
  double v0 = 0.0;
  double x0 = 0.0;

  /// Half side of a cube of this mass: (1/2) (m / rho)^(1/3).
  double half_side() const;
  double momentum() const { return mass * v0; }
  /// Throws std::invalid_argument naming the first nonpositive field.
  void validate() const;
};

/// C = prefactor * [(-i d/dx - p0/hbar)^2 + slope * |x - x0|].
struct VeeOperator {
  double prefactor = 0.0;
  /// b = m^2 c^2 / (a hbar^2), in m^-3.
  double slope = 0.0;
  double x0 = 0.0;
  double p0 = 0.0;
  /// Length unit of the reduced problem: x - x0 = xi * length_scale with
  /// length_scale = (2 b)^(-1/3), so the ground state solves
  /// -psi'' + |xi| psi = E psi.
  double length_scale = 0.0;
};

VeeOperator collapse_operator_vee(const BulletParams& params);

struct WavePacket {
  /// Reduced coordinate and the matching physical positions (m).
  std::vector<double> xi;
  std::vector<double> x;
  std::vector<Complex> values;
  /// Spacing in metres; sum |psi|^2 dx = 1.
  double dx = 0.0;
  double dxi = 0.0;
};

struct GridSpec {
  double xi_min = -14.0;
  double xi_max = 14.0;
  int points = 4667;
  /// |psi| at both ends (in reduced normalization) must stay below this.
  double edge_tolerance = 1e-12;
};

struct GroundState {
  WavePacket closed_form;
  WavePacket numeric;
  /// |a'_1| = 1.0187929716...
  double energy_exact = 0.0;
  /// Lowest eigenvalue of the finite-difference operator.
  double energy_numeric = 0.0;
  /// Shift constant of the packet written as Ai(2^(1/3) (b^(1/3)|x - x0| - k)):
  /// k = 2^(-1/3) E.
  double airy_constant_exact = 0.0;
  double airy_constant_numeric = 0.0;
  /// Discrete L2 distance between the two packets in the reduced normalization.
  double l2_distance = 0.0;
  double edge_amplitude = 0.0;
  int iterations = 0;
};

/// Closed-form Airy packet and the finite-difference ground state (second-order
/// Laplacian, Dirichlet ends, shifted inverse iteration with a tridiagonal
/// solve). Throws std::invalid_argument when the grid is too narrow.
GroundState ground_state(const BulletParams& params, const GridSpec& grid = {});

/// Lowest eigenpair of -psi'' + |xi| psi on a uniform grid.
struct ReducedEigenpair {
  double energy = 0.0;
  std::vector<double> vector;  // sum v^2 dxi = 1, positive at the centre
  int iterations = 0;
};
ReducedEigenpair solve_reduced_ground_state(const GridSpec& grid);

struct Uncertainties {
  /// (hbar^2 / (2 c^2 rho^(1/3)))^(1/3) m^(-5/9)
  double delta_x_formula = 0.0;
  /// (1/2) (2 hbar c^2 rho^(1/3))^(1/3) m^(-4/9)
  double delta_v_formula = 0.0;
  /// Standard deviations of the numeric ground state in x and p / m.
  double delta_x_numeric = 0.0;
  double delta_v_numeric = 0.0;
  /// m * delta_x_numeric * delta_v_numeric / hbar
  double product_over_hbar = 0.0;
};

Uncertainties uncertainties(const BulletParams& params, const GridSpec& grid = {});

/// (eta n a / c^2) / (m / 2)
double dominance_ratio(const BulletParams& params);

/// Mean and standard deviation of position (m) and momentum (kg m/s).
struct Moments {
  double mean_x = 0.0;
  double sigma_x = 0.0;
  double mean_p = 0.0;
  double sigma_p = 0.0;
};
Moments packet_moments(const WavePacket& packet);

/// JSON object with a, b, delta_x_formula, delta_x_numeric, delta_v_formula,
/// delta_v_numeric, product_over_hbar, dominance_ratio and the ground-state
/// diagnostics.
std::string report_json(const BulletParams& params, const GridSpec& grid = {});

}  // namespace estlab::bullet
