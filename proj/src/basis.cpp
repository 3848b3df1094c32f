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

#include "estlab/basis.hpp"

#include <algorithm>
#include <cmath>

namespace estlab {
namespace {

constexpr double kZeroBranch = 1e-14;

double wrap_phi(double phi) {
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return p;
}

}  // namespace

CandidateBasis CandidateBasis::from_axis(const Eigen::Vector3d& axis) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw std::invalid_argument("CandidateBasis: zero axis");
  const Eigen::Vector3d u = axis / n;
  CandidateBasis b;
  b.theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  b.phi = wrap_phi(std::atan2(u.y(), u.x()));
  return b;
}

CandidateBasis CandidateBasis::from_qubit(const Qubit& q) {
  const double r0 = std::abs(q[0]), r1 = std::abs(q[1]);
  if (!(r0 + r1 > 0.0)) throw std::invalid_argument("CandidateBasis: zero vector");
  CandidateBasis b;
  b.theta = 2.0 * std::atan2(r1, r0);
  b.phi = (r0 > 0.0 && r1 > 0.0) ? wrap_phi(std::arg(q[1]) - std::arg(q[0])) : 0.0;
  return b;
}

Qubit CandidateBasis::state(int i) const {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const Complex e = std::polar(1.0, phi);
  if (i == 0) return {Complex(c), e * s};
  if (i == 1) return {Complex(s), -e * c};
  throw std::out_of_range("CandidateBasis: index must be 0 or 1");
}

Eigen::Vector3d CandidateBasis::axis() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

CandidateBasis CandidateBasis::canonical() const {
  CandidateBasis b = from_axis(axis());
  if (b.theta > 0.5 * kPi) b = from_axis(-axis());
  if (b.theta < 1e-12) b = {0.0, 0.0};
  return b;
}

double angular_distance(const CandidateBasis& a, const CandidateBasis& b) {
  return std::acos(std::clamp(std::abs(a.axis().dot(b.axis())), 0.0, 1.0));
}

RelativeDecomposition decompose(const StateVector& psi, const CandidateBasis& basis) {
  if (psi.num_sites() < 2) throw DimensionError("decompose: need at least one environment site");
  const std::size_t env = psi.dimension() / 2;
  const auto amps = psi.amplitudes();
  RelativeDecomposition d;
  d.basis = basis;
  d.num_sites = psi.num_sites();
  for (int i = 0; i < 2; ++i) {
    const Qubit a = basis.state(i);
    const Complex a0 = std::conj(a[0]), a1 = std::conj(a[1]);
    std::vector<Complex> e(env);
    double n2 = 0.0;
    for (std::size_t k = 0; k < env; ++k) {
      e[k] = a0 * amps[k] + a1 * amps[env + k];
      n2 += std::norm(e[k]);
    }
    const double c = std::sqrt(n2);
    if (c < kZeroBranch) {
      std::fill(e.begin(), e.end(), Complex(0.0));
      e[0] = 1.0;
      d.weights[i] = 0.0;
      d.placeholder[i] = true;
    } else {
      for (auto& z : e) z /= c;
      d.weights[i] = c;
    }
    d.env_states[i] = std::move(e);
  }
  return d;
}

StateVector RelativeDecomposition::branch(int i) const {
  return StateVector::product(basis.state(i), env_states.at(static_cast<std::size_t>(i)));
}

std::vector<Complex> RelativeDecomposition::reconstruct() const {
  const std::size_t env = env_states[0].size();
  std::vector<Complex> out(2 * env, Complex(0.0));
  for (int i = 0; i < 2; ++i) {
    const Qubit a = basis.state(i);
    for (std::size_t k = 0; k < env; ++k) {
      out[k] += weights[i] * a[0] * env_states[i][k];
      out[env + k] += weights[i] * a[1] * env_states[i][k];
    }
  }
  return out;
}

}  // namespace estlab
