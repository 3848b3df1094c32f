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

#include "estlab/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "estlab/pauli.hpp"
#include "estlab/rng.hpp"

namespace estlab {
namespace {

int sites_for_length(std::size_t length) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw DimensionError("state length " + std::to_string(length) +
                         " is not a power of two with at least one site");
  }
  const int sites = std::countr_zero(length);
  if (sites > kMaxSites) throw DimensionError("state too large");
  return sites;
}

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

StateVector::StateVector(int num_sites, std::vector<Complex> amplitudes)
    : num_sites_(num_sites), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const int sites = sites_for_length(amplitudes.size());
  const double n2 = squared_norm(amplitudes);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw NumericalError("StateVector: cannot normalize a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& z : amplitudes) z *= inv;
  return StateVector(sites, std::move(amplitudes));
}

StateVector StateVector::basis_state(int num_sites, std::uint64_t index) {
  if (num_sites < 1 || num_sites > kMaxSites) throw DimensionError("basis_state: bad site count");
  const std::size_t dim = std::size_t{1} << num_sites;
  if (index >= dim) throw DimensionError("basis_state: index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(num_sites, std::move(amps));
}

StateVector StateVector::plus_state(int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) throw DimensionError("plus_state: bad site count");
  const std::size_t dim = std::size_t{1} << num_sites;
  return StateVector(num_sites,
                     std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)))));
}

StateVector StateVector::product(std::span<const Qubit> sites) {
  if (sites.empty()) throw DimensionError("product: no sites");
  std::vector<Complex> amps{Complex(1.0)};
  for (const auto& q : sites) {
    std::vector<Complex> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * q[0];
      next[2 * i + 1] = amps[i] * q[1];
    }
    amps = std::move(next);
  }
  return from_amplitudes(std::move(amps));
}

StateVector StateVector::product(const Qubit& system, std::span<const Complex> env) {
  std::vector<Complex> amps(2 * env.size());
  for (std::size_t e = 0; e < env.size(); ++e) {
    amps[e] = system[0] * env[e];
    amps[env.size() + e] = system[1] * env[e];
  }
  return from_amplitudes(std::move(amps));
}

StateVector StateVector::random(int num_sites, CounterRng& rng) {
  if (num_sites < 1 || num_sites > kMaxSites) throw DimensionError("random: bad site count");
  std::vector<Complex> amps(std::size_t{1} << num_sites);
  for (auto& z : amps) {
    const double re = rng.next_normal();
    z = Complex(re, rng.next_normal());
  }
  return from_amplitudes(std::move(amps));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

Complex StateVector::inner(const StateVector& other) const {
  if (other.dimension() != dimension()) throw DimensionError("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return s;
}

double StateVector::fidelity(const StateVector& other) const {
  return std::min(1.0, std::norm(inner(other)));
}

double StateVector::distance(const StateVector& other) const {
  if (other.dimension() != dimension()) throw DimensionError("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::norm(amplitudes_[i] - other.amplitudes_[i]);
  return std::sqrt(s);
}

StateVector StateVector::with_global_phase(double alpha) const {
  const Complex phase = std::polar(1.0, alpha);
  std::vector<Complex> amps = amplitudes_;
  for (auto& z : amps) z *= phase;
  return StateVector(num_sites_, std::move(amps));
}

Qubit plus_qubit() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Complex(s), Complex(s)};
}

Qubit bloch_qubit(double theta, double phi) {
  return {Complex(std::cos(theta / 2)), std::polar(std::sin(theta / 2), phi)};
}

Qubit random_qubit(CounterRng& rng) {
  Qubit q;
  double n2 = 0.0;
  do {
    for (auto& z : q) z = Complex(rng.next_normal(), rng.next_normal());
    n2 = std::norm(q[0]) + std::norm(q[1]);
  } while (n2 < 1e-300);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& z : q) z *= inv;
  return q;
}

BipartiteSplit::BipartiteSplit(int num_sites, int system_site)
    : num_sites_(num_sites), system_site_(system_site) {
  if (num_sites < 2) throw DimensionError("BipartiteSplit: need a system and an environment");
  if (system_site != 0) {
    throw std::invalid_argument("BipartiteSplit: the system must be site 0");
  }
  for (int s = 1; s < num_sites; ++s) env_sites_.push_back(s);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("DensityMatrix: not square");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > 1e-10) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  if (eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  if (entries_.rows() == 2) {
    // Closed form; avoids the iterative solver for the common qubit case.
    const double a = entries_(0, 0).real();
    const double d = entries_(1, 1).real();
    const double off = std::abs(entries_(0, 1));
    const double mean = 0.5 * (a + d);
    const double r = std::hypot(0.5 * (a - d), off);
    Eigen::VectorXd ev(2);
    const double hi = mean + r;
    // det / hi keeps the small eigenvalue accurate near a pure state.
    const double lo = hi > 0.0 ? (a * d - off * off) / hi : mean - r;
    ev << lo, hi;
    return ev;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

double DensityMatrix::trace() const { return entries_.trace().real(); }

Eigen::Matrix2cd partial_trace_outer(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size() || a.size() < 2) throw DimensionError("partial_trace_outer: size mismatch");
  const std::size_t env = a.size() / 2;
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (std::size_t e = 0; e < env; ++e) {
    const Complex a0 = a[e], a1 = a[env + e];
    const Complex b0 = std::conj(b[e]), b1 = std::conj(b[env + e]);
    r(0, 0) += a0 * b0;
    r(0, 1) += a0 * b1;
    r(1, 0) += a1 * b0;
    r(1, 1) += a1 * b1;
  }
  return r;
}

DensityMatrix partial_trace_system(const StateVector& psi, const BipartiteSplit& split) {
  if (split.num_sites() != psi.num_sites()) {
    throw DimensionError("partial_trace_system: split covers " + std::to_string(split.num_sites()) +
                         " sites, state has " + std::to_string(psi.num_sites()));
  }
  Eigen::Matrix2cd r = partial_trace_outer(psi.amplitudes(), psi.amplitudes());
  // Exact Hermiticity; the sums above agree only to rounding.
  r(0, 1) = 0.5 * (r(0, 1) + std::conj(r(1, 0)));
  r(1, 0) = std::conj(r(0, 1));
  r(0, 0) = r(0, 0).real();
  r(1, 1) = r(1, 1).real();
  return DensityMatrix(Eigen::MatrixXcd(r));
}

}  // namespace estlab
