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

#include "estlab/evolution.hpp"

#include <cmath>
#include <mutex>

#include <Eigen/Dense>

#include "estlab/kernels.hpp"

namespace estlab {

struct Propagator::DenseCache {
  std::once_flag once;
  bool diagonal = false;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // columns are eigenvectors; empty when diagonal
};

Propagator::Propagator(PauliTermSum h, EvolutionOptions options)
    : h_(std::move(h)), options_(options), dense_(std::make_shared<DenseCache>()) {
  if (!(options_.tolerance > 0.0)) throw std::invalid_argument("Propagator: tolerance must be positive");
}

const Propagator::DenseCache& Propagator::dense() const {
  std::call_once(dense_->once, [this] {
    if (h_.is_diagonal()) {
      const auto diag = diagonal_entries(h_);
      dense_->diagonal = true;
      dense_->energies = Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size()));
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h_));
    if (solver.info() != Eigen::Success) {
      throw NumericalError("Propagator: Hermitian eigensolver did not converge");
    }
    dense_->energies = solver.eigenvalues();
    dense_->vectors = solver.eigenvectors();
  });
  return *dense_;
}

void Propagator::check(const StateVector& psi) const {
  if (psi.num_sites() != h_.num_sites()) {
    throw DimensionError("evolve: state has " + std::to_string(psi.num_sites()) +
                         " sites, Hamiltonian has " + std::to_string(h_.num_sites()));
  }
}

std::size_t Propagator::rk4_steps(double t) const {
  const double span = std::abs(t);
  const double lambda = h_.norm_bound();
  if (span == 0.0 || lambda == 0.0) return 0;
  // RK4 phase error per eigencomponent after n steps of size h is about
  // |t| * lambda^5 * h^4 / 120; keep lambda * h <= 1/2 regardless.
  const double h_err = std::pow(120.0 * options_.tolerance / (span * std::pow(lambda, 5)), 0.25);
  const double h = std::min(h_err, 0.5 / lambda);
  return static_cast<std::size_t>(std::ceil(span / h));
}

EvolutionMethod Propagator::method_for(double t) const {
  if (options_.method != EvolutionMethod::Auto) return options_.method;
  if (h_.is_diagonal()) return EvolutionMethod::Dense;
  if (h_.num_sites() > options_.dense_site_limit) return EvolutionMethod::Iterative;
  const double dim = static_cast<double>(h_.dimension());
  const double iterative_cost =
      4.0 * static_cast<double>(rk4_steps(t)) * static_cast<double>(h_.terms().size()) * dim;
  const double dense_cost = 2.0 * dim * dim;
  return iterative_cost < dense_cost ? EvolutionMethod::Iterative : EvolutionMethod::Dense;
}

StateVector Propagator::evolve(const StateVector& psi, double dt) const {
  if (!(dt >= 0.0)) throw std::invalid_argument("evolve: dt must be non-negative");
  return advance(psi, dt);
}

StateVector Propagator::advance(const StateVector& psi, double t) const {
  check(psi);
  if (t == 0.0 || h_.empty()) return psi;
  return method_for(t) == EvolutionMethod::Dense ? advance_dense(psi, t) : advance_iterative(psi, t);
}

StateVector Propagator::advance_dense(const StateVector& psi, double t) const {
  check(psi);
  const auto& cache = dense();
  const auto dim = static_cast<Eigen::Index>(psi.dimension());
  std::vector<Complex> out(psi.dimension());
  if (cache.diagonal) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      out[static_cast<std::size_t>(j)] = std::polar(1.0, -cache.energies(j) * t) * psi[static_cast<std::size_t>(j)];
    }
  } else {
    Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), dim);
    Eigen::VectorXcd coeffs = cache.vectors.adjoint() * in;
    for (Eigen::Index j = 0; j < dim; ++j) coeffs(j) *= std::polar(1.0, -cache.energies(j) * t);
    Eigen::Map<Eigen::VectorXcd>(out.data(), dim) = cache.vectors * coeffs;
  }
  return StateVector::from_amplitudes(std::move(out));
}

StateVector Propagator::advance_iterative(const StateVector& psi, double t) const {
  check(psi);
  const std::size_t steps = rk4_steps(t);
  if (steps == 0) return psi;
  if (steps > options_.max_steps) {
    throw NumericalError("evolve: RK4 would need " + std::to_string(steps) +
                         " steps for the requested tolerance (limit " +
                         std::to_string(options_.max_steps) + ")");
  }
  const double h = t / static_cast<double>(steps);
  const Complex minus_ih(0.0, -h);
  const std::size_t dim = psi.dimension();

  std::vector<Complex> y(psi.amplitudes().begin(), psi.amplitudes().end());
  std::vector<Complex> k(dim), stage(dim), acc(dim);
  for (std::size_t step = 0; step < steps; ++step) {
    // k1
    apply_operator_into(h_, y, k);
    for (std::size_t i = 0; i < dim; ++i) {
      k[i] *= minus_ih;
      acc[i] = k[i];
      stage[i] = y[i] + 0.5 * k[i];
    }
    // k2
    apply_operator_into(h_, stage, k);
    for (std::size_t i = 0; i < dim; ++i) {
      k[i] *= minus_ih;
      acc[i] += 2.0 * k[i];
      stage[i] = y[i] + 0.5 * k[i];
    }
    // k3
    apply_operator_into(h_, stage, k);
    for (std::size_t i = 0; i < dim; ++i) {
      k[i] *= minus_ih;
      acc[i] += 2.0 * k[i];
      stage[i] = y[i] + k[i];
    }
    // k4
    apply_operator_into(h_, stage, k);
    for (std::size_t i = 0; i < dim; ++i) {
      k[i] *= minus_ih;
      y[i] += (acc[i] + k[i]) / 6.0;
    }
  }
  double n2 = 0.0;
  for (const auto& z : y) n2 += std::norm(z);
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > 1e-6) {
    throw NumericalError("evolve: RK4 norm drifted to " + std::to_string(std::sqrt(n2)));
  }
  return StateVector::from_amplitudes(std::move(y));
}

StateVector evolve(const StateVector& psi, const PauliTermSum& h, double dt, EvolutionOptions options) {
  return Propagator(h, options).evolve(psi, dt);
}

}  // namespace estlab
