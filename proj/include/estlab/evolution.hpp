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

#include <memory>

#include "estlab/pauli.hpp"
#include "estlab/state.hpp"

namespace estlab {

enum class EvolutionMethod { Auto, Dense, Iterative };

struct EvolutionOptions {
  EvolutionMethod method = EvolutionMethod::Auto;
  /// Registers up to this many sites may use the dense eigendecomposition.
  int dense_site_limit = 12;
  /// Bound on the accumulated RK4 error over one call.
  double tolerance = 1e-10;
  std::size_t max_steps = 20'000'000;
};

/// exp(-iHt) for a fixed Hamiltonian.
///
/// Dense path: eigendecomposition computed once on first use (diagonal
/// Hamiltonians skip the solver). Iterative path: fixed-step classical RK4
/// with the step sized from the norm bound so the global error stays below
/// `tolerance`, followed by a renormalization guard. Auto takes the dense path
/// for diagonal Hamiltonians, the iterative path when it is cheaper than one
/// dense product, and otherwise the dense path within `dense_site_limit`.
///
/// Immutable after construction and safe to share across threads.
class Propagator {
 public:
  explicit Propagator(PauliTermSum h, EvolutionOptions options = {});

  /// dt >= 0.
  StateVector evolve(const StateVector& psi, double dt) const;
  /// Signed time; negative t runs the evolution backwards.
  StateVector advance(const StateVector& psi, double t) const;

  StateVector advance_dense(const StateVector& psi, double t) const;
  StateVector advance_iterative(const StateVector& psi, double t) const;

  std::size_t rk4_steps(double t) const;
  EvolutionMethod method_for(double t) const;

  const PauliTermSum& hamiltonian() const { return h_; }
  const EvolutionOptions& options() const { return options_; }
  int num_sites() const { return h_.num_sites(); }

 private:
  struct DenseCache;
  const DenseCache& dense() const;
  void check(const StateVector& psi) const;

  PauliTermSum h_;
  EvolutionOptions options_;
  std::shared_ptr<DenseCache> dense_;
};

StateVector evolve(const StateVector& psi, const PauliTermSum& h, double dt,
                   EvolutionOptions options = {});

}  // namespace estlab
