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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "estlab/common.hpp"
#include "estlab/pauli.hpp"
#include "estlab/state.hpp"

namespace estlab {

/// H|psi> term by term, without materializing H. OpenMP-parallel over output
/// amplitudes; each output is accumulated in term order, so results are
/// independent of the thread count.
std::vector<Complex> apply_operator(const PauliTermSum& op, const StateVector& psi);
void apply_operator_into(const PauliTermSum& op, std::span<const Complex> in,
                         std::span<Complex> out);

/// <psi|op|psi>, complex so callers can check the imaginary residue.
Complex expectation(const PauliTermSum& op, std::span<const Complex> psi);
/// <a|op|b>
Complex matrix_element(const PauliTermSum& op, std::span<const Complex> a,
                       std::span<const Complex> b);
Complex pauli_expectation(const PauliString& s, std::span<const Complex> psi);

/// Diagonal of a diagonal (I/Z-only) operator.
std::vector<double> diagonal_entries(const PauliTermSum& op);

Eigen::MatrixXcd dense_matrix(const PauliTermSum& op);

namespace reference {

/// Serial term-major scatter formulation kept as the cross-check for the
/// parallel kernel.
void apply_operator_into(const PauliTermSum& op, std::span<const Complex> in,
                         std::span<Complex> out);

}  // namespace reference
}  // namespace estlab
