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

#include "estlab/kernels.hpp"

#include <bit>

namespace estlab {
namespace {

// i^k for k = popcount(x & z), the Y-count phase of a Pauli string.
Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct PackedTerm {
  std::uint64_t x;
  std::uint64_t z;
  Complex weight;
};

std::vector<PackedTerm> pack(const PauliTermSum& op) {
  std::vector<PackedTerm> packed;
  packed.reserve(op.terms().size());
  for (const auto& t : op.terms()) {
    const auto& s = t.string;
    packed.push_back({s.x_mask(), s.z_mask(),
                      t.coefficient * i_power(std::popcount(s.x_mask() & s.z_mask()))});
  }
  return packed;
}

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

void check_sizes(const PauliTermSum& op, std::size_t in, std::size_t out) {
  if (in != op.dimension() || out != op.dimension()) {
    throw DimensionError("operator on " + std::to_string(op.num_sites()) +
                         " sites applied to a vector of length " + std::to_string(in));
  }
}

}  // namespace

void apply_operator_into(const PauliTermSum& op, std::span<const Complex> in,
                         std::span<Complex> out) {
  check_sizes(op, in.size(), out.size());
  const auto terms = pack(op);
  const auto dim = static_cast<std::int64_t>(in.size());
  const std::size_t nterms = terms.size();
#pragma omp parallel for schedule(static) if (dim >= 4096)
  for (std::int64_t jj = 0; jj < dim; ++jj) {
    const auto j = static_cast<std::uint64_t>(jj);
    Complex acc = 0.0;
    for (std::size_t t = 0; t < nterms; ++t) {
      const auto src = j ^ terms[t].x;
      acc += terms[t].weight * (parity_sign(src & terms[t].z) * in[src]);
    }
    out[j] = acc;
  }
}

std::vector<Complex> apply_operator(const PauliTermSum& op, const StateVector& psi) {
  std::vector<Complex> out(psi.dimension());
  apply_operator_into(op, psi.amplitudes(), out);
  return out;
}

Complex matrix_element(const PauliTermSum& op, std::span<const Complex> a,
                       std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("matrix_element: size mismatch");
  std::vector<Complex> hb(b.size());
  apply_operator_into(op, b, hb);
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * hb[i];
  return s;
}

Complex expectation(const PauliTermSum& op, std::span<const Complex> psi) {
  return matrix_element(op, psi, psi);
}

Complex pauli_expectation(const PauliString& s, std::span<const Complex> psi) {
  if (psi.size() != (std::size_t{1} << s.num_sites())) {
    throw DimensionError("pauli_expectation: size mismatch");
  }
  const Complex w = i_power(std::popcount(s.x_mask() & s.z_mask()));
  Complex acc = 0.0;
  for (std::uint64_t j = 0; j < psi.size(); ++j) {
    const auto src = j ^ s.x_mask();
    acc += std::conj(psi[j]) * (parity_sign(src & s.z_mask()) * psi[src]);
  }
  return w * acc;
}

std::vector<double> diagonal_entries(const PauliTermSum& op) {
  if (!op.is_diagonal()) throw std::invalid_argument("diagonal_entries: operator is not diagonal");
  std::vector<double> diag(op.dimension(), 0.0);
  for (const auto& t : op.terms()) {
    const auto z = t.string.z_mask();
    for (std::uint64_t j = 0; j < diag.size(); ++j) diag[j] += t.coefficient * parity_sign(j & z);
  }
  return diag;
}

Eigen::MatrixXcd dense_matrix(const PauliTermSum& op) {
  const auto dim = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : pack(op)) {
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      m(static_cast<Eigen::Index>(b ^ t.x), static_cast<Eigen::Index>(b)) +=
          t.weight * parity_sign(b & t.z);
    }
  }
  return m;
}

namespace reference {

void apply_operator_into(const PauliTermSum& op, std::span<const Complex> in,
                         std::span<Complex> out) {
  check_sizes(op, in.size(), out.size());
  std::fill(out.begin(), out.end(), Complex(0.0));
  for (const auto& t : pack(op)) {
    for (std::uint64_t b = 0; b < in.size(); ++b) {
      out[b ^ t.x] += t.weight * (parity_sign(b & t.z) * in[b]);
    }
  }
}

}  // namespace reference
}  // namespace estlab
