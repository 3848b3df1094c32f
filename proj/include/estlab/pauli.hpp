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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "estlab/common.hpp"

namespace estlab {

inline constexpr int kMaxSites = 30;

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Which side(s) of the system/environment cut a term touches. Site 0 is
/// always the system qubit.
enum class TermKind : std::uint8_t { SystemOnly, EnvOnly, Interaction };

const char* to_string(TermKind kind);

/// Tensor product of single-site Paulis stored as X/Z bit masks.
///
/// Site s lives at bit (num_sites - 1 - s), so site 0 is the most significant
/// bit of a computational-basis index and amplitude index a * 2^N + e pairs
/// system state a with environment state e.
class PauliString {
 public:
  explicit PauliString(int num_sites);

  /// Parses one label per site, e.g. "ZIZ". Accepts I, X, Y, Z.
  static PauliString parse(std::string_view labels);
  static PauliString single(int num_sites, int site, Pauli p);

  PauliString& set(int site, Pauli p);
  Pauli at(int site) const;

  int num_sites() const { return num_sites_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  std::uint64_t support_mask() const { return x_mask_ | z_mask_; }
  bool acts_on(int site) const;
  bool is_identity() const { return support_mask() == 0; }
  bool is_diagonal() const { return x_mask_ == 0; }

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint64_t bit(int site) const;
  void check_site(int site) const;

  int num_sites_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
};

struct PauliTerm {
  double coefficient;
  PauliString string;
  TermKind kind;
};

/// Real-weighted sum of Pauli strings, each tagged with its partition
/// (system-only, environment-only, interaction).
class PauliTermSum {
 public:
  explicit PauliTermSum(int num_sites);

  void add(double coefficient, PauliString string);

  int num_sites() const { return num_sites_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << num_sites_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Sum of |coefficient|, an upper bound on the operator norm.
  double norm_bound() const;
  bool is_diagonal() const;
  std::size_t count(TermKind kind) const;
  PauliTermSum filtered(TermKind kind) const;

  PauliTermSum operator-() const;

 private:
  int num_sites_;
  std::vector<PauliTerm> terms_;
};

TermKind classify(const PauliString& s);

enum class ModelKind { DegenerateIsing, TransverseCoupled, Custom };

/// "degenerate_ising", "transverse_coupled" or "custom"; throws
/// std::invalid_argument for anything else.
ModelKind parse_model_kind(std::string_view name);
std::string to_string(ModelKind kind);

struct CustomTerm {
  Complex coefficient;
  std::string labels;
};

struct ModelSpec {
  ModelKind kind = ModelKind::TransverseCoupled;
  int env_spins = 1;
  double coupling = 1.0;
  std::vector<CustomTerm> custom;
};

/// DegenerateIsing:   g * sum_k Z_0 Z_k.
/// TransverseCoupled: X_0 + sum_k Z_0 Z_k + sum_k X_k.
/// Custom:            the given terms; coefficients must be real.
PauliTermSum build_hamiltonian(const ModelSpec& spec);

}  // namespace estlab
