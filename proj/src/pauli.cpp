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

#include "estlab/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace estlab {

const char* to_string(TermKind kind) {
  switch (kind) {
    case TermKind::SystemOnly: return "system";
    case TermKind::EnvOnly: return "environment";
    case TermKind::Interaction: return "interaction";
  }
  return "?";
}

PauliString::PauliString(int num_sites) : num_sites_(num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw DimensionError("PauliString: site count must be in [1, " +
                         std::to_string(kMaxSites) + "], got " + std::to_string(num_sites));
  }
}

PauliString PauliString::parse(std::string_view labels) {
  PauliString s(static_cast<int>(labels.size()));
  for (int site = 0; site < s.num_sites_; ++site) {
    switch (labels[static_cast<std::size_t>(site)]) {
      case 'I': break;
      case 'X': s.set(site, Pauli::X); break;
      case 'Y': s.set(site, Pauli::Y); break;
      case 'Z': s.set(site, Pauli::Z); break;
      default:
        throw std::invalid_argument("PauliString: bad label '" + std::string(labels) + "'");
    }
  }
  return s;
}

PauliString PauliString::single(int num_sites, int site, Pauli p) {
  PauliString s(num_sites);
  s.set(site, p);
  return s;
}

std::uint64_t PauliString::bit(int site) const {
  return std::uint64_t{1} << (num_sites_ - 1 - site);
}

void PauliString::check_site(int site) const {
  if (site < 0 || site >= num_sites_) {
    throw DimensionError("PauliString: site " + std::to_string(site) + " out of range");
  }
}

PauliString& PauliString::set(int site, Pauli p) {
  check_site(site);
  const auto b = bit(site);
  x_mask_ &= ~b;
  z_mask_ &= ~b;
  if (p == Pauli::X || p == Pauli::Y) x_mask_ |= b;
  if (p == Pauli::Z || p == Pauli::Y) z_mask_ |= b;
  return *this;
}

Pauli PauliString::at(int site) const {
  check_site(site);
  const bool x = (x_mask_ & bit(site)) != 0;
  const bool z = (z_mask_ & bit(site)) != 0;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

bool PauliString::acts_on(int site) const {
  check_site(site);
  return (support_mask() & bit(site)) != 0;
}

std::string PauliString::str() const {
  static constexpr char kLabels[] = {'I', 'X', 'Y', 'Z'};
  std::string out;
  out.reserve(static_cast<std::size_t>(num_sites_));
  for (int s = 0; s < num_sites_; ++s) out.push_back(kLabels[static_cast<int>(at(s))]);
  return out;
}

TermKind classify(const PauliString& s) {
  const std::uint64_t system_bit = std::uint64_t{1} << (s.num_sites() - 1);
  const std::uint64_t support = s.support_mask();
  if ((support & system_bit) == 0) return TermKind::EnvOnly;
  if ((support & ~system_bit) == 0) return TermKind::SystemOnly;
  return TermKind::Interaction;
}

PauliTermSum::PauliTermSum(int num_sites) : num_sites_(num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw DimensionError("PauliTermSum: site count out of range");
  }
}

void PauliTermSum::add(double coefficient, PauliString string) {
  if (string.num_sites() != num_sites_) {
    throw DimensionError("PauliTermSum: term has " + std::to_string(string.num_sites()) +
                         " sites, sum has " + std::to_string(num_sites_));
  }
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("PauliTermSum: non-finite coefficient");
  }
  const TermKind kind = classify(string);
  terms_.push_back(PauliTerm{coefficient, std::move(string), kind});
}

double PauliTermSum::norm_bound() const {
  double total = 0.0;
  for (const auto& t : terms_) total += std::abs(t.coefficient);
  return total;
}

bool PauliTermSum::is_diagonal() const {
  for (const auto& t : terms_) {
    if (!t.string.is_diagonal()) return false;
  }
  return true;
}

std::size_t PauliTermSum::count(TermKind kind) const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += (t.kind == kind) ? 1 : 0;
  return n;
}

PauliTermSum PauliTermSum::filtered(TermKind kind) const {
  PauliTermSum out(num_sites_);
  for (const auto& t : terms_) {
    if (t.kind == kind) out.add(t.coefficient, t.string);
  }
  return out;
}

PauliTermSum PauliTermSum::operator-() const {
  PauliTermSum out(num_sites_);
  for (const auto& t : terms_) out.add(-t.coefficient, t.string);
  return out;
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "degenerate_ising") return ModelKind::DegenerateIsing;
  if (name == "transverse_coupled") return ModelKind::TransverseCoupled;
  if (name == "custom") return ModelKind::Custom;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DegenerateIsing: return "degenerate_ising";
    case ModelKind::TransverseCoupled: return "transverse_coupled";
    case ModelKind::Custom: return "custom";
  }
  return "?";
}

PauliTermSum build_hamiltonian(const ModelSpec& spec) {
  if (spec.env_spins < 1) {
    throw std::invalid_argument("build_hamiltonian: need at least one environment spin");
  }
  const int n = spec.env_spins + 1;
  PauliTermSum h(n);
  switch (spec.kind) {
    case ModelKind::DegenerateIsing:
      for (int k = 1; k < n; ++k) {
        h.add(spec.coupling, PauliString::single(n, 0, Pauli::Z).set(k, Pauli::Z));
      }
      break;
    case ModelKind::TransverseCoupled:
      h.add(1.0, PauliString::single(n, 0, Pauli::X));
      for (int k = 1; k < n; ++k) {
        h.add(1.0, PauliString::single(n, 0, Pauli::Z).set(k, Pauli::Z));
      }
      for (int k = 1; k < n; ++k) h.add(1.0, PauliString::single(n, k, Pauli::X));
      break;
    case ModelKind::Custom:
      for (const auto& term : spec.custom) {
        if (std::abs(term.coefficient.imag()) > 1e-14) {
          throw std::invalid_argument("build_hamiltonian: term " + term.labels +
                                      " has a complex weight; the operator would not be Hermitian");
        }
        auto s = PauliString::parse(term.labels);
        if (s.num_sites() != n) {
          throw DimensionError("build_hamiltonian: term " + term.labels + " does not span " +
                               std::to_string(n) + " sites");
        }
        h.add(term.coefficient.real(), std::move(s));
      }
      break;
  }
  return h;
}

}  // namespace estlab
