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

#include "estlab/bullet.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "estlab/airy.hpp"

namespace estlab::bullet {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

void check_grid(const GridSpec& g) {
  if (!(g.xi_max > g.xi_min) || g.points < 16) {
    throw std::invalid_argument("bullet grid needs xi_max > xi_min and at least 16 points");
  }
}

double spacing(const GridSpec& g) { return (g.xi_max - g.xi_min) / (g.points - 1); }

// Normalizes v so that sum v^2 h = 1 and v is positive where |v| peaks.
void normalize(std::vector<double>& v, double h) {
  double n2 = 0.0;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    n2 += v[i] * v[i];
    if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
  }
  const double s = (v[peak] < 0.0 ? -1.0 : 1.0) / std::sqrt(n2 * h);
  for (auto& x : v) x *= s;
}

WavePacket to_packet(const std::vector<double>& reduced, const GridSpec& g, const VeeOperator& op) {
  WavePacket p;
  const double h = spacing(g);
  const double root = std::sqrt(op.length_scale);
  p.dxi = h;
  p.dx = h * op.length_scale;
  p.xi.resize(reduced.size());
  p.x.resize(reduced.size());
  p.values.resize(reduced.size());
  const double k0 = op.p0 / kHbar;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    p.xi[i] = g.xi_min + static_cast<double>(i) * h;
    p.x[i] = op.x0 + p.xi[i] * op.length_scale;
    p.values[i] = std::polar(reduced[i] / root, k0 * p.x[i]);
  }
  return p;
}

}  // namespace

double BulletParams::half_side() const { return 0.5 * std::cbrt(mass / density); }

void BulletParams::validate() const {
  require_positive(mass, "mass");
  require_positive(density, "density");
  require_positive(eta, "eta");
  require_positive(line_density, "line_density");
  if (!std::isfinite(v0) || !std::isfinite(x0)) throw std::invalid_argument("v0 and x0 must be finite");
}

VeeOperator collapse_operator_vee(const BulletParams& params) {
  params.validate();
  const double a = params.half_side();
  const double m = params.mass;
  const double c2 = kLightSpeed * kLightSpeed;
  VeeOperator op;
  op.slope = m * m * c2 / (a * kHbar * kHbar);
  op.prefactor = params.eta * params.line_density * a * kHbar * kHbar / (m * m * c2);
  op.x0 = params.x0;
  op.p0 = params.momentum();
  op.length_scale = 1.0 / std::cbrt(2.0 * op.slope);
  return op;
}

ReducedEigenpair solve_reduced_ground_state(const GridSpec& grid) {
  check_grid(grid);
  const auto n = static_cast<std::size_t>(grid.points);
  const double h = spacing(grid);
  const double off = -1.0 / (h * h);
  // Below the lowest eigenvalue (about 1.0188) and well clear of the next
  // (about 2.3381), so H - shift is positive definite.
  const double shift = 0.9;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 2.0 / (h * h) + std::abs(grid.xi_min + static_cast<double>(i) * h) - shift;
  }
  // Thomas factorization of the constant-off-diagonal tridiagonal matrix.
  std::vector<double> piv(n);
  piv[0] = diag[0];
  for (std::size_t i = 1; i < n; ++i) piv[i] = diag[i] - off * off / piv[i - 1];

  auto apply_h = [&](const std::vector<double>& v, std::size_t i) {
    double r = (diag[i] + shift) * v[i];
    if (i > 0) r += off * v[i - 1];
    if (i + 1 < n) r += off * v[i + 1];
    return r;
  };

  std::vector<double> v(n, 1.0), y(n);
  ReducedEigenpair out;
  double previous = 0.0;
  for (int it = 1; it <= 200; ++it) {
    // Forward and back substitution.
    y[0] = v[0];
    for (std::size_t i = 1; i < n; ++i) y[i] = v[i] - off / piv[i - 1] * y[i - 1];
    y[n - 1] /= piv[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = (y[i] - off * y[i + 1]) / piv[i];
    normalize(y, h);
    v.swap(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += v[i] * apply_h(v, i);
      den += v[i] * v[i];
    }
    out.energy = num / den;
    out.iterations = it;
    if (it > 2 && std::abs(out.energy - previous) < 1e-15 * std::abs(out.energy)) break;
    previous = out.energy;
  }
  double resid = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = apply_h(v, i) - out.energy * v[i];
    resid += r * r;
    norm += v[i] * v[i];
  }
  if (std::sqrt(resid / norm) > 1e-6) {
    throw NumericalError("vee ground state: inverse iteration did not converge");
  }
  out.vector = std::move(v);
  return out;
}

GroundState ground_state(const BulletParams& params, const GridSpec& grid) {
  check_grid(grid);
  const VeeOperator op = collapse_operator_vee(params);
  const double h = spacing(grid);
  const auto n = static_cast<std::size_t>(grid.points);

  GroundState gs;
  gs.energy_exact = -airy_ai_prime_first_zero();
  gs.airy_constant_exact = gs.energy_exact / std::cbrt(2.0);

  std::vector<double> exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    exact[i] = airy_ai(std::abs(grid.xi_min + static_cast<double>(i) * h) - gs.energy_exact);
  }
  normalize(exact, h);
  gs.edge_amplitude = std::max(std::abs(exact.front()), std::abs(exact.back()));
  if (gs.edge_amplitude >= grid.edge_tolerance) {
    throw std::invalid_argument("bullet grid too narrow: edge amplitude " +
                                std::to_string(gs.edge_amplitude) + " >= " +
                                std::to_string(grid.edge_tolerance));
  }

  ReducedEigenpair fd = solve_reduced_ground_state(grid);
  gs.energy_numeric = fd.energy;
  gs.airy_constant_numeric = fd.energy / std::cbrt(2.0);
  gs.iterations = fd.iterations;
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) d2 += (exact[i] - fd.vector[i]) * (exact[i] - fd.vector[i]);
  gs.l2_distance = std::sqrt(d2 * h);

  gs.closed_form = to_packet(exact, grid, op);
  gs.numeric = to_packet(fd.vector, grid, op);
  return gs;
}

Moments packet_moments(const WavePacket& packet) {
  const auto& psi = packet.values;
  const std::size_t n = psi.size();
  if (n < 3 || packet.x.size() != n) throw std::invalid_argument("packet_moments: bad packet");
  // Positions are measured from the grid centre to keep the sums well scaled.
  const double origin = packet.x[n / 2];
  double norm = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::norm(psi[i]) * packet.dx;
    const double y = packet.x[i] - origin;
    norm += w;
    m1 += w * y;
    m2 += w * y * y;
  }
  m1 /= norm;
  m2 /= norm;
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex diff = (psi[i + 1] - psi[i]) / packet.dx;
    p2 += std::norm(diff) * packet.dx;
    if (i > 0) {
      const Complex central = (psi[i + 1] - psi[i - 1]) / (2.0 * packet.dx);
      p1 += (std::conj(psi[i]) * central).imag() * packet.dx;
    }
  }
  p1 *= kHbar / norm;
  p2 *= kHbar * kHbar / norm;
  Moments m;
  m.mean_x = origin + m1;
  m.sigma_x = std::sqrt(std::max(0.0, m2 - m1 * m1));
  m.mean_p = p1;
  m.sigma_p = std::sqrt(std::max(0.0, p2 - p1 * p1));
  return m;
}

Uncertainties uncertainties(const BulletParams& params, const GridSpec& grid) {
  params.validate();
  const double m = params.mass;
  const double rho3 = std::cbrt(params.density);
  const double c2 = kLightSpeed * kLightSpeed;
  Uncertainties u;
  u.delta_x_formula = std::cbrt(kHbar * kHbar / (2.0 * c2 * rho3)) * std::pow(m, -5.0 / 9.0);
  u.delta_v_formula = 0.5 * std::cbrt(2.0 * kHbar * c2 * rho3) * std::pow(m, -4.0 / 9.0);

  const GroundState gs = ground_state(params, grid);
  const Moments mo = packet_moments(gs.numeric);
  u.delta_x_numeric = mo.sigma_x;
  u.delta_v_numeric = mo.sigma_p / m;
  u.product_over_hbar = m * u.delta_x_numeric * u.delta_v_numeric / kHbar;
  return u;
}

double dominance_ratio(const BulletParams& params) {
  params.validate();
  const double kinetic = params.eta * params.line_density * params.half_side() /
                         (kLightSpeed * kLightSpeed);
  return kinetic / (0.5 * params.mass);
}

std::string report_json(const BulletParams& params, const GridSpec& grid) {
  const VeeOperator op = collapse_operator_vee(params);
  const GroundState gs = ground_state(params, grid);
  const Uncertainties u = uncertainties(params, grid);
  nlohmann::ordered_json j;
  j["a"] = params.half_side();
  j["b"] = op.slope;
  j["delta_x_formula"] = u.delta_x_formula;
  j["delta_x_numeric"] = u.delta_x_numeric;
  j["delta_v_formula"] = u.delta_v_formula;
  j["delta_v_numeric"] = u.delta_v_numeric;
  j["product_over_hbar"] = u.product_over_hbar;
  j["dominance_ratio"] = dominance_ratio(params);
  j["ground_energy_exact"] = gs.energy_exact;
  j["ground_energy_numeric"] = gs.energy_numeric;
  j["airy_constant_exact"] = gs.airy_constant_exact;
  j["airy_constant_numeric"] = gs.airy_constant_numeric;
  j["l2_distance"] = gs.l2_distance;
  j["edge_amplitude"] = gs.edge_amplitude;
  return j.dump(2) + "\n";
}

}  // namespace estlab::bullet
