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

#include "estlab/airy.hpp"

#include <cmath>
#include <stdexcept>

namespace estlab {
namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAiPrime0 = -0.258819403792806798405183560189203963L;
constexpr double kPiD = 3.14159265358979323846;

// K_nu(z) * e^z by the trapezoid rule on int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt.
// The integrand is entire and bounded in |Im t| < pi/2, so the error falls like
// exp(-pi^2 / h).
double scaled_macdonald(double nu, double z) {
  constexpr double h = 0.0625;
  double sum = 0.5;
  for (int k = 1; k < 4000; ++k) {
    const double t = k * h;
    const double term = std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return h * sum;
}

}  // namespace

namespace airy_detail {

AiryPair series(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  // f = sum x^{3k} / prod (3j-1)(3j), g = sum x^{3k+1} / prod (3j)(3j+1).
  long double a = 1.0L, f = 1.0L;
  long double b = x, g = x;
  long double p = x * x / 2.0L, fp = p;  // f'
  long double q = 1.0L, gp = 1.0L;       // g'
  for (int k = 1; k < 200; ++k) {
    a *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    b *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    q *= x3 / ((3.0L * k - 2.0L) * (3.0L * k));
    if (k > 1) p *= x3 / ((3.0L * k - 3.0L) * (3.0L * k - 1.0L));
    f += a;
    g += b;
    gp += q;
    if (k > 1) fp += p;
    const long double scale = fabsl(f) + fabsl(g) + fabsl(fp) + fabsl(gp);
    if (fabsl(a) + fabsl(b) + fabsl(p) + fabsl(q) < 1e-21L * scale) break;
  }
  return {static_cast<double>(kAi0 * f + kAiPrime0 * g),
          static_cast<double>(kAi0 * fp + kAiPrime0 * gp)};
}

AiryPair macdonald_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("macdonald_integral: x must be positive");
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double decay = std::exp(-zeta);
  if (decay == 0.0) return {0.0, -0.0};
  const double ai = std::sqrt(x / 3.0) / kPiD * scaled_macdonald(1.0 / 3.0, zeta) * decay;
  const double aip = -x / (kPiD * std::sqrt(3.0)) * scaled_macdonald(2.0 / 3.0, zeta) * decay;
  return {ai, aip};
}

AiryPair oscillatory_asymptotic(double xd) {
  if (!(xd < 0.0)) throw std::domain_error("oscillatory_asymptotic: x must be negative");
  const double z = -xd;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!), v_k = -(6k+1)/(6k-1) u_k.
  double pu = 0.0, qu = 0.0, pv = 0.0, qv = 0.0;
  double u = 1.0, zk = 1.0, last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
      zk *= zeta;
    }
    const double v = k == 0 ? 1.0 : -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double tu = u / zk, tv = v / zk;
    // Stop at the smallest term of the divergent series.
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      pu += sign * tu;
      pv += sign * tv;
    } else {
      qu += sign * tu;
      qv += sign * tv;
    }
  }
  const double phase = zeta - 0.25 * kPiD;
  const double amp = 1.0 / std::sqrt(kPiD);
  const double z4 = std::sqrt(std::sqrt(z));
  const double ai = amp / z4 * (std::cos(phase) * pu + std::sin(phase) * qu);
  const double aip = amp * z4 * (std::sin(phase) * pv - std::cos(phase) * qv);
  return {ai, aip};
}

}  // namespace airy_detail

AiryPair airy(double x) {
  if (std::isnan(x)) return {x, x};
  if (x > 1.0) return airy_detail::macdonald_integral(x);
  if (x >= -7.0) return airy_detail::series(x);
  return airy_detail::oscillatory_asymptotic(x);
}

double airy_ai(double x) { return airy(x).ai; }

double airy_ai_prime(double x) { return airy(x).ai_prime; }

double airy_ai_prime_first_zero() {
  double lo = -1.5, hi = -0.5;  // Ai'(lo) > 0 > Ai'(hi)
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (airy_ai_prime(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace estlab
