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

namespace estlab {

struct AiryPair {
  double ai;
  double ai_prime;
};

/// Ai(x) and Ai'(x). Maclaurin series (long double) on [-7, 1], the
/// Macdonald-function integral representation above 1, and the oscillatory
/// asymptotic expansion below -7. Underflows to 0 for large positive x.
AiryPair airy(double x);
double airy_ai(double x);
double airy_ai_prime(double x);

/// First (least negative) zero of Ai', by bisection. -1.0187929716...
double airy_ai_prime_first_zero();

namespace airy_detail {
AiryPair series(double x);
/// x > 0 only.
AiryPair macdonald_integral(double x);
/// x < 0 only; accurate for x < -5.
AiryPair oscillatory_asymptotic(double x);
}  // namespace airy_detail

}  // namespace estlab
