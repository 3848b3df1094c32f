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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "estlab/experiment.hpp"
#include "oracles.hpp"

namespace {

using namespace estlab;
constexpr double kPi = std::numbers::pi;

Propagator ising(int n, double g) { return Propagator(build_hamiltonian({ModelKind::DegenerateIsing, n, g, {}})); }

TEST(AnalyticState, InitialAndRevival) {
  for (int n : {1, 4, 7}) {
    EXPECT_LT(analytic_state(n, 1.3, 0.0).distance(StateVector::plus_state(n + 1)), 1e-15);
    EXPECT_NEAR(analytic_state(n, 1.3, 2 * kPi / 1.3).fidelity(StateVector::plus_state(n + 1)), 1.0, 1e-12);
  }
  EXPECT_THROW(analytic_state(0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(analytic_state(2, 0.0, 0.1), std::invalid_argument);
}

TEST(AnalyticState, MatchesNumericEvolutionAndBranchOracle) {
  const auto psi = analytic_state(3, 1.0, 0.3);
  EXPECT_LT(psi.distance(ising(3, 1.0).evolve(StateVector::plus_state(4), 0.3)), 1e-10);
  EXPECT_LT((oracle::vec(psi) - oracle::ising_closed_form(3, 1.0, 0.3)).norm(), 1e-14);
}

TEST(AnalyticState, FiftyRandomPoints) {
  CounterRng rng(31, 0);
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + static_cast<int>(rng.next_bits() % 10);
    const double g = 0.5 + rng.next_uniform();
    const double t = 2 * kPi * rng.next_uniform() / g;
    const auto numeric = ising(n, g).evolve(StateVector::plus_state(n + 1), t);
    EXPECT_GT(numeric.fidelity(analytic_state(n, g, t)), 1 - 1e-9) << n << " " << t;
  }
}

TEST(AnalyticState, ReducedEigenvaluesMatchEntropy) {
  for (int n = 1; n <= 8; ++n) {
    for (double t : {0.1, 0.7, 2.2}) {
      const auto ev = analytic_reduced_eigenvalues(n, 0.8, t);
      const double c = std::pow(std::abs(std::cos(1.6 * t)), n);
      EXPECT_NEAR(ev[0], (1 - c) / 2, 1e-14);
      EXPECT_NEAR(ev[1], (1 + c) / 2, 1e-14);
      EXPECT_NEAR(system_entropy(analytic_state(n, 0.8, t)), oracle::entropy_of({ev[0], ev[1]}), 1e-10);
    }
  }
}

TEST(Revival, NumericFidelityAcrossSizes) {
  for (int n = 2; n <= 10; ++n) {
    const auto psi = ising(n, 1.0).evolve(StateVector::plus_state(n + 1), 2 * kPi);
    EXPECT_NEAR(psi.fidelity(StateVector::plus_state(n + 1)), 1.0, 1e-8) << n;
  }
}

TEST(InitialState, Variants) {
  EXPECT_LT(initial_state(3, InitialEnv::Plus).distance(StateVector::plus_state(4)), 1e-15);
  const auto z = initial_state(3, InitialEnv::Zero);
  EXPECT_NEAR(std::abs(z[0]), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(z[8]), 1 / std::sqrt(2.0), 1e-15);
  const auto r1 = initial_state(3, InitialEnv::RandomProduct, 9, 1);
  EXPECT_EQ(r1.distance(initial_state(3, InitialEnv::RandomProduct, 9, 1)), 0.0);
  EXPECT_GT(r1.distance(initial_state(3, InitialEnv::RandomProduct, 9, 2)), 1e-3);
  EXPECT_TRUE(is_product_state(r1));
  EXPECT_EQ(parse_initial_env("random_product"), InitialEnv::RandomProduct);
  EXPECT_THROW(parse_initial_env("thermal"), std::invalid_argument);
}

TEST(RevivalProtocol, NoCollapseMeansCertainPlus) {
  RevivalOptions opts;
  opts.trials = 3;
  for (int n : {2, 5}) {
    const auto r = revival_protocol(n, 1.0, opts);
    EXPECT_NEAR(r.p_minus, 0.0, 1e-9);
    EXPECT_NEAR(r.p_plus + r.p_minus, 1.0, 1e-10);
    EXPECT_NEAR(r.fidelity_at_revival, 1.0, 1e-8);
    EXPECT_EQ(r.collapse_events_before_revival, 0u);
    EXPECT_NEAR(r.t_rev, 2 * kPi, 1e-15);
  }
}

TEST(RevivalProtocol, CollapseMakesMinusPossible) {
  RevivalOptions opts;
  opts.trials = 100;
  opts.seed = 1;
  opts.policy.threshold = 1.5;
  opts.sample_clicks = true;
  const auto r = revival_protocol(6, 1.0, opts);
  EXPECT_GT(r.p_minus, 0.01);
  EXPECT_NEAR(r.p_plus + r.p_minus, 1.0, 1e-10);
  EXPECT_GE(r.fidelity_at_revival, 0.0);
  EXPECT_LE(r.fidelity_at_revival, 1.0);
  EXPECT_EQ(r.trials_with_collapse, 100);
  EXPECT_GT(r.minus_clicks, 0);
  EXPECT_LT(r.minus_clicks, 100);
  const auto j = nlohmann::json::parse(revival_json(r));
  EXPECT_EQ(j["trials"].get<int>(), 100);
}

TEST(RevivalProtocol, Reproducible) {
  RevivalOptions opts;
  opts.trials = 8;
  opts.seed = 4;
  opts.policy.threshold = 1.5;
  opts.sample_clicks = true;
  EXPECT_EQ(revival_json(revival_protocol(4, 1.0, opts)), revival_json(revival_protocol(4, 1.0, opts)));
}

TEST(CriticalSweep, FirstCollapsingSizeFollowsMaxSpeed) {
  RevivalOptions opts;
  opts.policy.threshold = 2.9;
  const std::vector<int> sizes{2, 3, 4, 5, 6, 7, 8};
  const auto rows = critical_sweep(sizes, 1.0, opts);
  ASSERT_EQ(rows.size(), sizes.size());
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(rows[k].max_speed, rows[k - 1].max_speed);
  int expected = -1;
  for (const auto& r : rows) {
    if (r.max_speed >= opts.policy.threshold) {
      expected = r.env_spins;
      break;
    }
  }
  EXPECT_EQ(critical_env_size(rows), expected);
  EXPECT_GT(expected, 2);
  for (const auto& r : rows) {
    if (r.env_spins < expected) {
      EXPECT_EQ(r.events, 0u);
    }
  }
  std::ostringstream out;
  write_critical_csv(out, rows, "c");
  EXPECT_NE(out.str().find("N,max_speed,events,first_event_time"), std::string::npos);
}

}  // namespace
