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

#include "estlab/energy.hpp"
#include "estlab/experiment.hpp"
#include "oracles.hpp"

namespace {

using namespace estlab;
constexpr double kPi = std::numbers::pi;

PauliTermSum transverse(int n) { return build_hamiltonian({ModelKind::TransverseCoupled, n, 1.0, {}}); }
PauliTermSum ising(int n) { return build_hamiltonian({ModelKind::DegenerateIsing, n, 1.0, {}}); }

double dense_energy(const PauliTermSum& h, const StateVector& psi) {
  const Eigen::VectorXcd v = oracle::vec(psi);
  return (v.adjoint() * oracle::dense(h) * v)(0, 0).real();
}

TEST(EnergyBefore, Examples) {
  EXPECT_NEAR(energy_before(StateVector::plus_state(5), ising(4)), 0.0, 1e-14);
  EXPECT_NEAR(energy_before(StateVector::plus_state(3), transverse(2)), 3.0, 1e-14);
  EXPECT_THROW(energy_before(StateVector::plus_state(3), transverse(3)), DimensionError);
}

TEST(EnergyBefore, EigenstateGivesEigenvalue) {
  const auto h = transverse(2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::dense(h));
  for (int k = 0; k < 8; ++k) {
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    const auto psi = StateVector::from_amplitudes(std::vector<Complex>(v.data(), v.data() + v.size()));
    EXPECT_NEAR(energy_before(psi, h), es.eigenvalues()(k), 1e-10);
  }
}

TEST(EnergyBefore, MatchesDenseOracle) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const int n = 1 + static_cast<int>(s % 5);
    const auto psi = oracle::random_state(n + 1, s);
    EXPECT_NEAR(energy_before(psi, transverse(n)), dense_energy(transverse(n), psi), 1e-12);
  }
}

TEST(EnergyAfter, SingleBranchAndEigenbasis) {
  CounterRng rng(4, 0);
  const CandidateBasis basis{1.0, 0.5};
  const auto env = StateVector::random(3, rng);
  const auto psi = StateVector::product(basis.state(1), env.amplitudes());
  const auto d = decompose(psi, basis);
  EXPECT_NEAR(energy_after_ensemble(d, transverse(3)), dense_energy(transverse(3), psi), 1e-12);
  EXPECT_NEAR(energy_delta(d, transverse(3)), 0.0, 1e-12);

  // Eigenstate of Z0 Z1 + Z0 Z2 decomposed in the Z basis.
  const auto eig = StateVector::basis_state(3, 0b011);
  const auto de = decompose(eig, {0.0, 0.0});
  EXPECT_NEAR(energy_after_ensemble(de, ising(2)), -2.0, 1e-12);
}

TEST(EnergyDelta, SubtractionIdentityOnRandomInputs) {
  CounterRng rng(17, 0);
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 5;
    const auto h = transverse(n);
    const auto psi = StateVector::random(n + 1, rng);
    const auto d = decompose(psi, {kPi * rng.next_uniform(), 2 * kPi * rng.next_uniform()});
    const double before = energy_before(psi, h), after = energy_after_ensemble(d, h);
    EXPECT_NEAR(energy_delta(d, h), before - after, 1e-10);
    // Oracle ensemble energy from the dense matrix on each branch.
    const double want = d.born_weight(0) * dense_energy(h, d.branch(0)) +
                        d.born_weight(1) * dense_energy(h, d.branch(1));
    EXPECT_NEAR(after, want, 1e-10);
  }
}

TEST(EnergyDelta, IsingZBasisConservesEnergy) {
  const Propagator prop(ising(5));
  for (double t : {0.1, 0.4, 1.3}) {
    const auto psi = prop.evolve(initial_state(5, InitialEnv::RandomProduct, 3), t);
    EXPECT_NEAR(energy_delta(decompose(psi, {0.0, 0.0}), ising(5)), 0.0, 1e-10);
  }
}

TEST(Audit, FieldsAndFloor) {
  const auto psi = Propagator(ising(3)).evolve(StateVector::plus_state(4), 0.3);
  const auto a = audit_energy(psi, decompose(psi, {kPi / 2, 0.0}), ising(3));
  EXPECT_EQ(a.env_spins, 3);
  EXPECT_TRUE(a.absolute);  // zero initial energy
  EXPECT_NEAR(a.relative_deviation, std::abs(a.delta_e), 1e-15);
  EXPECT_NEAR(a.delta_e, a.e_before - a.e_after_ensemble, 1e-10);

  const auto q = Propagator(transverse(3)).evolve(StateVector::plus_state(4), 0.3);
  const auto b = audit_energy(q, decompose(q, {0.4, 0.0}), transverse(3));
  EXPECT_FALSE(b.absolute);
  EXPECT_NEAR(b.relative_deviation, std::abs(b.delta_e / b.e_before), 1e-15);
}

TEST(Sweep, RelativeDeviationTrendsDown) {
  TraceOptions trace;
  trace.t_max = 1.0;
  trace.with_acceleration = false;
  std::vector<double> dev;
  for (int n : {2, 4, 6, 8}) {
    const auto h = transverse(n);
    const auto row = audit_at_speed_peak(StateVector::plus_state(n + 1), Propagator(h), trace, BasisMethod::Scan);
    EXPECT_GT(row.t_c, 0.0);
    EXPECT_EQ(row.basis_source, "scan");
    dev.push_back(row.audit.relative_deviation);
  }
  for (std::size_t k = 1; k < dev.size(); ++k) EXPECT_LE(dev[k], 1.1 * dev[k - 1]) << k;
  EXPECT_LT(dev.back(), dev.front());
}

TrajectoryResult frequent_collapse_run() {
  TrajectoryOptions opts;
  opts.policy.threshold = 0.05;
  opts.t_max = 1.5;
  opts.seed = 5;
  return run_trajectory(StateVector::plus_state(9), Propagator(transverse(8)), opts);
}

bool dominant_realized(const CollapseEvent& e) {
  const int dom = e.born_weights[0] >= e.born_weights[1] ? 0 : 1;
  return e.outcome_index == dom && e.born_weights[dom] > 0.99;
}

TEST(DominantOutcome, EnsembleGapIsMinorityLeakage) {
  // E_ens - E_dom = (1 - w) (E_minor - E_dom), checked against dense energies.
  const auto h = transverse(8);
  const auto r = frequent_collapse_run();
  ASSERT_GE(r.events.size(), 10u);
  const Propagator prop(h);
  StateVector psi = StateVector::plus_state(9);
  double t = 0.0;
  for (const auto& e : r.events) {
    psi = prop.evolve(psi, e.t_c - t);
    t = e.t_c;
    const auto d = decompose(psi, e.basis);
    const int dom = e.born_weights[0] >= e.born_weights[1] ? 0 : 1;
    const double e_dom = energy_before(d.branch(dom), h), e_min = energy_before(d.branch(1 - dom), h);
    EXPECT_NEAR(energy_after_ensemble(d, h) - e_dom, (1 - d.born_weight(dom)) * (e_min - e_dom), 1e-9);
    psi = d.branch(e.outcome_index);
  }
}

TEST(DominantOutcome, SingleEventConservesEnergy) {
  const auto r = frequent_collapse_run();
  int dominant = 0;
  for (const auto& e : r.events) {
    if (!dominant_realized(e)) continue;
    ++dominant;
    EXPECT_LT(std::abs(e.e_after_actual - e.e_before), 1e-2 * std::abs(e.e_before)) << e.t_c;
  }
  EXPECT_GE(dominant, 10);
}

TEST(DominantOutcome, ActualEnergyNearEnsemble) {
  const auto r = frequent_collapse_run();
  int dominant = 0;
  for (const auto& e : r.events) {
    if (!dominant_realized(e)) continue;
    ++dominant;
    EXPECT_LT(std::abs(e.e_after_actual - e.e_after_ensemble), 1e-2 * std::abs(e.e_before))
        << "t_c=" << e.t_c << " w=" << std::max(e.born_weights[0], e.born_weights[1]);
  }
  EXPECT_GE(dominant, 10);
}

TEST(EnergyCsv, Columns) {
  EnergySweepRow row;
  row.audit.env_spins = 2;
  row.basis_source = "scan";
  std::ostringstream out;
  write_energy_csv(out, {row}, "c");
  std::istringstream in(out.str());
  std::string comment, header, data;
  std::getline(in, comment);
  std::getline(in, header);
  std::getline(in, data);
  EXPECT_EQ(comment, "# c");
  EXPECT_EQ(header, "N,t_c,peak_speed,theta,phi,e_before,e_after_ensemble,delta_e,relative_deviation,absolute,"
                    "basis_source,fallback");
  EXPECT_EQ(data.substr(0, 2), "2,");
}

}  // namespace
