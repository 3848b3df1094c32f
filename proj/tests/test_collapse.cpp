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

#include <Eigen/QR>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "estlab/basis.hpp"
#include "estlab/collapse.hpp"
#include "estlab/experiment.hpp"
#include "estlab/measurement.hpp"
#include "estlab/pauli.hpp"
#include "oracles.hpp"

namespace {

using namespace estlab;
constexpr double kPi = std::numbers::pi;

PauliTermSum transverse_h(int n) { return build_hamiltonian({ModelKind::TransverseCoupled, n, 1.0, {}}); }
Propagator transverse(int n) { return Propagator(transverse_h(n)); }
Propagator ising(int n, double g = 1.0) {
  return Propagator(build_hamiltonian({ModelKind::DegenerateIsing, n, g, {}}));
}

StateVector from_vec(const Eigen::VectorXcd& v) {
  return StateVector::from_amplitudes(std::vector<Complex>(v.data(), v.data() + v.size()));
}

CandidateBasis random_basis(CounterRng& rng) { return {kPi * rng.next_uniform(), 2 * kPi * rng.next_uniform()}; }

// --- bases and decomposition ---

TEST(CandidateBasis, OrthonormalPair) {
  CounterRng rng(1, 1);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_basis(rng);
    const Qubit a0 = b.state(0), a1 = b.state(1);
    EXPECT_NEAR(std::norm(a0[0]) + std::norm(a0[1]), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(a1[0]) + std::norm(a1[1]), 1.0, 1e-12);
    EXPECT_LT(std::abs(std::conj(a0[0]) * a1[0] + std::conj(a0[1]) * a1[1]), 1e-12);
    EXPECT_LT(angular_distance(b, b.canonical()), 1e-7);
    EXPECT_LE(b.canonical().theta, kPi / 2 + 1e-12);
    EXPECT_LT(angular_distance(b, CandidateBasis::from_qubit(a0)), 1e-7);
    EXPECT_LT(angular_distance(b, CandidateBasis::from_qubit(a1)), 1e-7);
  }
  EXPECT_NEAR(angular_distance({0.0, 0.0}, {kPi / 2, 0.3}), kPi / 2, 1e-12);
  const auto pole = CandidateBasis{kPi, 1.3}.canonical();
  EXPECT_EQ(pole.theta, 0.0);
  EXPECT_EQ(pole.phi, 0.0);
}

TEST(Decompose, ProductStateInMatchingBasis) {
  CounterRng rng(3, 0);
  const auto basis = random_basis(rng);
  const auto env = StateVector::random(3, rng);
  const auto psi = StateVector::product(basis.state(0), env.amplitudes());
  const auto d = decompose(psi, basis);
  EXPECT_NEAR(std::abs(d.weights[0]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(d.weights[1]), 0.0, 1e-12);
  EXPECT_TRUE(d.placeholder[1]);
  EXPECT_FALSE(d.placeholder[0]);
}

TEST(Decompose, BellStateComputationalBasis) {
  const auto bell = StateVector::from_amplitudes({1.0, 0.0, 0.0, 1.0});
  const auto d = decompose(bell, {0.0, 0.0});
  EXPECT_NEAR(d.weights[0].real(), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.weights[1].real(), 1 / std::sqrt(2.0), 1e-12);
  const Complex overlap = std::conj(d.env_states[0][0]) * d.env_states[1][0] +
                          std::conj(d.env_states[0][1]) * d.env_states[1][1];
  EXPECT_LT(std::abs(overlap), 1e-12);
}

TEST(Decompose, IsingBranchOverlap) {
  const auto psi = from_vec(oracle::ising_closed_form(2, 1.0, kPi / 8));
  const auto d = decompose(psi, {0.0, 0.0});
  EXPECT_NEAR(std::abs(d.weights[0]), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(d.weights[1]), 1 / std::sqrt(2.0), 1e-12);
  Complex overlap = 0.0;
  for (std::size_t e = 0; e < 4; ++e) overlap += std::conj(d.env_states[0][e]) * d.env_states[1][e];
  EXPECT_NEAR(std::abs(overlap), std::pow(std::cos(kPi / 4), 2), 1e-12);
}

TEST(Decompose, ReconstructionAndPhaseInvariance) {
  CounterRng rng(11, 0);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 4;
    const auto psi = StateVector::random(n, rng);
    const auto basis = random_basis(rng);
    const auto d = decompose(psi, basis);
    EXPECT_NEAR(d.born_weight(0) + d.born_weight(1), 1.0, 1e-10);
    const auto back = d.reconstruct();
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) err += std::norm(back[i] - psi[i]);
    EXPECT_LT(std::sqrt(err), 1e-10);
    const auto rotated = decompose(psi.with_global_phase(2 * kPi * rng.next_uniform()), basis);
    EXPECT_NEAR(rotated.born_weight(0), d.born_weight(0), 1e-12);
    EXPECT_NEAR(rotated.born_weight(1), d.born_weight(1), 1e-12);
  }
}

TEST(Decompose, DimensionErrors) {
  EXPECT_THROW(decompose(StateVector::plus_state(1), {0.0, 0.0}), DimensionError);
}

// --- ensemble-averaged acceleration ---

TEST(MeanAcceleration, Examples) {
  const auto psi = ising(4).evolve(StateVector::plus_state(5), 0.2);
  const Propagator zero{PauliTermSum(5)};
  EXPECT_NEAR(mean_entangling_acceleration(decompose(psi, {0.3, 1.0}), zero), 0.0, 1e-9);
  const double z = mean_entangling_acceleration(decompose(psi, {0.0, 0.0}), ising(4));
  const double x = mean_entangling_acceleration(decompose(psi, {kPi / 2, 0.0}), ising(4));
  EXPECT_NEAR(z, 0.0, 1e-6);
  EXPECT_GT(x, z);
}

TEST(MeanAcceleration, WeightedSumOfBranchAccelerations) {
  const auto prop = transverse(3);
  const auto psi = prop.evolve(StateVector::plus_state(4), 0.15);
  const auto d = decompose(psi, {1.1, 0.4});
  const double want = d.born_weight(0) * product_state_acceleration(d.branch(0), prop) +
                      d.born_weight(1) * product_state_acceleration(d.branch(1), prop);
  EXPECT_NEAR(mean_entangling_acceleration(d, prop), want, 1e-9);
}

TEST(BasisObjective, MatchesSerialReferenceGrid) {
  ScanOptions opts;
  opts.theta_points = 9;
  opts.phi_points = 8;
  for (int n : {2, 4}) {
    const auto prop = transverse(n);
    const auto psi = prop.evolve(initial_state(n, InitialEnv::RandomProduct, 5), 0.1);
    const auto fast = scan_grid(BasisObjective(psi, prop), opts);
    const auto slow = reference::scan_grid_serial(psi, prop, opts);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-6) << i;
  }
}

TEST(BasisObjective, OneSidedStencilAlsoMatches) {
  ScanOptions opts;
  opts.theta_points = 5;
  opts.phi_points = 4;
  opts.acceleration.product_stencil = ProductStencil::OneSided;
  const auto prop = transverse(3);
  const auto psi = prop.evolve(StateVector::plus_state(4), 0.12);
  const auto fast = scan_grid(BasisObjective(psi, prop, opts.acceleration), opts);
  const auto slow = reference::scan_grid_serial(psi, prop, opts);
  for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-6) << i;
}

// --- scan ---

TEST(Scan, IsingModelSelectsZBasis) {
  for (double t : {0.13, 0.37, 0.9}) {
    const auto prop = ising(4);
    const auto psi = prop.evolve(StateVector::plus_state(5), t);
    const auto r = scan_collapse_basis(psi, prop);
    EXPECT_LT(angular_distance(r.basis, {0.0, 0.0}), 1e-2) << t;
    EXPECT_FALSE(r.report.flat);
    EXPECT_EQ(r.report.grid.size(), 64u * 64u);
  }
}

TEST(Scan, ZeroHamiltonianIsFlat) {
  const auto psi = oracle::random_state(4, 9);
  const auto r = scan_collapse_basis(psi, Propagator(PauliTermSum(4)));
  EXPECT_TRUE(r.report.flat);
  EXPECT_FALSE(r.report.refined);
  // Tie-break on a flat grid lands on the first cell.
  EXPECT_EQ(r.report.grid_best.theta, 0.0);
  EXPECT_EQ(r.report.grid_best.phi, 0.0);
}

TEST(Scan, GridCoordinates) {
  ScanOptions opts;
  EXPECT_EQ(grid_theta(0, opts), 0.0);
  EXPECT_NEAR(grid_theta(63, opts), kPi, 1e-15);
  EXPECT_NEAR(grid_phi(32, opts), kPi, 1e-15);
}

TEST(Scan, GridMinimumNotBelowRefinedValue) {
  const auto prop = transverse(4);
  const auto psi = prop.evolve(initial_state(4, InitialEnv::RandomProduct, 21), 0.12);
  const auto r = scan_collapse_basis(psi, prop);
  ASSERT_TRUE(r.report.refined);
  EXPECT_LE(r.report.value, r.report.grid_min + 1e-12);
  EXPECT_NEAR(BasisObjective(psi, prop)(r.basis), r.report.value, 1e-9);
  // Brute-force check: nothing on a random sample beats the refined minimum.
  CounterRng rng(4, 4);
  const BasisObjective f(psi, prop);
  for (int k = 0; k < 200; ++k) EXPECT_GE(f(random_basis(rng)), r.report.value - 1e-9);
}

TEST(Scan, HalvingGridSpacingKeepsArgmin) {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const auto prop = transverse(4);
    const auto psi = prop.evolve(initial_state(4, InitialEnv::RandomProduct, seed), 0.12);
    ScanOptions coarse;
    coarse.theta_points = 32;
    coarse.phi_points = 32;
    ScanOptions fine;
    const auto a = scan_collapse_basis(psi, prop, coarse);
    const auto b = scan_collapse_basis(psi, prop, fine);
    ASSERT_FALSE(a.report.flat);
    EXPECT_LT(angular_distance(a.basis, b.basis), 2 * fine.refine_tolerance) << seed;
  }
}

TEST(Scan, ParallelGridMatchesSerialReferenceAtFullResolution) {
  const auto prop = transverse(3);
  const auto psi = prop.evolve(initial_state(3, InitialEnv::RandomProduct, 8), 0.2);
  ScanOptions opts;
  const auto fast = scan_grid(BasisObjective(psi, prop), opts);
  const auto slow = reference::scan_grid_serial(psi, prop, opts);
  double worst = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
  EXPECT_LT(worst, 1e-6);
}

// --- collapse operator ---

TEST(CollapseOperator, PlusEnvironmentIsDegenerate) {
  const auto h = transverse_h(4);
  const auto env = StateVector::plus_state(4);
  const auto c = collapse_operator(h, env.amplitudes());
  EXPECT_TRUE(c.degenerate);
  EXPECT_LT(c.matrix.norm(), 1e-12);
}

TEST(CollapseOperator, ZeroEnvironmentGivesScaledZ) {
  for (int n : {1, 3, 5}) {
    const auto h = transverse_h(n);
    const auto env = StateVector::basis_state(n, 0);
    const auto c = collapse_operator(h, env.amplitudes());
    EXPECT_FALSE(c.degenerate);
    Eigen::Matrix2cd want = Eigen::Matrix2cd::Zero();
    want(0, 0) = n;
    want(1, 1) = -n;
    EXPECT_LT((c.matrix - want).norm(), 1e-12);
    EXPECT_LT(angular_distance(c.basis, {0.0, 0.0}), 1e-9);
    EXPECT_NEAR(c.eigenvalues(0), -n, 1e-12);
    EXPECT_NEAR(c.eigenvalues(1), n, 1e-12);
  }
}

TEST(CollapseOperator, CurrentReducedMatchesExplicitOnProductStates) {
  CounterRng rng(6, 0);
  const auto h = transverse_h(3);
  const auto env = StateVector::random(3, rng);
  const auto psi = StateVector::product(random_qubit(rng), env.amplitudes());
  const auto a = collapse_operator(h, env.amplitudes());
  const auto b = collapse_operator(h, psi);
  EXPECT_LT((a.matrix - b.matrix).norm(), 1e-12);
  // Oracle: sum_k <Z_k> Z_0 from dense single-site expectations.
  double zsum = 0.0;
  const Eigen::VectorXcd ev = oracle::vec(env);
  for (int k = 0; k < 3; ++k) {
    std::string labels(3, 'I');
    labels[k] = 'Z';
    PauliTermSum zk(3);
    zk.add(1.0, PauliString::parse(labels));
    zsum += (ev.adjoint() * oracle::dense(zk) * ev)(0, 0).real();
  }
  EXPECT_NEAR(a.matrix(0, 0).real(), zsum, 1e-12);
  EXPECT_NEAR(a.matrix(1, 1).real(), -zsum, 1e-12);
}

TEST(CollapseOperator, CustomInteractionWithXAndYParts) {
  // 0.5 X0 Z1 + 0.25 Y0 X1 on |0>_env: <Z> = 1, <X> = 0 -> C = 0.5 X.
  ModelSpec spec{ModelKind::Custom, 1, 1.0, {{Complex(0.5), "XZ"}, {Complex(0.25), "YX"}}};
  const auto h = build_hamiltonian(spec);
  const auto c = collapse_operator(h, StateVector::basis_state(1, 0).amplitudes());
  EXPECT_NEAR(c.matrix(0, 1).real(), 0.5, 1e-12);
  EXPECT_LT(angular_distance(c.basis, {kPi / 2, 0.0}), 1e-9);
}

// --- threshold and sampling ---

TEST(Threshold, Examples) {
  ThresholdPolicy p{0.5, 0.005};
  EXPECT_FALSE(check_threshold(0.0, p));
  EXPECT_FALSE(check_threshold(-0.7, p));
  EXPECT_TRUE(check_threshold(0.5, p));
  EXPECT_TRUE(check_threshold(0.51, p));
  EXPECT_FALSE(check_threshold(1e300, ThresholdPolicy{}));
  EXPECT_THROW((ThresholdPolicy{0.0, 0.005}.validate()), std::invalid_argument);
  EXPECT_THROW((ThresholdPolicy{-1.0, 0.005}.validate()), std::invalid_argument);
  EXPECT_THROW((ThresholdPolicy{1.0, 0.0}.validate()), std::invalid_argument);
}

TEST(Sampling, CertainOutcome) {
  CounterRng rng(1, 2);
  const auto psi = StateVector::product(CandidateBasis{0.7, 0.2}.state(0),
                                        StateVector::plus_state(2).amplitudes());
  const auto d = decompose(psi, {0.7, 0.2});
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(sample_outcome(d, rng).index, 0);
}

TEST(Sampling, EvenWeightsFrequency) {
  const auto bell = StateVector::from_amplitudes({1.0, 0.0, 0.0, 1.0});
  const auto d = decompose(bell, {0.0, 0.0});
  CounterRng rng(77, 0);
  int zeros = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) zeros += sample_outcome(d, rng).index == 0;
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.5, 0.01);
}

TEST(Sampling, PostCollapseStateIsStationaryProduct) {
  CounterRng rng(5, 5);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 4;
    const auto psi = StateVector::random(n + 1, rng);
    const auto d = decompose(psi, random_basis(rng));
    const auto out = sample_outcome(d, rng);
    EXPECT_NEAR(out.state.norm(), 1.0, 1e-12);
    EXPECT_NEAR(system_entropy(out.state), 0.0, 1e-9);
    EXPECT_NEAR(entangling_speed(out.state, transverse(n)).value, 0.0, 1e-7);
    EXPECT_LT(out.state.distance(d.branch(out.index)), 1e-12);
    EXPECT_GE(out.draw, 0.0);
    EXPECT_LT(out.draw, 1.0);
  }
}

// --- basis choice ---

TEST(ChooseBasis, OperatorFallsBackToScanWhenDegenerate) {
  const auto prop = transverse(3);
  const auto psi = prop.evolve(StateVector::plus_state(4), 0.1);
  const auto c = choose_basis(psi, prop, BasisMethod::CollapseOperator);
  EXPECT_TRUE(c.operator_degenerate);
  EXPECT_EQ(c.source, "scan_fallback");
  const auto a = choose_basis(psi, prop, BasisMethod::Auto);
  EXPECT_EQ(a.source, "scan");
  EXPECT_EQ(parse_basis_method("collapse_operator"), BasisMethod::CollapseOperator);
  EXPECT_THROW(parse_basis_method("guess"), std::invalid_argument);
}

TEST(ChooseBasis, OperatorUsedWhenNondegenerate) {
  const auto prop = transverse(3);
  const auto psi = prop.evolve(initial_state(3, InitialEnv::Zero), 0.1);
  const auto c = choose_basis(psi, prop, BasisMethod::CollapseOperator);
  EXPECT_FALSE(c.operator_degenerate);
  EXPECT_EQ(c.source, "collapse_operator");
}

// --- trajectories ---

TEST(Trajectory, InfiniteThresholdIsUnitary) {
  const auto prop = transverse(3);
  const auto init = StateVector::plus_state(4);
  TrajectoryOptions opts;
  opts.t_max = 0.5;
  const auto r = run_trajectory(init, prop, opts);
  EXPECT_TRUE(r.events.empty());
  EXPECT_LT(r.final_state.distance(prop.evolve(init, 0.5)), 1e-9);
  TraceOptions topts;
  topts.t_max = 0.5;
  topts.with_acceleration = false;
  const auto unitary = compute_trace(init, prop, topts, "");
  ASSERT_EQ(r.trace.samples.size(), unitary.samples.size());
  for (std::size_t k = 0; k < unitary.samples.size(); ++k) {
    EXPECT_NEAR(r.trace.samples[k].epsilon, unitary.samples[k].epsilon, 1e-9);
    EXPECT_NEAR(r.trace.samples[k].epsilon_dot, unitary.samples[k].epsilon_dot, 1e-9);
  }
}

TEST(Trajectory, SameSeedSameEvents) {
  const auto prop = transverse(3);
  TrajectoryOptions opts;
  opts.policy.threshold = 0.5;
  opts.t_max = 1.0;
  opts.seed = 99;
  const auto a = run_trajectory(StateVector::plus_state(4), prop, opts);
  const auto b = run_trajectory(StateVector::plus_state(4), prop, opts);
  ASSERT_FALSE(a.events.empty());
  std::ostringstream ja, jb;
  write_events_jsonl(ja, a.events);
  write_events_jsonl(jb, b.events);
  EXPECT_EQ(ja.str(), jb.str());
  EXPECT_EQ(a.final_state.distance(b.final_state), 0.0);
}

TEST(Trajectory, EventInvariantsAndSchema) {
  const auto prop = transverse(3);
  TrajectoryOptions opts;
  opts.policy.threshold = 0.5;
  opts.t_max = 1.0;
  opts.seed = 7;
  const auto r = run_trajectory(StateVector::plus_state(4), prop, opts);
  ASSERT_FALSE(r.events.empty());
  for (const auto& e : r.events) {
    EXPECT_NEAR(e.born_weights[0] + e.born_weights[1], 1.0, 1e-10);
    EXPECT_TRUE(e.outcome_index == 0 || e.outcome_index == 1);
  }
  std::ostringstream out;
  write_events_jsonl(out, r.events);
  std::istringstream in(out.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"t_c", "theta", "phi", "weights", "outcome", "e_before", "e_after_ensemble",
                            "e_after_actual", "rng_draw", "seed"})
      EXPECT_TRUE(j.contains(key)) << key;
    ++count;
  }
  EXPECT_EQ(count, r.events.size());
}

TEST(Trajectory, IsingDominantOutcomeAfterFirstEvent) {
  const auto prop = ising(8);
  TrajectoryOptions opts;
  opts.policy.threshold = 0.3;
  opts.t_max = 1.0;
  opts.seed = 3;
  const auto r = run_trajectory(StateVector::plus_state(9), prop, opts);
  ASSERT_FALSE(r.events.empty());
  for (std::size_t k = 1; k < r.events.size(); ++k)
    EXPECT_GT(std::max(r.events[k].born_weights[0], r.events[k].born_weights[1]), 0.9) << k;
  // The Z-basis collapse leaves a product state that this model never entangles.
  EXPECT_LT(angular_distance(r.events[0].basis, {0.0, 0.0}), 1e-2);
  EXPECT_NEAR(system_entropy(r.final_state), 0.0, 1e-9);
}

TEST(Trajectory, TransverseDominantOutcomeAfterFirstEvent) {
  const auto prop = transverse(4);
  TrajectoryOptions opts;
  opts.policy.threshold = 0.5;
  opts.t_max = 1.5;
  opts.seed = 11;
  const auto r = run_trajectory(StateVector::plus_state(5), prop, opts);
  ASSERT_GE(r.events.size(), 3u);
  for (std::size_t k = 1; k < r.events.size(); ++k)
    EXPECT_GT(std::max(r.events[k].born_weights[0], r.events[k].born_weights[1]), 0.9) << k;
}

TEST(Trajectory, ZeroHamiltonianNeverCrosses) {
  TrajectoryOptions opts;
  opts.policy.threshold = 1e-6;
  opts.t_max = 0.2;
  const auto r = run_trajectory(oracle::random_state(3, 2), Propagator(PauliTermSum(3)), opts);
  EXPECT_TRUE(r.events.empty());
}

// --- measurement operators ---

Eigen::MatrixXcd random_unitary(int d, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
}

TEST(Measurement, IdentityUnitary) {
  Eigen::VectorXcd ready = Eigen::VectorXcd::Zero(3);
  ready(1) = 1.0;
  const auto m = derive_measurement_operators(Eigen::MatrixXcd::Identity(6, 6), ready,
                                              Eigen::MatrixXcd::Identity(3, 3));
  ASSERT_EQ(m.ops.size(), 3u);
  EXPECT_LT((m.ops[1] - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT(m.ops[0].norm(), 1e-12);
  EXPECT_LT(m.ops[2].norm(), 1e-12);
}

TEST(Measurement, PhotonDetector) {
  const Complex c = std::polar(0.6, 0.4);
  Eigen::VectorXcd ready(2);
  ready << 1.0, 0.0;
  const auto m = derive_measurement_operators(detector_unitary(c), ready, Eigen::MatrixXcd::Identity(2, 2));
  Eigen::VectorXcd one(2);
  one << 0.0, 1.0;
  const Eigen::VectorXcd clicked = m.ops[1] * one;
  EXPECT_LT(std::abs(clicked(0) - c), 1e-12);
  EXPECT_LT(std::abs(clicked(1)), 1e-12);
  EXPECT_NEAR(m.probabilities(one)[1], std::norm(c), 1e-12);
  EXPECT_LT(m.completeness_residual, 1e-12);
}

TEST(Measurement, CnotIsProjective) {
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  Eigen::VectorXcd ready(2);
  ready << 1.0, 0.0;
  const auto m = derive_measurement_operators(cnot, ready, Eigen::MatrixXcd::Identity(2, 2));
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2), p1 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  EXPECT_LT((m.ops[0] - p0).norm(), 1e-12);
  EXPECT_LT((m.ops[1] - p1).norm(), 1e-12);
}

TEST(Measurement, CompletenessForRandomUnitaries) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const int ds = 1 + static_cast<int>(s % 4), da = 2 + static_cast<int>(s % 3);
    const auto u = random_unitary(ds * da, s);
    const Eigen::MatrixXcd basis = random_unitary(da, s + 100);
    const Eigen::VectorXcd ready = basis.col(0);
    const auto m = derive_measurement_operators(u, ready, basis);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(ds, ds);
    for (const auto& op : m.ops) sum += op.adjoint() * op;
    EXPECT_LT((sum - Eigen::MatrixXcd::Identity(ds, ds)).norm(), 1e-9);
    Eigen::VectorXcd s0 = random_unitary(ds, s + 200).col(0);
    double total = 0.0;
    for (double p : m.probabilities(s0)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(Measurement, Errors) {
  Eigen::VectorXcd ready(2);
  ready << 1.0, 0.0;
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4) * 1.01;
  EXPECT_THROW(derive_measurement_operators(bad, ready, Eigen::MatrixXcd::Identity(2, 2)),
               std::invalid_argument);
  Eigen::MatrixXcd skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(derive_measurement_operators(Eigen::MatrixXcd::Identity(4, 4), ready, skew),
               std::invalid_argument);
  Eigen::VectorXcd unnormalized(2);
  unnormalized << 2.0, 0.0;
  EXPECT_THROW(derive_measurement_operators(Eigen::MatrixXcd::Identity(4, 4), unnormalized,
                                            Eigen::MatrixXcd::Identity(2, 2)),
               std::invalid_argument);
}

}  // namespace
