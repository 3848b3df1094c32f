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

#include "estlab/experiment.hpp"

#include <bit>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "estlab/io.hpp"
#include "estlab/parallel.hpp"

namespace estlab {

StateVector analytic_state(int env_spins, double g, double t) {
  if (env_spins < 1 || env_spins + 1 > kMaxSites) throw std::invalid_argument("analytic_state: bad N");
  if (!(g > 0.0)) throw std::invalid_argument("analytic_state: g must be positive");
  const std::uint64_t env = std::uint64_t{1} << env_spins;
  const double amp = std::pow(2.0, -0.5 * (env_spins + 1));
  std::vector<Complex> a(2 * env);
  for (std::uint64_t e = 0; e < env; ++e) {
    const int ones = std::popcount(e);
    const double diff = env_spins - 2.0 * ones;  // n0 - n1
    a[e] = std::polar(amp, -g * t * diff);
    a[env + e] = std::polar(amp, g * t * diff);
  }
  return StateVector::from_amplitudes(std::move(a));
}

std::array<double, 2> analytic_reduced_eigenvalues(int env_spins, double g, double t) {
  const double c = std::pow(std::abs(std::cos(2.0 * g * t)), env_spins);
  return {0.5 * (1.0 - c), 0.5 * (1.0 + c)};
}

InitialEnv parse_initial_env(const std::string& name) {
  if (name == "plus") return InitialEnv::Plus;
  if (name == "zero") return InitialEnv::Zero;
  if (name == "random_product") return InitialEnv::RandomProduct;
  throw std::invalid_argument("unknown initial environment '" + name + "'");
}

std::string to_string(InitialEnv env) {
  switch (env) {
    case InitialEnv::Plus: return "plus";
    case InitialEnv::Zero: return "zero";
    case InitialEnv::RandomProduct: return "random_product";
  }
  return "?";
}

StateVector initial_state(int env_spins, InitialEnv env, std::uint64_t seed, std::uint64_t stream) {
  if (env_spins < 1) throw std::invalid_argument("initial_state: need N >= 1");
  std::vector<Qubit> sites;
  sites.push_back(plus_qubit());
  CounterRng rng(seed, stream);
  for (int k = 0; k < env_spins; ++k) {
    switch (env) {
      case InitialEnv::Plus: sites.push_back(plus_qubit()); break;
      case InitialEnv::Zero: sites.push_back({Complex(1.0), Complex(0.0)}); break;
      case InitialEnv::RandomProduct: sites.push_back(random_qubit(rng)); break;
    }
  }
  return StateVector::product(sites);
}

namespace {

PauliTermSum ising(int env_spins, double g) {
  return build_hamiltonian({ModelKind::DegenerateIsing, env_spins, g, {}});
}

double minus_probability(const StateVector& psi) {
  const Eigen::Matrix2cd rho = partial_trace_outer(psi.amplitudes(), psi.amplitudes());
  // <-|rho|-> with |-> = (|0> - |1>) / sqrt 2
  return std::abs(0.5 * (rho(0, 0) + rho(1, 1) - rho(0, 1) - rho(1, 0)));
}

}  // namespace

RevivalReport revival_protocol(int env_spins, double g, const RevivalOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("revival_protocol: trials must be >= 1");
  options.policy.validate();
  const Propagator prop(ising(env_spins, g));
  const StateVector initial = initial_state(env_spins, InitialEnv::Plus);
  RevivalReport report;
  report.env_spins = env_spins;
  report.g = g;
  report.t_rev = 2.0 * kPi / g;
  report.trials = options.trials;

  struct TrialOutcome {
    double fidelity = 0.0, p_minus = 0.0;
    std::size_t events = 0;
    bool click_minus = false;
  };
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(options.trials));
  parallel_for(options.trials, [&](std::int64_t t64) {
    const int trial = static_cast<int>(t64);
    TrajectoryOptions to;
    to.policy = options.policy;
    to.t_max = report.t_rev;
    to.seed = options.seed;
    to.stream = static_cast<std::uint64_t>(trial);
    to.method = options.method;
    to.scan = options.scan;
    const TrajectoryResult r = run_trajectory(initial, prop, to);
    TrialOutcome& o = outcomes[static_cast<std::size_t>(trial)];
    o.fidelity = initial.fidelity(r.final_state);
    o.p_minus = minus_probability(r.final_state);
    o.events = r.events.size();
    if (options.sample_clicks) {
      // A separate substream so the click never shifts the collapse draws.
      CounterRng click = CounterRng(options.seed, static_cast<std::uint64_t>(trial)).split(1);
      o.click_minus = click.next_uniform() < o.p_minus;
    }
  });
  for (const auto& o : outcomes) {
    report.fidelity_at_revival += o.fidelity;
    report.p_minus += o.p_minus;
    report.collapse_events_before_revival += o.events;
    report.trials_with_collapse += o.events > 0 ? 1 : 0;
    report.minus_clicks += o.click_minus ? 1 : 0;
  }
  report.fidelity_at_revival /= options.trials;
  report.p_minus /= options.trials;
  report.p_plus = 1.0 - report.p_minus;
  return report;
}

std::string revival_json(const RevivalReport& r) {
  nlohmann::ordered_json j;
  j["N"] = r.env_spins;
  j["g"] = r.g;
  j["t_rev"] = r.t_rev;
  j["fidelity_at_revival"] = r.fidelity_at_revival;
  j["p_plus"] = r.p_plus;
  j["p_minus"] = r.p_minus;
  j["collapse_events_before_revival"] = r.collapse_events_before_revival;
  j["trials_with_collapse"] = r.trials_with_collapse;
  j["trials"] = r.trials;
  j["minus_clicks"] = r.minus_clicks;
  return j.dump(2) + "\n";
}

std::vector<CriticalSweepRow> critical_sweep(const std::vector<int>& env_spins, double g,
                                             const RevivalOptions& options) {
  options.policy.validate();
  std::vector<CriticalSweepRow> rows(env_spins.size());
  const double t_rev = 2.0 * kPi / g;
  for (std::size_t i = 0; i < env_spins.size(); ++i) {
    const int n = env_spins[i];
    const Propagator prop(ising(n, g));
    const StateVector initial = initial_state(n, InitialEnv::Plus);
    TraceOptions topts;
    topts.dt = options.policy.check_interval;
    topts.t_max = t_rev;
    topts.with_acceleration = false;
    CriticalSweepRow& row = rows[i];
    row.env_spins = n;
    row.max_speed = max_speed(compute_trace(initial, prop, topts, ""));
    TrajectoryOptions to;
    to.policy = options.policy;
    to.t_max = t_rev;
    to.seed = options.seed;
    to.stream = static_cast<std::uint64_t>(n);
    to.method = options.method;
    to.scan = options.scan;
    const TrajectoryResult r = run_trajectory(initial, prop, to);
    row.events = r.events.size();
    if (!r.events.empty()) row.first_event_time = r.events.front().t_c;
  }
  return rows;
}

int critical_env_size(const std::vector<CriticalSweepRow>& rows) {
  for (const auto& r : rows) {
    if (r.events > 0) return r.env_spins;
  }
  return -1;
}

void write_critical_csv(std::ostream& out, const std::vector<CriticalSweepRow>& rows,
                        const std::string& comment) {
  CsvWriter csv(out, comment);
  csv.header({"N", "max_speed", "events", "first_event_time"});
  for (const auto& r : rows) {
    csv.row_text({std::to_string(r.env_spins), format_number(r.max_speed), std::to_string(r.events),
                  format_number(r.first_event_time)});
  }
}

BasisAgreement compare_basis_methods(const StateVector& initial, const Propagator& prop,
                                     const TraceOptions& trace, const ScanOptions& scan) {
  TraceOptions opts = trace;
  opts.with_acceleration = false;
  const EntanglementTrace tr = compute_trace(initial, prop, opts, "");
  BasisAgreement out;
  out.env_spins = initial.num_sites() - 1;
  out.t_c = tr.samples[first_speed_peak(tr)].t;
  const StateVector psi = prop.evolve(initial, out.t_c);
  const ScanResult s = scan_collapse_basis(psi, prop, scan);
  out.scan_basis = s.basis;
  out.scan_value = s.report.value;
  const CollapseOperator op = collapse_operator(prop.hamiltonian(), psi);
  out.operator_degenerate = op.degenerate;
  if (!op.degenerate) {
    out.operator_basis = op.basis;
    out.gap = angular_distance(s.basis, op.basis);
  }
  return out;
}

}  // namespace estlab
