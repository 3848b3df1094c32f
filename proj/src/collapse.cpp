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

#include "estlab/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <nlohmann/json.hpp>

#include "estlab/energy.hpp"
#include "estlab/kernels.hpp"

namespace estlab {
namespace {

constexpr double kZeroWeight = 1e-28;

void check_step(double step) {
  if (!(step >= 1e-8) || !std::isfinite(step)) {
    throw std::invalid_argument("acceleration step " + std::to_string(step) + " underflows");
  }
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

CollapseOperator finish_operator(Eigen::Matrix2cd c, double scale) {
  CollapseOperator op;
  op.matrix = c;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(c);
  op.eigenvalues = solver.eigenvalues();
  op.eigenvectors = solver.eigenvectors();
  op.degenerate = c.norm() < 1e-12 * std::max(1.0, scale);
  if (!op.degenerate) {
    const Qubit q{op.eigenvectors(0, 0), op.eigenvectors(1, 0)};
    op.basis = CandidateBasis::from_qubit(q).canonical();
  }
  return op;
}

double interaction_scale(const PauliTermSum& h) {
  double s = 0.0;
  for (const auto& t : h.terms()) {
    if (t.kind == TermKind::Interaction) s += std::abs(t.coefficient);
  }
  return s;
}

struct Chart {
  Eigen::Vector3d origin, e1, e2;
  const BasisObjective* objective;

  CandidateBasis at(double u, double v) const {
    return CandidateBasis::from_axis(origin + u * e1 + v * e2);
  }
};

double chart_value(const gsl_vector* x, void* params) {
  const auto* chart = static_cast<const Chart*>(params);
  return (*chart->objective)(chart->at(gsl_vector_get(x, 0), gsl_vector_get(x, 1)));
}

void quiet_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

double mean_entangling_acceleration(const RelativeDecomposition& decomp, const Propagator& prop,
                                    const AccelerationOptions& options) {
  if (decomp.num_sites != prop.num_sites()) {
    throw DimensionError("mean_entangling_acceleration: size mismatch");
  }
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double w = decomp.born_weight(i);
    if (w == 0.0) continue;
    total += w * product_state_acceleration(decomp.branch(i), prop, options);
  }
  return total;
}

BasisObjective::BasisObjective(const StateVector& psi, const Propagator& prop,
                               const AccelerationOptions& options)
    : options_(options) {
  if (psi.num_sites() != prop.num_sites()) throw DimensionError("BasisObjective: size mismatch");
  if (psi.num_sites() < 2) throw DimensionError("BasisObjective: need an environment");
  check_step(options.step);
  const double d = options.step;
  offsets_ = options.product_stencil == ProductStencil::Symmetric ? std::vector<double>{d, -d}
                                                                  : std::vector<double>{d, 2.0 * d};
  const std::size_t env = psi.dimension() / 2;
  const auto amps = psi.amplitudes();

  // Seeds |a>|psi_b>, stored normalized with their norms kept aside.
  std::array<std::vector<Complex>, 4> seeds;
  std::array<double, 4> norms{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<Complex> v(psi.dimension(), Complex(0.0));
      double n2 = 0.0;
      for (std::size_t k = 0; k < env; ++k) {
        v[a * env + k] = amps[b * env + k];
        n2 += std::norm(amps[b * env + k]);
      }
      seeds[2 * a + b] = std::move(v);
      norms[2 * a + b] = std::sqrt(n2);
    }
  }

  const bool trivial = prop.hamiltonian().empty();
  for (double tau : offsets_) {
    std::array<std::vector<Complex>, 4> w;
    for (int p = 0; p < 4; ++p) {
      if (norms[p] == 0.0) {
        w[p].assign(psi.dimension(), Complex(0.0));
        continue;
      }
      if (trivial) {
        w[p] = seeds[p];
        continue;
      }
      const StateVector evolved = prop.advance(StateVector::from_amplitudes(seeds[p]), tau);
      w[p].assign(evolved.amplitudes().begin(), evolved.amplitudes().end());
      for (auto& z : w[p]) z *= norms[p];
    }
    std::array<Eigen::Matrix2cd, 16> t;
    for (int p = 0; p < 4; ++p) {
      for (int q = p; q < 4; ++q) {
        t[p * 4 + q] = partial_trace_outer(w[p], w[q]);
        t[q * 4 + p] = t[p * 4 + q].adjoint();
      }
    }
    traces_.push_back(t);
  }
}

namespace {

using ComplexL = std::complex<long double>;

// Entropy of a Hermitian 2x2 matrix after normalizing its trace. Extended
// precision keeps the small eigenvalue a d - |b|^2 clear of cancellation noise,
// which the 1/step^2 of the stencil would otherwise amplify.
long double normalized_qubit_entropy(long double a, long double d, ComplexL b) {
  const long double tr = a + d;
  a /= tr;
  d /= tr;
  const long double off2 = std::norm(b) / (tr * tr);
  const long double hi = 0.5L * (a + d) + std::hypot(0.5L * (a - d), std::sqrt(off2));
  const long double lo = hi > 0.0L ? (a * d - off2) / hi : 0.0L;
  long double s = 0.0L;
  for (long double l : {lo, hi}) {
    if (l >= kEigenvalueCutoff) s -= l * std::log(l);
  }
  return std::max(s, 0.0L);
}

}  // namespace

double BasisObjective::branch_value(const Qubit& a, double& weight) const {
  std::array<ComplexL, 4> alpha;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) alpha[2 * x + y] = ComplexL(a[x]) * std::conj(ComplexL(a[y]));
  }
  std::array<long double, 2> eps{};
  for (std::size_t o = 0; o < traces_.size(); ++o) {
    long double m00 = 0.0L, m11 = 0.0L;
    ComplexL m01 = 0.0L;
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) {
        const ComplexL c = alpha[p] * std::conj(alpha[q]);
        const auto& t = traces_[o][p * 4 + q];
        m00 += (c * ComplexL(t(0, 0))).real();
        m11 += (c * ComplexL(t(1, 1))).real();
        m01 += c * ComplexL(t(0, 1));
      }
    }
    const long double tr = m00 + m11;
    if (o == 0) weight = static_cast<double>(tr);
    if (tr < kZeroWeight) {
      weight = 0.0;
      return 0.0;
    }
    eps[o] = normalized_qubit_entropy(m00, m11, m01);
  }
  const long double d2 = static_cast<long double>(options_.step) * options_.step;
  if (options_.product_stencil == ProductStencil::Symmetric) return static_cast<double>((eps[0] + eps[1]) / d2);
  return static_cast<double>((eps[1] - 2.0L * eps[0]) / d2);
}

double BasisObjective::operator()(const CandidateBasis& basis) const {
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    double w = 0.0;
    const double v = branch_value(basis.state(i), w);
    total += w * v;
  }
  return total;
}

double grid_theta(int i, const ScanOptions& options) {
  return options.theta_points > 1 ? kPi * i / (options.theta_points - 1) : 0.0;
}

double grid_phi(int j, const ScanOptions& options) {
  return 2.0 * kPi * j / options.phi_points;
}

namespace {

void check_grid(const ScanOptions& options) {
  if (options.theta_points < 2 || options.phi_points < 1) {
    throw std::invalid_argument("scan grid needs theta_points >= 2 and phi_points >= 1");
  }
}

}  // namespace

std::vector<double> scan_grid(const BasisObjective& objective, const ScanOptions& options) {
  check_grid(options);
  const int tp = options.theta_points, pp = options.phi_points;
  std::vector<double> grid(static_cast<std::size_t>(tp) * pp);
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const int i = static_cast<int>(k / pp), j = static_cast<int>(k % pp);
    grid[k] = objective(grid_theta(i, options), grid_phi(j, options));
  }
  return grid;
}

std::vector<double> reference::scan_grid_serial(const StateVector& psi, const Propagator& prop,
                                                const ScanOptions& options) {
  check_grid(options);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(options.theta_points) * options.phi_points);
  for (int i = 0; i < options.theta_points; ++i) {
    for (int j = 0; j < options.phi_points; ++j) {
      const CandidateBasis b{grid_theta(i, options), grid_phi(j, options)};
      grid.push_back(mean_entangling_acceleration(decompose(psi, b), prop, options.acceleration));
    }
  }
  return grid;
}

ScanResult scan_collapse_basis(const StateVector& psi, const Propagator& prop,
                               const ScanOptions& options) {
  const BasisObjective objective(psi, prop, options.acceleration);
  ScanReport report;
  report.theta_points = options.theta_points;
  report.phi_points = options.phi_points;
  report.grid = scan_grid(objective, options);

  const auto [lo, hi] = std::minmax_element(report.grid.begin(), report.grid.end());
  report.grid_min = *lo;
  report.grid_max = *hi;
  report.flat = (report.grid_max - report.grid_min) < options.flat_tolerance;
  // Row-major order means the first index within the tie band has the
  // smallest theta, then the smallest phi.
  std::size_t best = 0;
  while (report.grid[best] > report.grid_min + options.tie_tolerance) ++best;
  report.grid_best = {grid_theta(static_cast<int>(best) / options.phi_points, options),
                      grid_phi(static_cast<int>(best) % options.phi_points, options)};
  report.value = report.grid[best];

  CandidateBasis result = report.grid_best;
  if (options.refine && !report.flat) {
    quiet_gsl();
    Chart chart;
    chart.objective = &objective;
    chart.origin = report.grid_best.axis();
    const Eigen::Vector3d ref =
        std::abs(chart.origin.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    chart.e1 = chart.origin.cross(ref).normalized();
    chart.e2 = chart.origin.cross(chart.e1);

    gsl_multimin_function fn{&chart_value, 2, &chart};
    gsl_vector* x = gsl_vector_calloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_vector_set_all(step, kPi / std::max(options.theta_points - 1, 1));
    gsl_multimin_fminimizer* nm =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(nm, &fn, x, step);
    int status = GSL_CONTINUE;
    int iter = 0;
    while (status == GSL_CONTINUE && iter < options.max_iterations) {
      ++iter;
      if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) break;
      status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), options.refine_tolerance);
    }
    report.iterations = iter;
    if (nm->fval <= report.value) {
      result = chart.at(gsl_vector_get(nm->x, 0), gsl_vector_get(nm->x, 1));
      report.value = nm->fval;
      report.refined = true;
    }
    gsl_multimin_fminimizer_free(nm);
    gsl_vector_free(step);
    gsl_vector_free(x);
  }
  return {result.canonical(), std::move(report)};
}

CollapseOperator collapse_operator(const PauliTermSum& h, std::span<const Complex> env_state) {
  const int n = h.num_sites();
  if (n < 2) throw DimensionError("collapse_operator: need an environment");
  if (env_state.size() != (std::size_t{1} << (n - 1))) {
    throw DimensionError("collapse_operator: environment state has " +
                         std::to_string(env_state.size()) + " entries, expected 2^" +
                         std::to_string(n - 1));
  }
  double n2 = 0.0;
  for (auto z : env_state) n2 += std::norm(z);
  if (!(n2 > 0.0)) throw NumericalError("collapse_operator: zero environment state");

  Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
  for (const auto& t : h.terms()) {
    if (t.kind != TermKind::Interaction) continue;
    PauliString env(n - 1);
    for (int s = 1; s < n; ++s) env.set(s - 1, t.string.at(s));
    const double e = pauli_expectation(env, env_state).real() / n2;
    c += (t.coefficient * e) * pauli_matrix(t.string.at(0));
  }
  return finish_operator(c, interaction_scale(h));
}

CollapseOperator collapse_operator(const PauliTermSum& h, const StateVector& psi) {
  if (psi.num_sites() != h.num_sites()) throw DimensionError("collapse_operator: size mismatch");
  if (h.num_sites() < 2) throw DimensionError("collapse_operator: need an environment");
  Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
  for (const auto& t : h.terms()) {
    if (t.kind != TermKind::Interaction) continue;
    PauliString env = t.string;
    env.set(0, Pauli::I);
    const double e = pauli_expectation(env, psi.amplitudes()).real();
    c += (t.coefficient * e) * pauli_matrix(t.string.at(0));
  }
  return finish_operator(c, interaction_scale(h));
}

void ThresholdPolicy::validate() const {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  if (!(check_interval > 0.0) || !std::isfinite(check_interval)) {
    throw std::invalid_argument("check_interval must be finite and > 0");
  }
}

bool check_threshold(double epsilon_dot, const ThresholdPolicy& policy) {
  return epsilon_dot > 0.0 && epsilon_dot >= policy.threshold;
}

SampledOutcome sample_outcome(const RelativeDecomposition& decomp, CounterRng& rng) {
  const double w0 = decomp.born_weight(0);
  const double total = w0 + decomp.born_weight(1);
  const double u = rng.next_uniform();
  const int index = (u * total < w0) ? 0 : 1;
  return {index, decomp.branch(index), u};
}

BasisMethod parse_basis_method(const std::string& name) {
  if (name == "scan") return BasisMethod::Scan;
  if (name == "collapse_operator") return BasisMethod::CollapseOperator;
  if (name == "auto") return BasisMethod::Auto;
  throw std::invalid_argument("unknown basis method '" + name + "'");
}

std::string to_string(BasisMethod method) {
  switch (method) {
    case BasisMethod::Scan: return "scan";
    case BasisMethod::CollapseOperator: return "collapse_operator";
    case BasisMethod::Auto: return "auto";
  }
  return "?";
}

BasisChoice choose_basis(const StateVector& psi, const Propagator& prop, BasisMethod method,
                         const ScanOptions& scan, int auto_operator_min_env) {
  BasisChoice choice;
  const bool use_operator =
      method == BasisMethod::CollapseOperator ||
      (method == BasisMethod::Auto && psi.num_sites() - 1 >= auto_operator_min_env);
  if (use_operator) {
    const CollapseOperator op = collapse_operator(prop.hamiltonian(), psi);
    if (!op.degenerate) {
      choice.basis = op.basis;
      choice.source = "collapse_operator";
      return choice;
    }
    choice.operator_degenerate = true;
  }
  const ScanResult r = scan_collapse_basis(psi, prop, scan);
  choice.basis = r.basis;
  choice.flat = r.report.flat;
  choice.source = choice.operator_degenerate ? "scan_fallback" : "scan";
  return choice;
}

TrajectoryResult run_trajectory(const StateVector& initial, const Propagator& prop,
                                const TrajectoryOptions& options, std::string model_tag) {
  options.policy.validate();
  if (!(options.t_max > 0.0) || !std::isfinite(options.t_max)) {
    throw std::invalid_argument("t_max must be finite and > 0");
  }
  if (initial.num_sites() != prop.num_sites()) throw DimensionError("run_trajectory: size mismatch");
  const PauliTermSum& h = prop.hamiltonian();
  const double dt = options.policy.check_interval;
  const auto checks = static_cast<std::size_t>(std::floor(options.t_max / dt + 1e-9));

  TrajectoryResult result{{std::move(model_tag), initial.num_sites() - 1, {}}, {}, {}, initial};
  CounterRng rng(options.seed, options.stream);
  StateVector psi = initial;
  for (std::size_t k = 0; k <= checks; ++k) {
    TraceSample s;
    s.t = static_cast<double>(k) * dt;
    s.epsilon = system_entropy(psi);
    s.epsilon_dot = entangling_speed(psi, prop).value;
    if (options.with_acceleration) s.epsilon_ddot = entangling_acceleration(psi, prop);
    result.trace.samples.push_back(s);

    if (check_threshold(s.epsilon_dot, options.policy)) {
      const BasisChoice choice =
          choose_basis(psi, prop, options.method, options.scan, options.auto_operator_min_env);
      if (choice.flat) {
        result.skipped.push_back(s.t);
      } else {
        const RelativeDecomposition decomp = decompose(psi, choice.basis);
        CollapseEvent ev;
        ev.t_c = s.t;
        ev.basis = choice.basis;
        ev.basis_source = choice.source;
        ev.born_weights = {decomp.born_weight(0), decomp.born_weight(1)};
        ev.e_before = energy_before(psi, h);
        ev.e_after_ensemble = energy_after_ensemble(decomp, h);
        SampledOutcome out = sample_outcome(decomp, rng);
        ev.outcome_index = out.index;
        ev.rng_draw = out.draw;
        ev.seed = options.seed;
        ev.e_after_actual = energy_before(out.state, h);
        result.events.push_back(ev);
        psi = std::move(out.state);
      }
    }
    if (k < checks) psi = prop.evolve(psi, dt);
  }
  const double rest = options.t_max - static_cast<double>(checks) * dt;
  if (rest > 1e-15) psi = prop.evolve(psi, rest);
  result.final_state = std::move(psi);
  return result;
}

void write_events_jsonl(std::ostream& out, const std::vector<CollapseEvent>& events) {
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["t_c"] = e.t_c;
    j["theta"] = e.basis.theta;
    j["phi"] = e.basis.phi;
    j["weights"] = {e.born_weights[0], e.born_weights[1]};
    j["outcome"] = e.outcome_index;
    j["e_before"] = e.e_before;
    j["e_after_ensemble"] = e.e_after_ensemble;
    j["e_after_actual"] = e.e_after_actual;
    j["rng_draw"] = e.rng_draw;
    j["seed"] = e.seed;
    j["basis_source"] = e.basis_source;
    out << j.dump() << '\n';
  }
}

}  // namespace estlab
