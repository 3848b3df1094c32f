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

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "estlab/energy.hpp"
#include "estlab/io.hpp"
#include "estlab/parallel.hpp"

namespace estlab::cli {
namespace {

namespace fs = std::filesystem;

class OutputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void write_file(const RunConfig& config, const std::string& name, const std::string& payload) {
  const fs::path path = fs::path(config.out) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw OutputError("cannot write '" + path.string() + "'");
  f << payload;
  if (!f.flush()) throw OutputError("write failed for '" + path.string() + "'");
}

void prepare_out(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw OutputError("cannot create output directory '" + config.out + "': " + ec.message());
}

std::string comment(const RunConfig& config, const std::string& command) {
  return "config_hash=" + config.hash() + " command=" + command;
}

std::string suffix(int n, const RunConfig& config) {
  return "_N" + std::to_string(n) + "." + config.format;
}

std::string trace_json(const EntanglementTrace& trace, const RunConfig& config, bool bits) {
  const double scale = bits ? 1.0 / std::log(2.0) : 1.0;
  nlohmann::ordered_json j;
  j["config_hash"] = config.hash();
  j["model"] = trace.model_tag;
  j["N"] = trace.env_spins;
  j["units"] = bits ? "bits" : "nats";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& s : trace.samples) {
    rows.push_back({{"t", s.t},
                    {"epsilon", s.epsilon * scale},
                    {"epsilon_dot", s.epsilon_dot * scale},
                    {"epsilon_ddot", s.epsilon_ddot * scale}});
  }
  j["samples"] = std::move(rows);
  return j.dump(1) + "\n";
}

std::string render_trace(const EntanglementTrace& trace, const RunConfig& config,
                         const std::string& command) {
  const bool bits = config.entropy_units == "bits";
  if (config.format == "json") return trace_json(trace, config, bits);
  std::ostringstream os;
  write_trace_csv(os, trace, comment(config, command), bits);
  return os.str();
}

StateVector start_state(const RunConfig& config, int n) {
  return initial_state(n, config.initial_env, config.seed, static_cast<std::uint64_t>(n));
}

}  // namespace

FileList cmd_trace(const RunConfig& config) {
  prepare_out(config);
  const auto& ns = config.n_list;
  std::vector<EntanglementTrace> traces(ns.size());
  parallel_for(
      static_cast<std::int64_t>(ns.size()),
      [&](std::int64_t i) {
        const int n = ns[static_cast<std::size_t>(i)];
        const Propagator prop(build_hamiltonian(config.model_spec(n)), config.evolution_options());
        traces[static_cast<std::size_t>(i)] =
            compute_trace(start_state(config, n), prop, config.trace_options(), to_string(config.model));
      },
      config.jobs);

  FileList files;
  for (const auto& tr : traces) {
    const std::string name = "trace" + suffix(tr.env_spins, config);
    write_file(config, name, render_trace(tr, config, "trace"));
    files.push_back(name);
  }
  if (ns.size() > 1) {
    const double scale = config.entropy_units == "bits" ? 1.0 / std::log(2.0) : 1.0;
    std::ostringstream os;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    CsvWriter csv(os, comment(config, "trace"));
    csv.header({"N", "peak_speed", "t_peak", "first_peak_speed", "first_peak_t"});
    for (const auto& tr : traces) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        if (tr.samples[k].epsilon_dot > tr.samples[best].epsilon_dot) best = k;
      }
      const std::size_t first = first_speed_peak(tr);
      const auto& b = tr.samples[best];
      const auto& f = tr.samples[first];
      csv.row({static_cast<double>(tr.env_spins), b.epsilon_dot * scale, b.t, f.epsilon_dot * scale, f.t});
      rows.push_back({{"N", tr.env_spins},
                      {"peak_speed", b.epsilon_dot * scale},
                      {"t_peak", b.t},
                      {"first_peak_speed", f.epsilon_dot * scale},
                      {"first_peak_t", f.t}});
    }
    std::string payload = os.str();
    if (config.format == "json") {
      nlohmann::ordered_json j;
      j["config_hash"] = config.hash();
      j["rows"] = std::move(rows);
      payload = j.dump(1) + "\n";
    }
    const std::string name = "trace_summary." + config.format;
    write_file(config, name, payload);
    files.push_back(name);
  }
  return files;
}

FileList cmd_energy_sweep(const RunConfig& config) {
  prepare_out(config);
  const auto& ns = config.n_list;
  std::vector<EnergySweepRow> rows(ns.size());
  parallel_for(
      static_cast<std::int64_t>(ns.size()),
      [&](std::int64_t i) {
        const int n = ns[static_cast<std::size_t>(i)];
        const Propagator prop(build_hamiltonian(config.model_spec(n)), config.evolution_options());
        rows[static_cast<std::size_t>(i)] = audit_at_speed_peak(
            start_state(config, n), prop, config.trace_options(), config.basis_method, config.scan_options());
      },
      config.jobs);
  std::string payload;
  if (config.format == "json") {
    nlohmann::ordered_json j;
    j["config_hash"] = config.hash();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.audit.env_spins},
                     {"t_c", r.t_c},
                     {"peak_speed", r.peak_speed},
                     {"theta", r.basis.theta},
                     {"phi", r.basis.phi},
                     {"e_before", r.audit.e_before},
                     {"e_after_ensemble", r.audit.e_after_ensemble},
                     {"delta_e", r.audit.delta_e},
                     {"relative_deviation", r.audit.relative_deviation},
                     {"absolute", r.audit.absolute},
                     {"basis_source", r.basis_source},
                     {"fallback", r.operator_degenerate}});
    }
    j["rows"] = std::move(arr);
    payload = j.dump(1) + "\n";
  } else {
    std::ostringstream os;
    write_energy_csv(os, rows, comment(config, "energy-sweep"));
    payload = os.str();
  }
  const std::string name = "energy_sweep." + config.format;
  write_file(config, name, payload);
  return {name};
}

FileList cmd_trajectory(const RunConfig& config) {
  prepare_out(config);
  const auto& ns = config.n_list;
  std::vector<TrajectoryResult> results;
  results.reserve(ns.size());
  for (int n : ns) {
    const Propagator prop(build_hamiltonian(config.model_spec(n)), config.evolution_options());
    TrajectoryOptions to;
    to.policy = config.policy();
    to.t_max = config.t_max;
    to.seed = config.seed;
    to.method = config.basis_method;
    to.scan = config.scan_options();
    to.with_acceleration = true;
    results.push_back(run_trajectory(start_state(config, n), prop, to, to_string(config.model)));
  }
  FileList files;
  for (const auto& r : results) {
    std::ostringstream events;
    write_events_jsonl(events, r.events);
    const std::string ev_name = "events_N" + std::to_string(r.trace.env_spins) + ".jsonl";
    write_file(config, ev_name, events.str());
    files.push_back(ev_name);
    const std::string tr_name = "trajectory" + suffix(r.trace.env_spins, config);
    write_file(config, tr_name, render_trace(r.trace, config, "trajectory"));
    files.push_back(tr_name);
  }
  return files;
}

FileList cmd_bullet(const RunConfig& config) {
  prepare_out(config);
  // The JSON report is always written; csv adds a flat quantity,value table.
  const std::string report = bullet::report_json(config.bullet, config.bullet_grid);
  write_file(config, "bullet.json", report);
  if (config.format == "json") return {"bullet.json"};
  const auto j = nlohmann::ordered_json::parse(report);
  std::ostringstream os;
  CsvWriter csv(os, comment(config, "bullet"));
  csv.header({"quantity", "value"});
  for (const auto& [k, v] : j.items()) csv.row_text({k, format_number(v.get<double>())});
  write_file(config, "bullet.csv", os.str());
  return {"bullet.json", "bullet.csv"};
}

FileList cmd_revival(const RunConfig& config) {
  prepare_out(config);
  RevivalOptions ro;
  ro.policy = config.policy();
  ro.trials = config.trials;
  ro.seed = config.seed;
  ro.method = config.basis_method;
  ro.scan = config.scan_options();
  ro.sample_clicks = config.sample_clicks;
  FileList files;
  for (int n : config.n_list) {
    const RevivalReport r = revival_protocol(n, config.coupling, ro);
    const std::string name = "revival_N" + std::to_string(n) + ".json";
    write_file(config, name, revival_json(r));
    files.push_back(name);
  }
  const auto rows = critical_sweep(config.n_list, config.coupling, ro);
  std::ostringstream os;
  write_critical_csv(os, rows, comment(config, "revival") + " critical_N=" +
                                   std::to_string(critical_env_size(rows)));
  write_file(config, "critical_sweep.csv", os.str());
  files.push_back("critical_sweep.csv");
  return files;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"estlab: entangling-speed collapse laboratory"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::string seed, jobs, out, format;
  } flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "flat key = value config file");
    sub->add_option("--set", flags.sets, "override one key (key=value), repeatable");
    sub->add_option("--seed", flags.seed, "RNG seed (u64)");
    sub->add_option("--jobs", flags.jobs, "max concurrent sweep points (0 = runtime default)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--format", flags.format, "csv or json");
    return sub;
  };
  struct Command {
    const char* name;
    const char* help;
    FileList (*fn)(const RunConfig&);
  };
  const Command commands[] = {
      {"trace", "entropy, speed and acceleration traces per N", &cmd_trace},
      {"energy-sweep", "energy audit at the first speed peak per N", &cmd_energy_sweep},
      {"trajectory", "collapse trajectory with event log", &cmd_trajectory},
      {"bullet", "vee-potential collapse basis report", &cmd_bullet},
      {"revival", "revival protocol and critical-N sweep", &cmd_revival},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) subs.push_back(add_common(app.add_subcommand(c.name, c.help)));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    for (const auto& kv : flags.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!flags.seed.empty()) config.set("seed", flags.seed);
    if (!flags.jobs.empty()) config.set("jobs", flags.jobs);
    if (!flags.out.empty()) config.set("out", flags.out);
    if (!flags.format.empty()) config.set("format", flags.format);
    if (config.jobs > 0) omp_set_num_threads(config.jobs);

    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      for (const auto& f : commands[i].fn(config)) out << (fs::path(config.out) / f).string() << '\n';
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace estlab::cli
