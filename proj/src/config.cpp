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

#include "estlab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "estlab/io.hpp"

namespace estlab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || std::isnan(d)) bad(key, v, "expected a number");
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) bad(key, v, "expected an integer");
  return i;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-') bad(key, v, "expected an unsigned integer");
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) bad(key, v, "expected an unsigned integer");
  return u;
}

int positive_int(const std::string& key, const std::string& v) {
  const long long i = to_integer(key, v);
  if (i < 1 || i > 1'000'000'000) bad(key, v, "expected a positive integer");
  return static_cast<int>(i);
}

double positive(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (!(d > 0.0)) bad(key, v, "must be > 0");
  return d;
}

double finite_positive(const std::string& key, const std::string& v) {
  const double d = positive(key, v);
  if (!std::isfinite(d)) bad(key, v, "must be finite");
  return d;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, v, "expected true or false");
}

template <class F>
auto wrap(const std::string& key, const std::string& v, F&& parse) {
  try {
    return parse(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad(key, v, e.what());
  }
}

struct Field {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    auto num = [](double RunConfig::*m) {
      return [m](const RunConfig& c) { return format_number(c.*m); };
    };
    v.push_back({"model",
                 [](RunConfig& c, const std::string& s) {
                   c.model = wrap("model", s, [](const std::string& x) { return parse_model_kind(x); });
                   if (c.model == ModelKind::Custom) bad("model", s, "custom models are library-only");
                 },
                 [](const RunConfig& c) { return to_string(c.model); }});
    v.push_back({"coupling",
                 [](RunConfig& c, const std::string& s) { c.coupling = finite_positive("coupling", s); },
                 num(&RunConfig::coupling)});
    v.push_back({"n_list",
                 [](RunConfig& c, const std::string& s) {
                   std::vector<int> out;
                   std::stringstream ss(s);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     const int n = positive_int("n_list", trim(item));
                     if (n + 1 > kMaxSites) bad("n_list", s, "N too large");
                     out.push_back(n);
                   }
                   if (out.empty()) bad("n_list", s, "empty list");
                   c.n_list = out;
                 },
                 [](const RunConfig& c) { return join_ints(c.n_list); }});
    v.push_back({"initial_env",
                 [](RunConfig& c, const std::string& s) {
                   c.initial_env = wrap("initial_env", s, [](const std::string& x) { return parse_initial_env(x); });
                 },
                 [](const RunConfig& c) { return to_string(c.initial_env); }});
    v.push_back({"threshold",
                 [](RunConfig& c, const std::string& s) { c.threshold = positive("threshold", s); },
                 num(&RunConfig::threshold)});
    v.push_back({"basis_method",
                 [](RunConfig& c, const std::string& s) {
                   c.basis_method = wrap("basis_method", s, [](const std::string& x) { return parse_basis_method(x); });
                 },
                 [](const RunConfig& c) { return to_string(c.basis_method); }});
    v.push_back({"dt", [](RunConfig& c, const std::string& s) { c.dt = finite_positive("dt", s); },
                 num(&RunConfig::dt)});
    v.push_back({"t_max", [](RunConfig& c, const std::string& s) { c.t_max = finite_positive("t_max", s); },
                 num(&RunConfig::t_max)});
    v.push_back({"seed", [](RunConfig& c, const std::string& s) { c.seed = to_u64("seed", s); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    v.push_back({"out",
                 [](RunConfig& c, const std::string& s) {
                   if (s.empty()) bad("out", s, "empty path");
                   c.out = s;
                 },
                 [](const RunConfig& c) { return c.out; }});
    v.push_back({"format",
                 [](RunConfig& c, const std::string& s) {
                   if (s != "csv" && s != "json") bad("format", s, "expected csv or json");
                   c.format = s;
                 },
                 [](const RunConfig& c) { return c.format; }});
    v.push_back({"entropy_units",
                 [](RunConfig& c, const std::string& s) {
                   if (s != "nats" && s != "bits") bad("entropy_units", s, "expected nats or bits");
                   c.entropy_units = s;
                 },
                 [](const RunConfig& c) { return c.entropy_units; }});
    v.push_back({"jobs",
                 [](RunConfig& c, const std::string& s) {
                   const long long j = to_integer("jobs", s);
                   if (j < 0 || j > 4096) bad("jobs", s, "expected 0 (default) to 4096");
                   c.jobs = static_cast<int>(j);
                 },
                 [](const RunConfig& c) { return std::to_string(c.jobs); }});
    v.push_back({"trials", [](RunConfig& c, const std::string& s) { c.trials = positive_int("trials", s); },
                 [](const RunConfig& c) { return std::to_string(c.trials); }});
    v.push_back({"scan_theta",
                 [](RunConfig& c, const std::string& s) {
                   c.scan_theta = positive_int("scan_theta", s);
                   if (c.scan_theta < 2) bad("scan_theta", s, "need at least 2 points");
                 },
                 [](const RunConfig& c) { return std::to_string(c.scan_theta); }});
    v.push_back({"scan_phi", [](RunConfig& c, const std::string& s) { c.scan_phi = positive_int("scan_phi", s); },
                 [](const RunConfig& c) { return std::to_string(c.scan_phi); }});
    v.push_back({"acceleration_step",
                 [](RunConfig& c, const std::string& s) {
                   c.acceleration_step = finite_positive("acceleration_step", s);
                   if (c.acceleration_step < 1e-8) bad("acceleration_step", s, "step underflows (< 1e-8)");
                 },
                 num(&RunConfig::acceleration_step)});
    v.push_back({"product_stencil",
                 [](RunConfig& c, const std::string& s) {
                   if (s == "symmetric") {
                     c.product_stencil = ProductStencil::Symmetric;
                   } else if (s == "one_sided") {
                     c.product_stencil = ProductStencil::OneSided;
                   } else {
                     bad("product_stencil", s, "expected symmetric or one_sided");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.product_stencil == ProductStencil::Symmetric ? "symmetric" : "one_sided");
                 }});
    v.push_back({"evolution",
                 [](RunConfig& c, const std::string& s) {
                   if (s == "auto") {
                     c.evolution = EvolutionMethod::Auto;
                   } else if (s == "dense") {
                     c.evolution = EvolutionMethod::Dense;
                   } else if (s == "iterative") {
                     c.evolution = EvolutionMethod::Iterative;
                   } else {
                     bad("evolution", s, "expected auto, dense or iterative");
                   }
                 },
                 [](const RunConfig& c) {
                   switch (c.evolution) {
                     case EvolutionMethod::Dense: return std::string("dense");
                     case EvolutionMethod::Iterative: return std::string("iterative");
                     default: return std::string("auto");
                   }
                 }});
    v.push_back({"sample_clicks",
                 [](RunConfig& c, const std::string& s) { c.sample_clicks = to_bool("sample_clicks", s); },
                 [](const RunConfig& c) { return std::string(c.sample_clicks ? "true" : "false"); }});
    v.push_back({"mass", [](RunConfig& c, const std::string& s) { c.bullet.mass = finite_positive("mass", s); },
                 [](const RunConfig& c) { return format_number(c.bullet.mass); }});
    v.push_back({"density",
                 [](RunConfig& c, const std::string& s) { c.bullet.density = finite_positive("density", s); },
                 [](const RunConfig& c) { return format_number(c.bullet.density); }});
    v.push_back({"eta", [](RunConfig& c, const std::string& s) { c.bullet.eta = finite_positive("eta", s); },
                 [](const RunConfig& c) { return format_number(c.bullet.eta); }});
    v.push_back({"line_density_per_cm",
                 [](RunConfig& c, const std::string& s) {
                   c.bullet.line_density = 100.0 * finite_positive("line_density_per_cm", s);
                 },
                 [](const RunConfig& c) { return format_number(c.bullet.line_density / 100.0); }});
    v.push_back({"v0",
                 [](RunConfig& c, const std::string& s) {
                   c.bullet.v0 = to_double("v0", s);
                   if (!std::isfinite(c.bullet.v0)) bad("v0", s, "must be finite");
                 },
                 [](const RunConfig& c) { return format_number(c.bullet.v0); }});
    v.push_back({"x0",
                 [](RunConfig& c, const std::string& s) {
                   c.bullet.x0 = to_double("x0", s);
                   if (!std::isfinite(c.bullet.x0)) bad("x0", s, "must be finite");
                 },
                 [](const RunConfig& c) { return format_number(c.bullet.x0); }});
    v.push_back({"grid_half_width",
                 [](RunConfig& c, const std::string& s) {
                   const double w = finite_positive("grid_half_width", s);
                   c.bullet_grid.xi_min = -w;
                   c.bullet_grid.xi_max = w;
                 },
                 [](const RunConfig& c) { return format_number(c.bullet_grid.xi_max); }});
    v.push_back({"grid_points",
                 [](RunConfig& c, const std::string& s) {
                   c.bullet_grid.points = positive_int("grid_points", s);
                   if (c.bullet_grid.points < 16) bad("grid_points", s, "need at least 16 points");
                 },
                 [](const RunConfig& c) { return std::to_string(c.bullet_grid.points); }});
    std::sort(v.begin(), v.end(), [](const Field& a, const Field& b) { return a.name < b.name; });
    return v;
  }();
  return f;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.name == key) return &f;
  }
  return nullptr;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  f->set(*this, trim(value));
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& f : fields()) {
    if (f.name == "out" || f.name == "jobs") continue;
    s += f.name + " = " + f.get(*this) + "\n";
  }
  return s;
}

std::string RunConfig::hash() const { return hex64(fnv1a(canonical())); }

ModelSpec RunConfig::model_spec(int env_spins) const {
  ModelSpec spec;
  spec.kind = model;
  spec.env_spins = env_spins;
  spec.coupling = coupling;
  return spec;
}

ScanOptions RunConfig::scan_options() const {
  ScanOptions s;
  s.theta_points = scan_theta;
  s.phi_points = scan_phi;
  s.acceleration.step = acceleration_step;
  s.acceleration.product_stencil = product_stencil;
  return s;
}

EvolutionOptions RunConfig::evolution_options() const {
  EvolutionOptions e;
  e.method = evolution;
  return e;
}

TraceOptions RunConfig::trace_options() const {
  TraceOptions t;
  t.dt = dt;
  t.t_max = t_max;
  t.acceleration.step = acceleration_step;
  t.acceleration.product_stencil = product_stencil;
  return t;
}

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys = [] {
    std::map<std::string, std::string> m;
    const RunConfig defaults;
    for (const auto& f : fields()) m[f.name] = f.get(defaults);
    return m;
  }();
  return keys;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");
    c.set(key, line.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace estlab
