/*
 * Copyright 2026 The gpsurrogate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "gpsur/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"

namespace gpsur {

namespace pt = boost::property_tree;

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<std::string> get(const pt::ptree& t, const std::string& key) {
  auto v = t.get_optional<std::string>(pt::ptree::path_type(key, '.'));
  if (!v) return std::nullopt;
  return trimmed(*v);
}

double to_double(const std::string& key, const std::string& s) {
  try {
    return parse_double(s);
  } catch (const Error&) {
    throw ConfigError("config: '" + key + "' is not a number: " + s);
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || s.empty()) {
    throw ConfigError("config: '" + key + "' is not a non-negative integer: " + s);
  }
  return v;
}

void read_double(const pt::ptree& t, const std::string& key, double& out) {
  if (auto v = get(t, key)) out = to_double(key, *v);
}

void read_size(const pt::ptree& t, const std::string& key, std::size_t& out) {
  if (auto v = get(t, key)) out = static_cast<std::size_t>(to_u64(key, *v));
}

void read_u64(const pt::ptree& t, const std::string& key, std::uint64_t& out) {
  if (auto v = get(t, key)) out = to_u64(key, *v);
}

void read_sampler(const pt::ptree& t, const std::string& section, SamplerSettings& s) {
  read_size(t, section + ".walkers", s.walkers);
  read_size(t, section + ".sweeps", s.sweeps);
  read_size(t, section + ".burn_in", s.burn_in);
  read_double(t, section + ".stretch_a", s.stretch_a);
}

void check_sampler(const std::string& what, const SamplerSettings& s) {
  if (s.sweeps == 0) throw ConfigError("config: " + what + ".sweeps must be > 0");
  if (s.burn_in >= s.sweeps) throw ConfigError("config: " + what + ".burn_in must be < sweeps");
  if (!(s.stretch_a > 1.0)) throw ConfigError("config: " + what + ".stretch_a must be > 1");
}

std::string str(double v) { return format_double(v); }
std::string str(std::size_t v) { return std::to_string(v); }

void put_sampler(pt::ptree& t, const std::string& section, const SamplerSettings& s) {
  t.put(section + ".walkers", str(s.walkers));
  t.put(section + ".sweeps", str(s.sweeps));
  t.put(section + ".burn_in", str(s.burn_in));
  t.put(section + ".stretch_a", str(s.stretch_a));
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (name.empty()) throw ConfigError("config: run.name must not be empty");
  if (network_file.empty()) throw ConfigError("config: network.file is required");
  if (free_parameters.empty()) throw ConfigError("config: network.free lists no parameters");
  if (sigma && !(*sigma > 0.0)) throw ConfigError("config: data.sigma must be > 0");
  if (noise_var && !(*noise_var > 0.0)) throw ConfigError("config: data.noise_var must be > 0");
  if (!(reference_prior_variance > 0.0)) {
    throw ConfigError("config: reference_prior.variance must be > 0");
  }
  check_sampler("prior_chain", prior_chain);
  if (!(prior_init_sd > 0.0)) throw ConfigError("config: prior_chain.init_sd must be > 0");
  if (!(inflation >= 1.0)) throw ConfigError("config: prior.inflation must be >= 1");
  if (!(length_scale > 0.0)) throw ConfigError("config: kernel.length_scale must be > 0");
  if (s2 && !(*s2 > 0.0)) throw ConfigError("config: kernel.s2 must be > 0 or 'auto'");
  if (!(relative_jitter >= 0.0)) throw ConfigError("config: kernel.relative_jitter must be >= 0");
  if (init_mode == InitMode::kGrid && init_grid_per_dim < 1) {
    throw ConfigError("config: init.grid_per_dim must be >= 1");
  }
  if (init_mode == InitMode::kGrid && !(init_grid_half_width_sds > 0.0)) {
    throw ConfigError("config: init.grid_half_width_sds must be > 0");
  }
  if (init_mode == InitMode::kChain && init_chain_iterations < 1) {
    throw ConfigError("config: init.chain_iterations must be >= 1");
  }
  search.validate();
  check_sampler("diagnostics", {diagnostics.walker_count, diagnostics.sweeps,
                                diagnostics.burn_in, diagnostics.stretch_a});
  check_sampler("sample", sampling);
  if (grid_points < 2) throw ConfigError("config: grid.points_per_dim must be >= 2");
  if (!(grid_half_width_sds > 0.0)) throw ConfigError("config: grid.half_width_sds must be > 0");
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree t;
  std::istringstream in(text);
  try {
    pt::read_ini(in, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // [resolved] and [status] come from run manifests and are informational.
  static const char* const kKnown[] = {"run",       "network", "data",        "reference_prior",
                                        "prior_chain", "prior", "kernel",     "init",
                                        "search",    "diagnostics", "sample", "grid",
                                        "seeds",     "resolved", "status"};
  static const std::map<std::string, std::set<std::string>> kKeys = {
      {"run", {"name", "mode", "budget", "diag_cadence"}},
      {"network", {"file", "experiments", "free"}},
      {"data", {"sigma", "noise_var"}},
      {"reference_prior", {"variance"}},
      {"prior_chain", {"walkers", "sweeps", "burn_in", "stretch_a", "init_sd"}},
      {"prior", {"inflation"}},
      {"kernel", {"length_scale", "s2", "relative_jitter"}},
      {"init", {"mode", "grid_per_dim", "grid_half_width_sds", "chain_iterations"}},
      {"search", {"walkers", "sweeps", "burn_in", "stretch_a", "distance_factor", "tie_tolerance"}},
      {"diagnostics", {"walkers", "sweeps", "burn_in", "stretch_a", "true_prior"}},
      {"sample", {"walkers", "sweeps", "burn_in", "stretch_a"}},
      {"grid", {"points_per_dim", "half_width_sds"}},
      {"seeds", {"data", "prior", "init", "training", "diagnostics", "sample"}},
  };
  for (const auto& [section, body] : t) {
    bool ok = false;
    for (const char* k : kKnown) ok = ok || section == k;
    if (!ok) throw ConfigError("config: unknown section [" + section + "]");
    const auto keys = kKeys.find(section);
    if (keys == kKeys.end()) continue;
    for (const auto& [key, _] : body) {
      if (!keys->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
    }
  }

  RunConfig c;
  if (auto v = get(t, "run.name")) c.name = *v;
  if (auto v = get(t, "run.mode")) {
    if (*v == "active") {
      c.mode = SelectionMode::kActive;
    } else if (*v == "random") {
      c.mode = SelectionMode::kRandom;
    } else {
      throw ConfigError("config: run.mode must be active or random");
    }
  }
  read_size(t, "run.budget", c.budget);
  read_size(t, "run.diag_cadence", c.diag_cadence);

  if (auto v = get(t, "network.file")) {
    std::filesystem::path p(*v);
    if (p.is_relative()) p = std::filesystem::absolute(base_dir / p);
    c.network_file = p.lexically_normal().string();
  }
  if (auto v = get(t, "network.experiments")) {
    for (const auto& tok : split_list(*v)) {
      c.experiment_ids.push_back(static_cast<int>(to_u64("network.experiments", tok)));
    }
  }
  if (auto v = get(t, "network.free")) c.free_parameters = split_list(*v);

  if (auto v = get(t, "data.sigma")) c.sigma = to_double("data.sigma", *v);
  if (auto v = get(t, "data.noise_var")) c.noise_var = to_double("data.noise_var", *v);
  read_double(t, "reference_prior.variance", c.reference_prior_variance);

  read_sampler(t, "prior_chain", c.prior_chain);
  read_double(t, "prior_chain.init_sd", c.prior_init_sd);
  read_double(t, "prior.inflation", c.inflation);

  read_double(t, "kernel.length_scale", c.length_scale);
  if (auto v = get(t, "kernel.s2"); v && *v != "auto") c.s2 = to_double("kernel.s2", *v);
  read_double(t, "kernel.relative_jitter", c.relative_jitter);

  if (auto v = get(t, "init.mode")) {
    if (*v == "grid") {
      c.init_mode = InitMode::kGrid;
    } else if (*v == "chain") {
      c.init_mode = InitMode::kChain;
    } else {
      throw ConfigError("config: init.mode must be grid or chain");
    }
  }
  read_size(t, "init.grid_per_dim", c.init_grid_per_dim);
  read_double(t, "init.grid_half_width_sds", c.init_grid_half_width_sds);
  read_size(t, "init.chain_iterations", c.init_chain_iterations);

  read_size(t, "search.walkers", c.search.walker_count);
  read_size(t, "search.sweeps", c.search.search_sweeps);
  read_size(t, "search.burn_in", c.search.search_burn_in);
  read_double(t, "search.stretch_a", c.search.stretch_a);
  read_double(t, "search.distance_factor", c.search.distance_factor);
  read_double(t, "search.tie_tolerance", c.search.tie_tolerance);

  read_size(t, "diagnostics.walkers", c.diagnostics.walker_count);
  read_size(t, "diagnostics.sweeps", c.diagnostics.sweeps);
  read_size(t, "diagnostics.burn_in", c.diagnostics.burn_in);
  read_double(t, "diagnostics.stretch_a", c.diagnostics.stretch_a);
  if (auto v = get(t, "diagnostics.true_prior")) {
    if (*v == "surrogate") {
      c.diagnostics_prior = DiagnosticsPrior::kSurrogate;
    } else if (*v == "reference") {
      c.diagnostics_prior = DiagnosticsPrior::kReference;
    } else {
      throw ConfigError("config: diagnostics.true_prior must be surrogate or reference");
    }
  }

  read_sampler(t, "sample", c.sampling);
  read_size(t, "grid.points_per_dim", c.grid_points);
  read_double(t, "grid.half_width_sds", c.grid_half_width_sds);

  if (auto v = get(t, "seeds.data"); v && *v != "network") c.seed_data = to_u64("seeds.data", *v);
  read_u64(t, "seeds.prior", c.seed_prior);
  read_u64(t, "seeds.init", c.seed_init);
  read_u64(t, "seeds.training", c.seed_training);
  read_u64(t, "seeds.diagnostics", c.seed_diagnostics);
  read_u64(t, "seeds.sample", c.seed_sample);

  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

void apply_seed_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("seed override must be name=value: " + assignment);
  const std::string key = trimmed(assignment.substr(0, eq));
  const std::uint64_t v = to_u64("seed override " + key, trimmed(assignment.substr(eq + 1)));
  if (key == "data") {
    cfg.seed_data = v;
  } else if (key == "prior") {
    cfg.seed_prior = v;
  } else if (key == "init") {
    cfg.seed_init = v;
  } else if (key == "training") {
    cfg.seed_training = v;
  } else if (key == "diagnostics") {
    cfg.seed_diagnostics = v;
  } else if (key == "sample") {
    cfg.seed_sample = v;
  } else {
    throw ConfigError("unknown seed name in override: " + key);
  }
}

pt::ptree to_ptree(const RunConfig& c) {
  pt::ptree t;
  t.put("run.name", c.name);
  t.put("run.mode", c.mode == SelectionMode::kActive ? "active" : "random");
  t.put("run.budget", str(c.budget));
  t.put("run.diag_cadence", str(c.diag_cadence));

  t.put("network.file", c.network_file);
  std::vector<std::string> ids;
  for (int id : c.experiment_ids) ids.push_back(std::to_string(id));
  t.put("network.experiments", join(ids));
  t.put("network.free", join(c.free_parameters));

  if (c.sigma) t.put("data.sigma", str(*c.sigma));
  if (c.noise_var) t.put("data.noise_var", str(*c.noise_var));
  t.put("reference_prior.variance", str(c.reference_prior_variance));

  put_sampler(t, "prior_chain", c.prior_chain);
  t.put("prior_chain.init_sd", str(c.prior_init_sd));
  t.put("prior.inflation", str(c.inflation));

  t.put("kernel.length_scale", str(c.length_scale));
  t.put("kernel.s2", c.s2 ? str(*c.s2) : std::string("auto"));
  t.put("kernel.relative_jitter", str(c.relative_jitter));

  t.put("init.mode", c.init_mode == InitMode::kGrid ? "grid" : "chain");
  t.put("init.grid_per_dim", str(c.init_grid_per_dim));
  t.put("init.grid_half_width_sds", str(c.init_grid_half_width_sds));
  t.put("init.chain_iterations", str(c.init_chain_iterations));

  t.put("search.walkers", str(c.search.walker_count));
  t.put("search.sweeps", str(c.search.search_sweeps));
  t.put("search.burn_in", str(c.search.search_burn_in));
  t.put("search.stretch_a", str(c.search.stretch_a));
  t.put("search.distance_factor", str(c.search.distance_factor));
  t.put("search.tie_tolerance", str(c.search.tie_tolerance));

  t.put("diagnostics.walkers", str(c.diagnostics.walker_count));
  t.put("diagnostics.sweeps", str(c.diagnostics.sweeps));
  t.put("diagnostics.burn_in", str(c.diagnostics.burn_in));
  t.put("diagnostics.stretch_a", str(c.diagnostics.stretch_a));
  t.put("diagnostics.true_prior",
        c.diagnostics_prior == DiagnosticsPrior::kSurrogate ? "surrogate" : "reference");

  put_sampler(t, "sample", c.sampling);
  t.put("grid.points_per_dim", str(c.grid_points));
  t.put("grid.half_width_sds", str(c.grid_half_width_sds));

  t.put("seeds.data", c.seed_data ? std::to_string(*c.seed_data) : std::string("network"));
  t.put("seeds.prior", std::to_string(c.seed_prior));
  t.put("seeds.init", std::to_string(c.seed_init));
  t.put("seeds.training", std::to_string(c.seed_training));
  t.put("seeds.diagnostics", std::to_string(c.seed_diagnostics));
  t.put("seeds.sample", std::to_string(c.seed_sample));
  return t;
}

std::string config_hash(const RunConfig& cfg) {
  std::ostringstream text;
  pt::write_ini(text, to_ptree(cfg));
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str().substr(0, 10);
}

}  // namespace gpsur
