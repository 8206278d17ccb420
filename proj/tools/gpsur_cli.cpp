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


// gpsur: command-line experiment runner.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"
#include "gpsur/pipeline.hpp"
#include "gpsur/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> seed_overrides;
  std::string surface = "surrogate";
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o, bool out_required) {
  cmd->add_option("--config", o.config, "run configuration file")->required();
  auto* out = cmd->add_option("--out", o.out, "artifact directory");
  if (out_required) out->required();
  cmd->add_option("--seed-override", o.seed_overrides, "name=value, repeatable")
      ->type_name("K=V");
  cmd->add_flag("-q,--quiet", o.quiet, "no progress output");
}

void print_record(const gpsur::DiagnosticsRecord& d) {
  using gpsur::format_double;
  std::cout << "iteration " << d.iteration << "\n"
            << "e_approx " << format_double(d.e_approx) << "\n"
            << "e_true " << format_double(d.e_true) << "\n"
            << "e_star_approx " << format_double(d.e_star_approx) << "\n"
            << "e_star_true " << format_double(d.e_star_true) << "\n"
            << "r_measure " << format_double(d.r_measure) << "\n"
            << "mean_weight " << format_double(d.mean_weight) << "\n";
}

int execute(const std::string& command, const Options& o) {
  gpsur::RunConfig cfg;
  try {
    cfg = gpsur::load_run_config(o.config);
    for (const auto& s : o.seed_overrides) gpsur::apply_seed_override(cfg, s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gpsur::exit_code_for(e);
  }
  const fs::path dir = o.out.empty() ? gpsur::default_run_dir(cfg) : fs::path(o.out);
  const bool creates_dir = command == "run" || command == "gen-data";
  try {
    if (!creates_dir && !fs::is_directory(dir)) {
      throw gpsur::IoError("artifact directory does not exist: " + dir.string());
    }
    gpsur::Pipeline p(cfg, dir);
    if (!o.quiet) p.set_log(&std::cerr);
    gpsur::write_manifest(cfg, dir, command, "running");
    if (command == "gen-data") {
      p.gen_data();
    } else if (command == "build-prior") {
      p.build_prior();
    } else if (command == "train") {
      p.train();
    } else if (command == "diagnose") {
      print_record(p.diagnose());
    } else if (command == "sample") {
      p.sample(o.surface);
    } else if (command == "grid") {
      p.write_grid();
    } else {
      p.run();
    }
    const bool halted = !p.halt_reason().empty();
    gpsur::write_manifest(cfg, dir, command, halted ? "halted" : "ok", p.halt_reason(),
                          halted ? 2 : 0);
    if (halted) std::cerr << "training halted: " << p.halt_reason() << "\n";
    std::cout << dir.string() << "\n";
    return halted ? 2 : 0;
  } catch (const std::exception& e) {
    const int code = gpsur::exit_code_for(e);
    std::cerr << "error: " << e.what() << "\n";
    try {
      gpsur::write_manifest(cfg, dir, command, "error", e.what(), code);
    } catch (const std::exception& me) {
      std::cerr << "error: " << me.what() << "\n";
    }
    return code;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP surrogate posteriors with active selection of training points"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gpsur 0.1.0");
  Options o;

  add_common(app.add_subcommand("run", "full pipeline"), o, false);
  add_common(app.add_subcommand("gen-data", "synthetic observations"), o, false);
  add_common(app.add_subcommand("build-prior", "preliminary chain and Gaussian prior"), o, true);
  add_common(app.add_subcommand("train", "initial GP and training loop"), o, true);
  add_common(app.add_subcommand("diagnose", "recompute diagnostics of a saved surrogate"), o,
             true);
  auto* sample = app.add_subcommand("sample", "chain CSV for one surface");
  add_common(sample, o, true);
  sample->add_option("--surface", o.surface, "surrogate or true")
      ->check(CLI::IsMember({"surrogate", "true"}));
  add_common(app.add_subcommand("grid", "2-D grid evaluation CSV"), o, true);
  app.add_subcommand("simd", "print the active SIMD kernel set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "simd") {
    std::cout << gpsur::simd::isa_name(gpsur::simd::active_isa()) << "\n";
    return 0;
  }
  return execute(command, o);
}
