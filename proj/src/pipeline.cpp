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


#include "gpsur/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"

namespace gpsur {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string join_numbers(const double* v, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + format_double(v[i]);
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  try {
    for (const auto& tok : split_list(text)) out.push_back(parse_double(tok));
  } catch (const Error&) {
    throw IoError("bad number list in " + what);
  }
  return out;
}

std::size_t resolved_walkers(std::size_t configured, std::size_t dim) {
  return configured ? configured : 2 * dim;
}

std::vector<std::string> theta_header(std::size_t dim) {
  std::vector<std::string> h;
  for (std::size_t d = 0; d < dim; ++d) h.push_back("theta_" + std::to_string(d));
  return h;
}

void write_training_csv(const fs::path& path, const std::string& schema, const GpModel& gp) {
  auto header = theta_header(gp.dim());
  header.emplace_back("log_likelihood");
  CsvWriter csv(schema, header);
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const ParamVector x = gp.input(i);
    std::vector<std::string> cells;
    for (Eigen::Index d = 0; d < x.size(); ++d) cells.push_back(format_double(x[d]));
    cells.push_back(format_double(gp.output(i)));
    csv.add_row(std::move(cells));
  }
  csv.save(path.string());
}

TrainingSet read_training_csv(const fs::path& path, std::size_t dim) {
  const CsvTable t = read_csv(path.string());
  if (t.header.size() != dim + 1) throw IoError("training CSV has the wrong width: " + path.string());
  const std::size_t y = t.column("log_likelihood");
  TrainingSet ts;
  ts.inputs.resize(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(dim));
  ts.outputs.resize(static_cast<Eigen::Index>(t.size()));
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      ts.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = t.number(r, d);
    }
    ts.outputs[static_cast<Eigen::Index>(r)] = t.number(r, y);
  }
  return ts;
}

void write_chain(const fs::path& path, const ChainSamples& chain) {
  write_chain_csv(path.string(), chain);
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) return 1;
  if (dynamic_cast<const NumericalError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 2;
}

double resolve_s2(std::span<const double> proposal_log_likelihoods) {
  if (proposal_log_likelihoods.empty()) {
    throw NumericalError("cannot resolve s2: no finite proposal log-likelihoods were logged");
  }
  double m = 0.0;
  for (double v : proposal_log_likelihoods) m = std::max(m, std::abs(v));
  return m;
}

Problem load_problem(const RunConfig& cfg) {
  NetworkDefinition def = load_network_file(cfg.network_file);
  std::vector<ExperimentCondition> exps;
  if (cfg.experiment_ids.empty()) {
    exps = def.experiments;
  } else {
    for (int id : cfg.experiment_ids) {
      auto it = std::find_if(def.experiments.begin(), def.experiments.end(),
                             [id](const ExperimentCondition& e) { return e.id == id; });
      if (it == def.experiments.end()) {
        throw ConfigError("network file has no experiment " + std::to_string(id));
      }
      exps.push_back(*it);
    }
  }
  ParameterMap params(def.network, def.truth, cfg.free_parameters);
  const double sigma = cfg.sigma.value_or(def.noise_sigma);
  const double noise_var = cfg.noise_var.value_or(sigma * sigma);
  const std::uint64_t seed = cfg.seed_data.value_or(def.seed);
  auto model = std::make_shared<const ForwardModel>(def.network);
  return Problem{std::move(def), std::move(model), std::move(params), std::move(exps),
                 sigma,          noise_var,        seed};
}

GaussianPrior reference_prior(const RunConfig& cfg, const Problem& problem) {
  const auto n = static_cast<Eigen::Index>(problem.dim());
  return GaussianPrior(ParamVector::Zero(n),
                       Eigen::MatrixXd::Identity(n, n) * cfg.reference_prior_variance,
                       problem.params.positivity_mask());
}

TruePosteriorTarget reference_target(const RunConfig& cfg, const Problem& problem,
                                     std::vector<double> observations) {
  if (observations.size() != problem.experiments.size()) {
    throw IoError("observation count does not match the configured experiments");
  }
  return TruePosteriorTarget{problem.model,         problem.params, problem.experiments,
                             std::move(observations), problem.noise_var,
                             reference_prior(cfg, problem)};
}

Pipeline::Pipeline(RunConfig cfg, fs::path dir)
    : cfg_(std::move(cfg)), dir_(std::move(dir)), problem_(load_problem(cfg_)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw IoError("cannot create artifact directory: " + dir_.string());
  }
}

void Pipeline::require(const char* name, const char* producer) const {
  if (!fs::exists(path(name))) {
    throw IoError(std::string("missing artifact ") + path(name).string() + "; run `gpsur " +
                  producer + "` first");
  }
}

ObservationSet Pipeline::gen_data() {
  ObservationSet obs = generate_synthetic_data(*problem_.model, problem_.definition.truth,
                                               problem_.experiments, problem_.sigma,
                                               problem_.data_seed);
  CsvWriter csv("gpsurrogate observations", {"experiment_id", "beta", "clean", "observation"});
  for (std::size_t k = 0; k < problem_.experiments.size(); ++k) {
    csv.add_row({std::to_string(problem_.experiments[k].id),
                 format_double(problem_.experiments[k].beta), format_double(obs.clean[k]),
                 format_double(obs.observations[k])});
  }
  csv.save(path(artifact::kObservations).string());
  return obs;
}

std::vector<double> Pipeline::load_observations() const {
  require(artifact::kObservations, "gen-data");
  const CsvTable t = read_csv(path(artifact::kObservations).string());
  const std::size_t id_col = t.column("experiment_id");
  const std::size_t obs_col = t.column("observation");
  if (t.size() != problem_.experiments.size()) {
    throw IoError("observations.csv does not match the configured experiments");
  }
  std::vector<double> out;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t.rows[r][id_col] != std::to_string(problem_.experiments[r].id)) {
      throw IoError("observations.csv does not match the configured experiments");
    }
    out.push_back(t.number(r, obs_col));
  }
  return out;
}

PriorArtifact Pipeline::build_prior() {
  const TruePosteriorTarget target = reference_target(cfg_, problem_, load_observations());
  const std::size_t n = problem_.dim();
  PriorBuildConfig pc;
  pc.walkers = resolved_walkers(cfg_.prior_chain.walkers, n);
  pc.sweeps = cfg_.prior_chain.sweeps;
  pc.burn_in = cfg_.prior_chain.burn_in;
  pc.stretch_a = cfg_.prior_chain.stretch_a;
  pc.init_center = problem_.params.base_vector();
  pc.init_spread = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) *
                   (cfg_.prior_init_sd * cfg_.prior_init_sd);
  pc.inflation = cfg_.inflation;
  if (log_) *log_ << "prior chain: " << pc.walkers << " walkers x " << pc.sweeps << " sweeps\n";
  PriorBuildResult res = build_gaussian_prior(target, pc, cfg_.seed_prior);
  const bool s2_auto = !cfg_.s2.has_value();
  const double s2 = s2_auto ? resolve_s2(res.proposal_log_likelihoods) : *cfg_.s2;
  write_chain(path(artifact::kPriorChain), res.chain);

  pt::ptree t;
  const GaussianPrior& p = res.prior;
  t.put("prior.dim", std::to_string(n));
  t.put("prior.names", [&] {
    std::string s;
    for (const auto& name : problem_.params.names()) s += (s.empty() ? "" : " ") + name;
    return s;
  }());
  t.put("prior.inflation", format_double(p.inflation()));
  t.put("prior.mean", join_numbers(p.mean().data(), n));
  std::vector<double> cov;
  for (Eigen::Index i = 0; i < p.covariance().rows(); ++i) {
    for (Eigen::Index j = 0; j < p.covariance().cols(); ++j) cov.push_back(p.covariance()(i, j));
  }
  t.put("prior.covariance", join_numbers(cov.data(), cov.size()));
  std::string mask;
  for (bool b : p.positivity_mask()) mask += mask.empty() ? (b ? "1" : "0") : (b ? " 1" : " 0");
  t.put("prior.positive", mask);
  t.put("kernel.s2", format_double(s2));
  t.put("kernel.s2_source", s2_auto ? "auto" : "config");
  t.put("kernel.proposals_logged", std::to_string(res.proposal_log_likelihoods.size()));
  t.put("chain.walkers", std::to_string(pc.walkers));
  t.put("chain.sweeps", std::to_string(res.chain.sweeps));
  t.put("chain.burn_in", std::to_string(res.chain.burn_in_used));
  t.put("chain.acceptance_fraction", format_double(res.chain.acceptance_fraction));
  t.put("chain.nan_rejections", std::to_string(res.chain.nan_rejections));
  if (!res.chain.warning.empty()) t.put("chain.warning", res.chain.warning);
  std::ofstream f(path(artifact::kPrior));
  if (!f) throw IoError("cannot write " + path(artifact::kPrior).string());
  pt::write_ini(f, t);
  if (!f) throw IoError("cannot write " + path(artifact::kPrior).string());
  if (log_) *log_ << "prior built; s2 = " << format_double(s2) << "\n";
  return PriorArtifact{std::move(res.prior), s2, s2_auto, pc.walkers};
}

PriorArtifact Pipeline::load_prior() const {
  require(artifact::kPrior, "build-prior");
  pt::ptree t;
  try {
    pt::read_ini(path(artifact::kPrior).string(), t);
  } catch (const pt::ini_parser_error& e) {
    throw IoError(std::string("prior.ini: ") + e.what());
  }
  const std::size_t n = problem_.dim();
  const std::string where = path(artifact::kPrior).string();
  try {
    if (t.get<std::size_t>("prior.dim") != n) throw IoError("prior.ini dimension mismatch");
    const auto mean = parse_numbers(t.get<std::string>("prior.mean"), where);
    const auto cov = parse_numbers(t.get<std::string>("prior.covariance"), where);
    const auto mask_v = parse_numbers(t.get<std::string>("prior.positive"), where);
    if (mean.size() != n || cov.size() != n * n || mask_v.size() != n) {
      throw IoError("prior.ini has inconsistent sizes");
    }
    ParamVector m(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<bool> mask(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[static_cast<Eigen::Index>(i)] = mean[i];
      mask[i] = mask_v[i] != 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov[i * n + j];
      }
    }
    const double inflation = parse_double(t.get<std::string>("prior.inflation"));
    const double s2 = parse_double(t.get<std::string>("kernel.s2"));
    const bool s2_auto = t.get<std::string>("kernel.s2_source") == "auto";
    const std::size_t walkers = t.get<std::size_t>("chain.walkers");
    return PriorArtifact{GaussianPrior(std::move(m), std::move(c), std::move(mask), inflation), s2,
                         s2_auto, walkers};
  } catch (const pt::ptree_error& e) {
    throw IoError(where + ": " + e.what());
  }
}

TruePosteriorTarget Pipeline::diagnostics_target(const SurrogatePosterior& surrogate) const {
  TruePosteriorTarget target = reference_target(cfg_, problem_, load_observations());
  if (cfg_.diagnostics_prior == DiagnosticsPrior::kSurrogate) {
    return target.with_prior(surrogate.prior);
  }
  return target;
}

TrainResult Pipeline::train() {
  halt_reason_.clear();
  const TruePosteriorTarget target = reference_target(cfg_, problem_, load_observations());
  PriorArtifact pa = load_prior();
  const std::size_t n = problem_.dim();
  const KernelParams kernel(pa.s2, cfg_.length_scale);
  const double jitter = cfg_.relative_jitter * pa.s2;

  PointMatrix inputs;
  if (cfg_.init_mode == InitMode::kGrid) {
    inputs = init_training_grid(pa.prior, cfg_.init_grid_per_dim, cfg_.init_grid_half_width_sds);
  } else {
    require(artifact::kPriorChain, "build-prior");
    const ChainSamples chain =
        read_chain_csv(path(artifact::kPriorChain).string(), pa.chain_walkers);
    inputs = init_training_from_chain(chain, pa.chain_walkers, cfg_.init_chain_iterations,
                                      cfg_.seed_init);
  }
  GpModel gp(n, kernel, jitter);
  std::size_t dropped = 0;
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    const ParamVector x = inputs.row(r).transpose();
    const double ll = log_likelihood(target, x);
    if (!std::isfinite(ll)) {
      ++dropped;
      continue;
    }
    gp.add_point(x, ll);
  }
  if (gp.size() == 0) throw NumericalError("no initial training point has a finite log-likelihood");
  if (log_ && dropped) *log_ << "dropped " << dropped << " initial points with -inf likelihood\n";
  write_training_csv(path(artifact::kInitialTraining), "gpsurrogate training_set", gp);

  SurrogatePosterior surrogate{pa.prior, std::move(gp), 0.0};
  const TruePosteriorTarget diag_target = diagnostics_target(surrogate);

  TrainOptions opt;
  opt.budget = cfg_.budget;
  opt.mode = cfg_.mode;
  opt.acquisition = cfg_.search;
  opt.diag_cadence = cfg_.diag_cadence;
  opt.diagnostics = cfg_.diagnostics;
  opt.diagnostics_seed = cfg_.seed_diagnostics;
  opt.diagnostics_target = &diag_target;
  if (log_) {
    opt.on_iteration = [this](const IterationRecord& r) {
      if (r.iteration % 10 == 0) {
        *log_ << "iteration " << r.iteration << ": log-likelihood " << r.log_likelihood << "\n";
      }
    };
    opt.on_diagnostics = [this](const DiagnosticsRecord& d) {
      *log_ << "diagnostics @" << d.iteration << ": E_approx " << d.e_approx << ", E_true "
            << d.e_true << ", R " << d.r_measure << "\n";
    };
  }
  TrainResult res = train_loop(target, std::move(surrogate), opt, cfg_.seed_training);
  write_history_csv(path(artifact::kHistory).string(), res.history, n);
  write_diagnostics_csv(path(artifact::kDiagnostics).string(), res.history.diagnostics);
  write_training_csv(path(artifact::kGpModel), "gpsurrogate gp_model", res.surrogate.gp);
  halt_reason_ = res.history.halt_reason;
  return res;
}

SurrogatePosterior Pipeline::load_surrogate() const {
  require(artifact::kGpModel, "train");
  PriorArtifact pa = load_prior();
  const TrainingSet ts = read_training_csv(path(artifact::kGpModel), problem_.dim());
  GpModel gp = GpModel::fit(ts, KernelParams(pa.s2, cfg_.length_scale), cfg_.relative_jitter * pa.s2);
  return SurrogatePosterior{std::move(pa.prior), std::move(gp), 0.0};
}

DiagnosticsRecord Pipeline::diagnose() {
  const SurrogatePosterior surrogate = load_surrogate();
  require(artifact::kHistory, "train");
  const CsvTable hist = read_csv(path(artifact::kHistory).string());
  const std::size_t it_col = hist.column("iteration");
  std::size_t final_iteration = 0;
  for (std::size_t r = 0; r < hist.size(); ++r) {
    final_iteration = std::max(final_iteration,
                               static_cast<std::size_t>(hist.number(r, it_col)));
  }
  const TruePosteriorTarget target = diagnostics_target(surrogate);
  DiagnosticsRecord rec =
      evaluate_accuracy(surrogate, target, cfg_.diagnostics,
                        diagnostics_seed_for(cfg_.seed_diagnostics, final_iteration),
                        final_iteration);
  write_diagnostics_csv(path(artifact::kDiagnoseRerun).string(), {rec});
  return rec;
}

ChainSamples Pipeline::sample(const std::string& surface) {
  const PriorArtifact pa = load_prior();
  const std::size_t walkers = resolved_walkers(cfg_.sampling.walkers, problem_.dim());
  LogDensity density;
  std::uint64_t stream = 0;
  const char* out = nullptr;
  std::optional<SurrogatePosterior> surrogate;
  std::optional<TruePosteriorTarget> target;
  if (surface == "surrogate") {
    surrogate = load_surrogate();
    density = [&s = *surrogate](const ParamVector& x) { return log_surrogate_posterior(s, x); };
    stream = 1;
    out = artifact::kSurrogateSamples;
  } else if (surface == "true") {
    target = reference_target(cfg_, problem_, load_observations());
    density = [&t = *target](const ParamVector& x) { return log_true_posterior(t, x); };
    stream = 2;
    out = artifact::kTrueSamples;
  } else {
    throw ConfigError("unknown surface '" + surface + "' (expected surrogate or true)");
  }
  EnsembleState state = init_walkers(walkers, pa.prior.mean(), pa.prior.covariance(),
                                     derive_seed(cfg_.seed_sample, stream));
  ChainSamples chain = run_chain(state, density, cfg_.sampling.sweeps, cfg_.sampling.burn_in,
                                 cfg_.sampling.stretch_a);
  write_chain(path(out), chain);
  return chain;
}

void Pipeline::write_grid() {
  if (problem_.dim() != 2) throw ConfigError("the grid evaluation needs a 2-D problem");
  const SurrogatePosterior surrogate = load_surrogate();
  const TruePosteriorTarget target = reference_target(cfg_, problem_, load_observations());
  const std::size_t m = cfg_.grid_points;
  std::array<std::vector<double>, 2> axes;
  for (Eigen::Index d = 0; d < 2; ++d) {
    const double c = surrogate.prior.mean()[d];
    const double h = cfg_.grid_half_width_sds * std::sqrt(surrogate.prior.covariance()(d, d));
    for (std::size_t k = 0; k < m; ++k) {
      axes[static_cast<std::size_t>(d)].push_back(
          c - h + 2.0 * h * static_cast<double>(k) / static_cast<double>(m - 1));
    }
  }
  CsvWriter csv("gpsurrogate grid", {"theta_0", "theta_1", "log_true_posterior",
                                     "log_surrogate_posterior", "log_likelihood"});
  ParamVector x(2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x << axes[0][i], axes[1][j];
      const double ll = log_likelihood(target, x);
      csv.add_row({format_double(x[0]), format_double(x[1]),
                   format_double(ll + target.prior.log_density(x)),
                   format_double(log_surrogate_posterior(surrogate, x)), format_double(ll)});
    }
  }
  csv.save(path(artifact::kGrid).string());
}

void Pipeline::run() {
  gen_data();
  build_prior();
  train();
  if (log_) *log_ << "sampling surrogate and true posteriors\n";
  sample("surrogate");
  sample("true");
  if (problem_.dim() == 2) write_grid();
}

void write_manifest(const RunConfig& cfg, const fs::path& dir, const std::string& command,
                    const std::string& status, const std::string& error, int exit_code) {
  pt::ptree t = to_ptree(cfg);
  try {
    const Problem p = load_problem(cfg);
    const std::size_t n = p.dim();
    t.put("seeds.data", std::to_string(p.data_seed));
    t.put("resolved.network", p.definition.name);
    t.put("resolved.dim", std::to_string(n));
    std::string ids;
    for (const auto& e : p.experiments) ids += (ids.empty() ? "" : " ") + std::to_string(e.id);
    t.put("resolved.experiments", ids);
    t.put("resolved.sigma", format_double(p.sigma));
    t.put("resolved.noise_var", format_double(p.noise_var));
    t.put("resolved.prior_chain_walkers", std::to_string(resolved_walkers(cfg.prior_chain.walkers, n)));
    t.put("resolved.search_walkers", std::to_string(resolved_walkers(cfg.search.walker_count, n)));
    t.put("resolved.diagnostics_walkers",
          std::to_string(resolved_walkers(cfg.diagnostics.walker_count, n)));
    t.put("resolved.sample_walkers", std::to_string(resolved_walkers(cfg.sampling.walkers, n)));
  } catch (const std::exception&) {
    // the status section carries the error
  }
  pt::ptree prior;
  if (fs::exists(dir / artifact::kPrior)) {
    try {
      pt::read_ini((dir / artifact::kPrior).string(), prior);
      const std::string s2 = prior.get<std::string>("kernel.s2");
      t.put("resolved.s2", s2);
      t.put("resolved.s2_source", prior.get<std::string>("kernel.s2_source"));
      t.put("resolved.jitter", format_double(cfg.relative_jitter * parse_double(s2)));
    } catch (const std::exception&) {
    }
  }
  t.put("status.command", command);
  t.put("status.status", status);
  t.put("status.exit_code", std::to_string(exit_code));
  if (!error.empty()) {
    std::string one_line = error;
    std::replace(one_line.begin(), one_line.end(), '\n', ' ');
    t.put("status.error", one_line);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / artifact::kManifest);
  if (!f) throw IoError("cannot write " + (dir / artifact::kManifest).string());
  pt::write_ini(f, t);
}

fs::path default_run_dir(const RunConfig& cfg) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream name;
  name << cfg.name << '-' << config_hash(cfg) << '-' << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return fs::path("runs") / name.str();
}

}  // namespace gpsur
