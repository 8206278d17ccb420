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

#include "gpsur/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpsur/csv.hpp"
#include "gpsur/errors.hpp"

namespace gpsur {

namespace {

AbsErrorResult summarize_differences(std::vector<double>& diffs, std::size_t excluded) {
  AbsErrorResult out;
  out.excluded = excluded;
  out.used = diffs.size();
  if (diffs.empty()) {
    out.mean_abs = out.offset_free = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double sum = 0.0;
  for (double d : diffs) sum += std::abs(d);
  out.mean_abs = sum / static_cast<double>(diffs.size());

  std::vector<double> sorted = diffs;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  double centered = 0.0;
  for (double d : diffs) centered += std::abs(d - median);
  out.offset_free = centered / static_cast<double>(diffs.size());
  return out;
}

// Differences surrogate - true for paired log-density values.
AbsErrorResult abs_error_from_values(const Eigen::VectorXd& log_true,
                                     const Eigen::VectorXd& log_surrogate) {
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(log_true.size()));
  std::size_t excluded = 0;
  for (Eigen::Index i = 0; i < log_true.size(); ++i) {
    if (!std::isfinite(log_true[i]) || !std::isfinite(log_surrogate[i])) {
      ++excluded;
      continue;
    }
    diffs.push_back(log_surrogate[i] - log_true[i]);
  }
  return summarize_differences(diffs, excluded);
}

}  // namespace

AbsErrorResult abs_error(const PointMatrix& samples, const LogDensity& log_true,
                         const LogDensity& log_surrogate) {
  if (samples.rows() == 0) throw PreconditionError("abs_error: no samples");
  Eigen::VectorXd lt(samples.rows()), ls(samples.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const ParamVector x = samples.row(i).transpose();
    lt[i] = log_true(x);
    ls[i] = log_surrogate(x);
  }
  return abs_error_from_values(lt, ls);
}

RMeasure r_measure(std::span<const double> weights) {
  if (weights.empty()) throw PreconditionError("r_measure: no weights");
  RMeasure out;
  double sum = 0.0, sum_sq = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      ++out.excluded;
      continue;
    }
    sum += w;
    sum_sq += w * w;
    ++out.used;
  }
  if (out.used == 0 || !(sum > 0.0)) throw NumericalError("r_measure: every weight was excluded");
  const auto n = static_cast<double>(out.used);
  // n sum(w^2) >= sum(w)^2 holds exactly; clamp the round-off below 1.
  out.r = std::max(1.0, n * sum_sq / (sum * sum));
  out.mean_weight = sum / n;
  return out;
}

RMeasure r_measure_from_log(std::span<const double> log_weights) {
  if (log_weights.empty()) throw PreconditionError("r_measure: no weights");
  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isfinite(lw)) top = std::max(top, lw);
  }
  if (!std::isfinite(top)) throw NumericalError("r_measure: every weight was excluded");
  std::vector<double> shifted;
  shifted.reserve(log_weights.size());
  for (double lw : log_weights) {
    shifted.push_back(std::isfinite(lw) ? std::exp(lw - top)
                                        : std::numeric_limits<double>::quiet_NaN());
  }
  RMeasure out = r_measure(shifted);
  out.mean_weight *= std::exp(top);
  return out;
}

DiagnosticsRecord evaluate_accuracy(const LogDensity& log_surrogate, const LogDensity& log_true,
                                    const GaussianPrior& init, const DiagnosticsConfig& cfg,
                                    std::uint64_t seed, std::size_t iteration) {
  const std::size_t n = init.dim();
  const std::size_t walkers = cfg.walker_count ? cfg.walker_count : 2 * n;

  EnsembleState sur_state =
      init_walkers(walkers, init.mean(), init.covariance(), derive_seed(seed, 1));
  const ChainSamples sur_chain =
      run_chain(sur_state, log_surrogate, cfg.sweeps, cfg.burn_in, cfg.stretch_a);
  EnsembleState true_state =
      init_walkers(walkers, init.mean(), init.covariance(), derive_seed(seed, 2));
  const ChainSamples true_chain =
      run_chain(true_state, log_true, cfg.sweeps, cfg.burn_in, cfg.stretch_a);

  // The chains cache their own target at every sample; only the other density
  // needs evaluating.
  Eigen::VectorXd true_at_sur(sur_chain.samples.rows());
  for (Eigen::Index i = 0; i < sur_chain.samples.rows(); ++i) {
    true_at_sur[i] = log_true(sur_chain.samples.row(i).transpose());
  }
  Eigen::VectorXd sur_at_true(true_chain.samples.rows());
  for (Eigen::Index i = 0; i < true_chain.samples.rows(); ++i) {
    sur_at_true[i] = log_surrogate(true_chain.samples.row(i).transpose());
  }

  const AbsErrorResult approx = abs_error_from_values(true_at_sur, sur_chain.log_target);
  const AbsErrorResult truth = abs_error_from_values(true_chain.log_target, sur_at_true);

  std::vector<double> log_w(static_cast<std::size_t>(sur_chain.samples.rows()));
  for (Eigen::Index i = 0; i < sur_chain.samples.rows(); ++i) {
    const double ls = sur_chain.log_target[i];
    log_w[static_cast<std::size_t>(i)] = std::isfinite(ls) ? true_at_sur[i] - ls
                                                           : std::numeric_limits<double>::quiet_NaN();
  }
  const RMeasure r = r_measure_from_log(log_w);

  DiagnosticsRecord rec;
  rec.iteration = iteration;
  rec.e_approx = approx.mean_abs;
  rec.e_true = truth.mean_abs;
  rec.e_star_approx = approx.offset_free;
  rec.e_star_true = truth.offset_free;
  rec.r_measure = r.r;
  rec.mean_weight = r.mean_weight;
  rec.n_samples_each = sur_chain.size();
  rec.excluded_approx = approx.excluded;
  rec.excluded_true = truth.excluded;
  rec.excluded_weights = r.excluded;
  if (!sur_chain.warning.empty()) rec.warning += "surrogate chain: " + sur_chain.warning;
  if (!true_chain.warning.empty()) {
    if (!rec.warning.empty()) rec.warning += "; ";
    rec.warning += "true chain: " + true_chain.warning;
  }
  return rec;
}

DiagnosticsRecord evaluate_accuracy(const SurrogatePosterior& surrogate,
                                    const TruePosteriorTarget& target,
                                    const DiagnosticsConfig& cfg, std::uint64_t seed,
                                    std::size_t iteration) {
  LogDensity ls = [&surrogate](const ParamVector& x) { return log_surrogate_posterior(surrogate, x); };
  LogDensity lt = [&target](const ParamVector& x) { return log_true_posterior(target, x); };
  return evaluate_accuracy(ls, lt, surrogate.prior, cfg, seed, iteration);
}

namespace {

const std::vector<std::string> kDiagnosticsHeader = {
    "iteration",      "e_approx",        "e_true",          "e_star_approx",
    "e_star_true",    "r_measure",       "mean_weight",     "n_samples_each",
    "excluded_approx", "excluded_true",  "excluded_weights", "warning"};

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  CsvWriter csv("gpsurrogate diagnostics", kDiagnosticsHeader);
  for (const auto& r : records) {
    csv.add_row({std::to_string(r.iteration), format_double(r.e_approx), format_double(r.e_true),
                 format_double(r.e_star_approx), format_double(r.e_star_true),
                 format_double(r.r_measure), format_double(r.mean_weight),
                 std::to_string(r.n_samples_each), std::to_string(r.excluded_approx),
                 std::to_string(r.excluded_true), std::to_string(r.excluded_weights),
                 sanitize(r.warning)});
  }
  csv.save(path);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  std::vector<DiagnosticsRecord> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    DiagnosticsRecord r;
    r.iteration = static_cast<std::size_t>(t.number(i, t.column("iteration")));
    r.e_approx = t.number(i, t.column("e_approx"));
    r.e_true = t.number(i, t.column("e_true"));
    r.e_star_approx = t.number(i, t.column("e_star_approx"));
    r.e_star_true = t.number(i, t.column("e_star_true"));
    r.r_measure = t.number(i, t.column("r_measure"));
    r.mean_weight = t.number(i, t.column("mean_weight"));
    r.n_samples_each = static_cast<std::size_t>(t.number(i, t.column("n_samples_each")));
    r.excluded_approx = static_cast<std::size_t>(t.number(i, t.column("excluded_approx")));
    r.excluded_true = static_cast<std::size_t>(t.number(i, t.column("excluded_true")));
    r.excluded_weights = static_cast<std::size_t>(t.number(i, t.column("excluded_weights")));
    r.warning = t.rows[i][t.column("warning")];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gpsur
