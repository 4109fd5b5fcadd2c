// Copyright 2026 The ieobs Authors
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

#ifndef IEOBS_EXPERIMENT_HPP_
#define IEOBS_EXPERIMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieobs/config.hpp"
#include "ieobs/observer.hpp"
#include "ieobs/plant.hpp"
#include "ieobs/trace.hpp"

namespace ieobs
{

/// NaN or overflow inside a run; step is where it was first seen.
struct NumericError : std::runtime_error
{
  NumericError(const std::string & what, long step_index)
  : std::runtime_error(what + " at step " + std::to_string(step_index)), step(step_index)
  {
  }
  long step;
};

struct ExperimentResult
{
  std::vector<TraceRecord> trace;
  RunSummary summary;
};

/// Simulates the plant and the observer in lockstep. Per step: evaluate the
/// input, read the plant output, feed both to the observer, record the
/// truth-aware error norms, then advance the plant. Fully deterministic.
inline ExperimentResult run_experiment(const ExperimentConfig & cfg)
{
  validate(cfg.plant);
  const ObserverDims dims = dims_of(cfg.plant);
  if (cfg.input.channel_count() != dims.m) {
    throw ConfigError("input.channels: channel count must match plant.m");
  }
  if (cfg.run.steps < 1) {
    throw ConfigError("run.steps: must be at least 1");
  }
  ObserverState state = make_observer(dims, cfg.observer);
  const ParameterVector truth =
    parameterize(cfg.plant.A_blocks, cfg.plant.B, cfg.plant.x0, cfg.observer.F_blocks, dims);

  ExperimentResult result;
  result.trace.reserve(static_cast<size_t>(cfg.run.steps));
  RunSummary & summary = result.summary;
  summary.steps = cfg.run.steps;
  summary.initial_psi_err = (truth.psi - state.psi_hat).norm();
  summary.initial_x_err = (cfg.plant.x0 - state.psi_hat.tail(dims.n())).norm();

  Vector x = cfg.plant.x0;
  double prev_err_sq = summary.initial_psi_err * summary.initial_psi_err;
  for (long t = 0; t < cfg.run.steps; ++t) {
    const Vector u = eval_input(cfg.input, t);
    auto [x_next, y] = plant_step(x, u, cfg.plant);
    const StepResult sr = observer_step(state, y, u);

    TraceRecord rec;
    rec.t = t;
    rec.y = y;
    rec.u = u;
    rec.psi_err_norm = (truth.psi - state.psi_hat).norm();
    rec.x_err_norm = (x - sr.x_hat).norm();
    rec.gamma_sq = sr.gamma_sq;
    rec.gram_min_eig = sr.gram_min_eig;
    rec.eta = sr.eta;
    rec.p_hat = sr.p_hat;
    rec.x_hat = sr.x_hat;

    if (!state.psi_hat.allFinite() || !std::isfinite(rec.psi_err_norm) ||
      !std::isfinite(rec.x_err_norm) || !x_next.allFinite())
    {
      throw NumericError("numeric failure: state left the finite range", t);
    }
    const double err_sq = rec.psi_err_norm * rec.psi_err_norm;
    if (!(err_sq <= prev_err_sq + 1e-12)) {
      summary.monotone_ok = false;
    }
    prev_err_sq = err_sq;
    result.trace.push_back(std::move(rec));
    x = std::move(x_next);
  }

  summary.sie_step = state.sie_step;
  summary.final_psi_err = result.trace.back().psi_err_norm;
  summary.final_x_err = result.trace.back().x_err_norm;
  if (summary.sie_step) {
    const DecayFit fit = fit_log_decay(
      result.trace, *summary.sie_step, 1e-12, std::numeric_limits<double>::infinity());
    summary.fitted_decay_rate = fit.rate;
    summary.fit_r_squared = fit.r_squared;
    summary.fit_points = fit.points;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Comparisons
// ---------------------------------------------------------------------------

struct ComparisonRow
{
  std::string name;
  std::optional<long> sie_step;
  double final_psi_err = 0.0;
  double final_x_err = 0.0;
  double decay_rate = 1.0;
};

struct ComparisonResult
{
  std::vector<ExperimentResult> runs;
  std::vector<ComparisonRow> rows;
};

namespace detail
{

inline bool same_plant(const PlantDefinition & a, const PlantDefinition & b)
{
  if (a.q != b.q || a.r != b.r || a.m != b.m) {return false;}
  for (int i = 0; i < a.r; ++i) {
    if (a.A_blocks[static_cast<size_t>(i)] != b.A_blocks[static_cast<size_t>(i)]) {return false;}
  }
  return a.B == b.B && a.x0 == b.x0;
}

}  // namespace detail

/// Runs each config against the shared plant and collects the headline
/// numbers side by side. Traces stay available for overlay plotting.
inline ComparisonResult compare_runs(const std::vector<ExperimentConfig> & configs)
{
  if (configs.size() < 2) {
    throw ConfigError("compare: need at least 2 configs");
  }
  for (size_t i = 1; i < configs.size(); ++i) {
    if (!detail::same_plant(configs.front().plant, configs[i].plant)) {
      throw ConfigError("compare: plant mismatch across configs ('" + configs[i].name + "')");
    }
  }
  ComparisonResult out;
  for (const ExperimentConfig & cfg : configs) {
    out.runs.push_back(run_experiment(cfg));
    const RunSummary & s = out.runs.back().summary;
    out.rows.push_back(
      ComparisonRow{cfg.name, s.sie_step, s.final_psi_err, s.final_x_err, s.fitted_decay_rate});
  }
  return out;
}

inline std::string comparison_table(const ComparisonResult & result)
{
  size_t name_width = 4;
  for (const ComparisonRow & row : result.rows) {
    name_width = std::max(name_width, row.name.size());
  }
  char buf[256];
  std::snprintf(
    buf, sizeof(buf), "%-*s  %9s  %13s  %13s  %10s\n", static_cast<int>(name_width), "name",
    "sie_step", "final_psi_err", "final_x_err", "decay_rate");
  std::string out = buf;
  for (const ComparisonRow & row : result.rows) {
    const std::string sie = row.sie_step ? std::to_string(*row.sie_step) : "-";
    std::snprintf(
      buf, sizeof(buf), "%-*s  %9s  %13.6g  %13.6g  %10.8g\n", static_cast<int>(name_width),
      row.name.c_str(), sie.c_str(), row.final_psi_err, row.final_x_err, row.decay_rate);
    out += buf;
  }
  return out;
}

/// Midpoint (in log space) between the last pre-switch Gram floor and the
/// floor at the earliest admissible switch step h. Nullopt when the run
/// never produces a usable floor.
inline std::optional<double> suggest_zeta(const std::vector<TraceRecord> & trace, int h)
{
  if (static_cast<long>(trace.size()) <= h || h < 1) {
    return std::nullopt;
  }
  const double before = trace[static_cast<size_t>(h - 1)].gram_min_eig;
  const double at = trace[static_cast<size_t>(h)].gram_min_eig;
  if (!(at > 0.0)) {
    return std::nullopt;
  }
  if (before > 0.0 && before < at) {
    return std::sqrt(before * at);
  }
  return at / 2.0;
}

}  // namespace ieobs

#endif  // IEOBS_EXPERIMENT_HPP_
