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

// Acceptance gate for the estimator. Each numbered criterion prints one
// PASS/FAIL line with the measured values; the process exits nonzero if
// any criterion fails. Criteria 4 and 5 state convergence targets the
// shipped constants do not reach; they are reported with the measured
// errors rather than relaxed (see README, "Estimation behavior").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ieobs/config.hpp"
#include "ieobs/experiment.hpp"
#include "ieobs/observer.hpp"
#include "ieobs/plant.hpp"
#include "ieobs/trace.hpp"

namespace {

using namespace ieobs;
using testing::config_path;
using testing::demo_config;
using testing::demo_truth;
using testing::scalar_block;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct GammaAudit {
  double max_seen = -1.0;
  long steps = 0;
  int runs = 0;
} g_gamma;

void audit_trace(const std::vector<TraceRecord>& trace) {
  for (const TraceRecord& rec : trace) {
    g_gamma.max_seen = std::max(g_gamma.max_seen, rec.gamma_sq);
  }
  g_gamma.steps += static_cast<long>(trace.size());
  ++g_gamma.runs;
}

void audit_gamma(double gamma_sq) {
  g_gamma.max_seen = std::max(g_gamma.max_seen, gamma_sq);
  ++g_gamma.steps;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// 1. All four regression identities on the reproduction system, 500 steps.
Outcome criterion_identities() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = demo_config(500);
  const ObserverDims dims = dims_of(cfg.plant);
  const ParameterVector truth = demo_truth();
  ObserverState st = make_observer(dims, cfg.observer);

  double worst_y = 0.0, worst_x = 0.0, worst_Y = 0.0, worst_rho = 0.0;
  Vector x = cfg.plant.x0;
  for (long t = 0; t < 500; ++t) {
    const Vector u = eval_input(cfg.input, t);
    auto [x_next, y] = plant_step(x, u, cfg.plant);

    const Matrix w = compute_w(st);
    worst_y = std::max(worst_y,
                       (y - w * truth.psi).norm() / (1.0 + y.norm()));
    const Vector x_model =
        st.M * truth.p + st.F_power.current() * cfg.plant.x0;
    worst_x = std::max(worst_x, (x - x_model).norm() / (1.0 + x.norm()));

    regressor_chain_step(st, w, y);
    second_filter_step(st, st.w_chain, st.y_chain);
    worst_Y = std::max(worst_Y, (st.y_chain - st.w_chain * truth.psi).norm() /
                                    (1.0 + st.y_chain.norm()));
    worst_rho = std::max(worst_rho, (st.rho - st.S * truth.psi).norm() /
                                        (1.0 + st.rho.norm()));

    if (st.eta == 0 && st.t >= dims.h() &&
        min_eig_symmetric(st.gram) >= cfg.observer.zeta) {
      st.sie_step = st.t;
      st.S_frozen = st.S;
      st.rho_frozen = st.rho;
      st.eta = 1;
    }
    audit_gamma(update_psi(st));

    filter_M_step(st, build_Z(y, u, dims.n()));
    st.F_power.advance();
    ++st.t;
    x = x_next;
  }
  ++g_gamma.runs;

  const double elapsed = seconds_since(start);
  const double worst =
      std::max(std::max(worst_y, worst_x), std::max(worst_Y, worst_rho));
  Outcome out;
  out.pass = worst <= 1e-9 && elapsed < 5.0;
  out.detail = fmt(
      "residual ratios y %.3g, x %.3g, Y %.3g, rho %.3g (tol 1e-9); %.2f s "
      "(need < 5 s)",
      worst_y, worst_x, worst_Y, worst_rho, elapsed);
  return out;
}

long monotone_violations(const ExperimentResult& result) {
  long bad = 0;
  double prev = result.summary.initial_psi_err;
  for (const TraceRecord& rec : result.trace) {
    const double err = rec.psi_err_norm;
    if (err * err > prev * prev + 1e-12) ++bad;
    prev = err;
  }
  return bad;
}

// 2. Squared error never grows, on the reproduction and on randomized
// observer configurations.
Outcome criterion_monotone() {
  long violations = 0;
  long steps = 0;
  int runs = 0;

  ExperimentResult repro = run_experiment(demo_config(500));
  audit_trace(repro.trace);
  violations += monotone_violations(repro);
  steps += repro.summary.steps;
  ++runs;

  std::mt19937 rng(20260816);
  std::uniform_real_distribution<double> f_coef(-0.5, 0.5);
  std::uniform_real_distribution<double> gain(0.1, 2.0);
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.95);
  std::uniform_real_distribution<double> sigma_dist(-0.99, 0.99);

  for (int trial = 0; trial < 20; ++trial) {
    ExperimentConfig cfg = demo_config(300);
    cfg.name = "random";
    ObserverConfig& obs = cfg.observer;
    for (;;) {
      obs.F_blocks = {scalar_block(f_coef(rng)), scalar_block(f_coef(rng)),
                      scalar_block(f_coef(rng))};
      const Matrix f = assemble_canonical(obs.F_blocks, 1, 3);
      if (spectral_radius_estimate(f, 64) < 0.99) break;
    }
    obs.kappa1 = gain(rng);
    obs.kappa2 = gain(rng);
    obs.kappa3 = gain(rng);
    obs.alpha = alpha_dist(rng);
    obs.sigma = sigma_dist(rng);
    std::vector<Matrix> a0 = {scalar_block(5.0), scalar_block(5.0),
                              scalar_block(5.0)};
    Vector x00(3);
    x00 << 0.9, 0.9, 0.9;
    obs.psi_hat_0 = assemble_psi(a0, Matrix::Constant(3, 2, 5.0), x00,
                                 obs.F_blocks, dims_of(cfg.plant));

    ExperimentResult result = run_experiment(cfg);
    audit_trace(result.trace);
    violations += monotone_violations(result);
    steps += result.summary.steps;
    ++runs;
  }

  Outcome out;
  out.pass = violations == 0;
  out.detail = fmt("%ld violations across %d runs / %ld steps (tol 1e-12)",
                   violations, runs, steps);
  return out;
}

// 3. The shipped zeta arms the switch exactly at the excitation horizon,
// both through the library and through the calibrate-zeta subcommand.
Outcome criterion_switch() {
  ExperimentConfig cfg = load_config(config_path("ie_observer.json"));
  const double zeta = cfg.observer.zeta;
  cfg.run.steps = 100;
  ExperimentResult result = run_experiment(cfg);
  audit_trace(result.trace);

  const bool lib_ok = result.summary.sie_step.has_value() &&
                      *result.summary.sie_step == 12;
  const double g11 = result.trace[11].gram_min_eig;
  const double g12 = result.trace[12].gram_min_eig;
  const bool crossing_ok = g11 < zeta && zeta <= g12;

  // Drive the actual subcommand and parse its floor table.
  const std::string command = std::string("\"") + IEOBS_CLI_PATH +
                              "\" calibrate-zeta \"" +
                              config_path("ie_observer.json") +
                              "\" --steps 40 2>/dev/null";
  std::map<long, double> floors;
  double suggested = -1.0;
  bool cli_ok = false;
  if (FILE* pipe = popen(command.c_str(), "r")) {
    char line[512];
    while (std::fgets(line, sizeof(line), pipe) != nullptr) {
      long t = 0;
      double v = 0.0;
      if (std::sscanf(line, "%ld,%lf", &t, &v) == 2) {
        floors[t] = v;
      } else if (std::sscanf(line, "# suggested zeta: %lf", &v) == 1) {
        suggested = v;
      }
    }
    cli_ok = pclose(pipe) == 0;
  }
  const bool cli_crossing = cli_ok && floors.count(11) && floors.count(12) &&
                            floors[11] < zeta && zeta <= floors[12] &&
                            suggested > floors[11] && suggested <= floors[12];

  Outcome out;
  out.pass = lib_ok && crossing_ok && cli_crossing;
  out.detail = fmt(
      "sie_step %ld (need 12); gram floor %.4g @ t=11 < zeta %.4g <= %.4g @ "
      "t=12; calibrate-zeta suggests %.4g (exit %s)",
      result.summary.sie_step ? *result.summary.sie_step : -1, g11, zeta, g12,
      suggested, cli_ok ? "0" : "nonzero");
  return out;
}

// 4. Convergence targets for the reproduction run.
Outcome criterion_convergence(ExperimentResult& repro_out) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load_config(config_path("ie_observer.json"));
  ExperimentResult result = run_experiment(cfg);
  const double elapsed = seconds_since(start);
  audit_trace(result.trace);

  const RunSummary& s = result.summary;
  const double rel_psi = s.final_psi_err / s.initial_psi_err;
  const double rel_x = s.final_x_err / s.initial_x_err;

  DecayFit fit;
  if (s.sie_step) {
    fit = fit_log_decay(result.trace, *s.sie_step, 1e-10 * s.initial_psi_err,
                        1e-1 * s.initial_psi_err);
  }

  Outcome out;
  out.pass = rel_psi <= 1e-6 && rel_x <= 1e-6 && fit.rate < 1.0 &&
             fit.r_squared > 0.9 && elapsed < 10.0;
  out.detail = fmt(
      "rel psi_err %.4g (need <= 1e-6); rel x_err %.4g (need <= 1e-6); decay "
      "rate %.6f (need < 1) with R^2 %.4f (need > 0.9) over %ld points; %.2f "
      "s (need < 10 s)",
      rel_psi, rel_x, fit.rate, fit.r_squared, fit.points, elapsed);
  repro_out = std::move(result);
  return out;
}

// 5. The ablation trio separates: full observer, no switch with sustained
// input, no switch with the input gated off at the horizon.
Outcome criterion_ablations(const ExperimentResult& full_run) {
  const double init = full_run.summary.initial_psi_err;
  const double rel_a = full_run.summary.final_psi_err / init;

  ExperimentResult sustained =
      run_experiment(load_config(config_path("no_switch_sustained.json")));
  audit_trace(sustained.trace);
  const double rel_b =
      sustained.summary.final_psi_err / sustained.summary.initial_psi_err;

  ExperimentResult gated =
      run_experiment(load_config(config_path("no_switch_gated.json")));
  audit_trace(gated.trace);
  const double rel_c =
      gated.summary.final_psi_err / gated.summary.initial_psi_err;

  Outcome out;
  const bool a_ok = rel_a < 1e-6;
  const bool b_ok = rel_b < 1e-3;
  const bool c_ok = rel_c > 1e-2 && gated.summary.monotone_ok;
  out.pass = a_ok && b_ok && c_ok;
  out.detail = fmt(
      "(a) full observer rel %.4g (need < 1e-6); (b) sustained rel %.4g "
      "(need < 1e-3); (c) gated rel %.4g (need > 1e-2), monotone %s",
      rel_a, rel_b, rel_c, gated.summary.monotone_ok ? "yes" : "no");
  return out;
}

// 6. The normalized correction gain stays strictly below one everywhere.
Outcome criterion_normalization() {
  Outcome out;
  out.pass = g_gamma.runs > 20 && g_gamma.max_seen >= 0.0 &&
             g_gamma.max_seen < 1.0;
  out.detail = fmt("max gamma^2 %.17g over %d runs / %ld steps (need < 1)",
                   g_gamma.max_seen, g_gamma.runs, g_gamma.steps);
  return out;
}

// 7. Starting from the true parameters, the estimate never moves.
Outcome criterion_fixed_point() {
  ExperimentConfig cfg = demo_config(200);
  cfg.observer.psi_hat_0 = demo_truth().psi;
  ExperimentResult result = run_experiment(cfg);
  audit_trace(result.trace);

  double worst = result.summary.initial_psi_err;
  for (const TraceRecord& rec : result.trace) {
    worst = std::max(worst, rec.psi_err_norm);
  }
  Outcome out;
  out.pass = worst <= 1e-12;
  out.detail = fmt("max psi_err %.3g over 200 steps (need <= 1e-12)", worst);
  return out;
}

// 8. Reruns of the shipped config serialize to identical bytes.
Outcome criterion_determinism() {
  ExperimentConfig cfg = load_config(config_path("ie_observer.json"));
  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  audit_trace(a.trace);
  audit_trace(b.trace);
  const std::string csv_a = csv_string(a.trace, true);
  const std::string csv_b = csv_string(b.trace, true);

  Outcome out;
  out.pass = csv_a == csv_b;
  out.detail = fmt("two %ld-step runs, csv %s (%zu bytes)",
                   cfg.run.steps, out.pass ? "identical" : "DIFFERS",
                   csv_a.size());
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Outcome outcome;
  };
  std::vector<Entry> entries;

  ExperimentResult repro;
  auto guard = [](int id, const char* label, auto&& fn) {
    Entry e;
    e.id = id;
    e.label = label;
    try {
      e.outcome = fn();
    } catch (const std::exception& ex) {
      e.outcome.pass = false;
      e.outcome.detail = std::string("exception: ") + ex.what();
    }
    return e;
  };

  entries.push_back(guard(1, "regression identities", criterion_identities));
  entries.push_back(guard(2, "error monotonicity", criterion_monotone));
  entries.push_back(guard(3, "switch detection", criterion_switch));
  entries.push_back(guard(4, "exponential convergence",
                          [&] { return criterion_convergence(repro); }));
  entries.push_back(guard(5, "ablation separation",
                          [&] { return criterion_ablations(repro); }));
  entries.push_back(guard(7, "fixed point", criterion_fixed_point));
  entries.push_back(guard(8, "deterministic output", criterion_determinism));
  // Evaluated last so it sees every run above.
  entries.push_back(guard(6, "normalization bound", criterion_normalization));

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.id < b.id; });

  int passed = 0;
  for (const Entry& e : entries) {
    std::printf("[%s] %d. %s: %s\n", e.outcome.pass ? "PASS" : "FAIL", e.id,
                e.label, e.outcome.detail.c_str());
    if (e.outcome.pass) ++passed;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, entries.size());
  return passed == static_cast<int>(entries.size()) ? 0 : 1;
}
