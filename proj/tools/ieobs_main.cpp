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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ieobs/ieobs.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct OutputFlags
{
  std::string csv_path;
  std::string plot_path;
  bool log_scale = false;
  bool full_dump = false;
};

void add_output_flags(CLI::App * cmd, OutputFlags * flags)
{
  cmd->add_option("--csv", flags->csv_path, "Write the trace as CSV to this path");
  cmd->add_option("--plot", flags->plot_path, "Write an SVG line plot to this path");
  cmd->add_flag("--log-scale", flags->log_scale, "Use a log-scale y axis in plots");
  cmd->add_flag("--full-dump", flags->full_dump, "Include p_hat and x_hat columns in CSV output");
}

void apply_output_flags(const OutputFlags & flags, ieobs::ExperimentConfig * cfg)
{
  if (!flags.csv_path.empty()) {cfg->run.csv_path = flags.csv_path;}
  if (!flags.plot_path.empty()) {cfg->run.plot_path = flags.plot_path;}
  if (flags.log_scale) {cfg->run.log_scale = true;}
  if (flags.full_dump) {cfg->run.full_dump = true;}
}

void print_summary(const ieobs::ExperimentConfig & cfg, const ieobs::RunSummary & s)
{
  std::printf("name:            %s\n", cfg.name.c_str());
  std::printf("steps:           %ld\n", s.steps);
  if (s.sie_step) {
    std::printf("sie_step:        %ld\n", *s.sie_step);
  } else {
    std::printf("sie_step:        not reached\n");
  }
  std::printf("initial psi_err: %.9g\n", s.initial_psi_err);
  std::printf("final psi_err:   %.9g\n", s.final_psi_err);
  std::printf("initial x_err:   %.9g\n", s.initial_x_err);
  std::printf("final x_err:     %.9g\n", s.final_x_err);
  std::printf(
    "decay rate:      %.9g (R^2 %.4g over %ld points)\n", s.fitted_decay_rate, s.fit_r_squared,
    s.fit_points);
  std::printf("monotone:        %s\n", s.monotone_ok ? "yes" : "no");
}

int run_command(const std::string & config_path, const OutputFlags & flags, long steps_override)
{
  ieobs::ExperimentConfig cfg = ieobs::load_config(config_path);
  apply_output_flags(flags, &cfg);
  if (steps_override > 0) {cfg.run.steps = steps_override;}

  const ieobs::ExperimentResult result = ieobs::run_experiment(cfg);
  print_summary(cfg, result.summary);
  if (!cfg.run.csv_path.empty()) {
    ieobs::write_csv(result.trace, cfg.run.csv_path, cfg.run.full_dump);
    std::printf("csv:             %s\n", cfg.run.csv_path.c_str());
  }
  if (!cfg.run.plot_path.empty()) {
    ieobs::emit_plot(
      result.trace, ieobs::TraceQuantity::kPsiErr, cfg.run.plot_path, cfg.run.log_scale,
      result.summary.sie_step);
    std::printf("plot:            %s\n", cfg.run.plot_path.c_str());
  }
  return kExitOk;
}

int compare_command(const std::vector<std::string> & config_paths, const OutputFlags & flags)
{
  std::vector<ieobs::ExperimentConfig> configs;
  configs.reserve(config_paths.size());
  for (const std::string & path : config_paths) {
    configs.push_back(ieobs::load_config(path));
  }
  const ieobs::ComparisonResult result = ieobs::compare_runs(configs);
  std::fputs(ieobs::comparison_table(result).c_str(), stdout);

  if (!flags.csv_path.empty()) {
    const std::filesystem::path base(flags.csv_path);
    for (size_t i = 0; i < result.runs.size(); ++i) {
      std::filesystem::path per_run = base;
      per_run.replace_filename(
        base.stem().string() + "-" + std::to_string(i) + "-" + configs[i].name +
        base.extension().string());
      ieobs::write_csv(result.runs[i].trace, per_run.string(), flags.full_dump);
      std::printf("csv[%zu]: %s\n", i, per_run.c_str());
    }
  }
  if (!flags.plot_path.empty()) {
    std::vector<ieobs::PlotSeries> series;
    series.reserve(result.runs.size());
    for (size_t i = 0; i < result.runs.size(); ++i) {
      series.push_back(
        ieobs::make_series(
          result.runs[i].trace, ieobs::TraceQuantity::kPsiErr, configs[i].name));
    }
    ieobs::PlotOptions options;
    options.title = "psi_err comparison";
    options.y_label = "psi_err";
    options.log_y = flags.log_scale;
    if (result.runs.front().summary.sie_step) {
      options.marker_x = static_cast<double>(*result.runs.front().summary.sie_step);
    }
    const std::string svg = ieobs::render_line_plot_svg(series, options);
    std::ofstream file(flags.plot_path, std::ios::binary);
    if (!file) {
      throw std::runtime_error("compare: cannot open '" + flags.plot_path + "' for writing");
    }
    file << svg;
    std::printf("plot: %s\n", flags.plot_path.c_str());
  }
  return kExitOk;
}

int calibrate_command(const std::string & config_path, long steps_override)
{
  ieobs::ExperimentConfig cfg = ieobs::load_config(config_path);
  const int h = ieobs::dims_of(cfg.plant).h();
  cfg.run.steps = steps_override > 0 ? steps_override : std::min<long>(cfg.run.steps, 10L * h);

  const ieobs::ExperimentResult result = ieobs::run_experiment(cfg);
  std::printf("t,gram_min_eig\n");
  for (const ieobs::TraceRecord & rec : result.trace) {
    std::printf("%ld,%.17g\n", rec.t, rec.gram_min_eig);
  }
  const std::optional<double> zeta = ieobs::suggest_zeta(result.trace, h);
  if (zeta) {
    std::printf(
      "# suggested zeta: %.17g (between min-eig at t=%d and t=%d; switch arms at t >= %d)\n",
      *zeta, h - 1, h, h);
  } else {
    std::printf("# no usable zeta: the Gram floor never became positive by t=%d\n", h);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Adaptive observer simulator: joint online estimation of parameters,"
    " initial state, and current state for canonical-form LTI systems"};
  app.require_subcommand(1);

  std::string run_config;
  OutputFlags run_flags;
  long run_steps = 0;
  CLI::App * run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", run_config, "Path to a config file")->required();
  add_output_flags(run, &run_flags);
  run->add_option("--steps", run_steps, "Override the configured step count");

  std::vector<std::string> compare_configs;
  OutputFlags compare_flags;
  CLI::App * compare = app.add_subcommand("compare", "Run several configs on a shared plant");
  compare->add_option("configs", compare_configs, "Config files (same plant)")
  ->required()->expected(2, -1);
  add_output_flags(compare, &compare_flags);

  std::string calibrate_config;
  long calibrate_steps = 0;
  CLI::App * calibrate =
    app.add_subcommand("calibrate-zeta", "Report the Gram floor per step to help pick zeta");
  calibrate->add_option("config", calibrate_config, "Path to a config file")->required();
  calibrate->add_option("--steps", calibrate_steps, "Steps to examine");

  CLI::App * version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (version->parsed()) {
      std::printf("ieobs %s\n", ieobs::version_string());
      return kExitOk;
    }
    if (run->parsed()) {
      return run_command(run_config, run_flags, run_steps);
    }
    if (compare->parsed()) {
      return compare_command(compare_configs, compare_flags);
    }
    if (calibrate->parsed()) {
      return calibrate_command(calibrate_config, calibrate_steps);
    }
  } catch (const ieobs::NumericError & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  } catch (const ieobs::ConfigError & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
