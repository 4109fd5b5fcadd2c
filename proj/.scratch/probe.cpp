// Scratch calibration probe; not part of the repo build.
#include <cstdio>
#include <cmath>

#include "ieobs/ieobs.hpp"

using namespace ieobs;

int main()
{
  ExperimentConfig cfg = load_config("configs/ie_observer.json");
  cfg.run.steps = 6000;

  const ObserverDims dims = dims_of(cfg.plant);
  std::printf("h = %d\n", dims.h());

  // --- regression identity residuals over 500 steps (true psi) ---
  {
    ObserverState st = make_observer(dims, cfg.observer);
    const ParameterVector truth =
      parameterize(cfg.plant.A_blocks, cfg.plant.B, cfg.plant.x0, cfg.observer.F_blocks, dims);
    Vector x = cfg.plant.x0;
    double worst_y = 0, worst_x = 0, worst_Y = 0, worst_rho = 0;
    for (long t = 0; t < 500; ++t) {
      const Vector u = eval_input(cfg.input, t);
      auto [x_next, y] = plant_step(x, u, cfg.plant);
      const Matrix w = compute_w(st);
      worst_y = std::max(worst_y, (y - w * truth.psi).norm() / (1.0 + y.norm()));
      const Vector x_pred = st.M * truth.p + st.F_power.current() * cfg.plant.x0;
      worst_x = std::max(worst_x, (x - x_pred).norm() / (1.0 + x.norm()));
      regressor_chain_step(st, w, y);
      worst_Y = std::max(
        worst_Y,
        (st.y_chain - st.w_chain * truth.psi).norm() / (1.0 + st.y_chain.norm()));
      second_filter_step(st, st.w_chain, st.y_chain);
      worst_rho =
        std::max(worst_rho, (st.rho - st.S * truth.psi).norm() / (1.0 + st.rho.norm()));
      filter_M_step(st, build_Z(y, u, dims.n()));
      st.F_power.advance();
      ++st.t;
      x = x_next;
    }
    std::printf("identity residuals: y %.3g  x %.3g  Y %.3g  rho %.3g\n",
      worst_y, worst_x, worst_Y, worst_rho);
  }

  // --- full run with current zeta placeholder ---
  ExperimentResult res = run_experiment(cfg);
  std::printf("\ngram_min_eig by t:\n");
  for (long t = 0; t <= 20; ++t) {
    std::printf("  t=%2ld  %.17g\n", t, res.trace[t].gram_min_eig);
  }
  auto zs = suggest_zeta(res.trace, dims.h());
  std::printf("suggested zeta: %.17g\n", zs ? *zs : -1.0);
  std::printf("sie_step: %ld (placeholder zeta %.3g)\n",
    res.summary.sie_step ? *res.summary.sie_step : -1L, cfg.observer.zeta);
  std::printf("initial psi_err %.6g  x_err %.6g\n",
    res.summary.initial_psi_err, res.summary.initial_x_err);
  std::printf("monotone: %d\n", res.summary.monotone_ok ? 1 : 0);

  std::printf("\npsi_err / x_err checkpoints:\n");
  for (long t : {12L, 25L, 50L, 100L, 200L, 500L, 1000L, 2000L, 3000L, 4000L, 5000L, 5999L}) {
    if (t < (long)res.trace.size()) {
      std::printf("  t=%5ld  psi %.6g  x %.6g  gamma_sq %.6g\n", t,
        res.trace[t].psi_err_norm, res.trace[t].x_err_norm, res.trace[t].gamma_sq);
    }
  }
  std::printf("decay rate %.9g r2 %.6g points %ld\n",
    res.summary.fitted_decay_rate, res.summary.fit_r_squared, res.summary.fit_points);

  // ratio of consecutive errors late in the run
  std::printf("\nlate per-step ratios:");
  for (long t : {1000L, 2000L, 3000L, 4000L, 5000L}) {
    if (t + 1 < (long)res.trace.size() && res.trace[t].psi_err_norm > 0) {
      std::printf(" %.8f", res.trace[t + 1].psi_err_norm / res.trace[t].psi_err_norm);
    }
  }
  std::printf("\n");
  return 0;
}
