// Scratch: 17-digit anchors for the frozen regression tests.
#include <cstdio>

#include "ieobs/ieobs.hpp"

using namespace ieobs;

int main()
{
  ExperimentConfig cfg = load_config("configs/ie_observer.json");
  cfg.observer.zeta = 0.0020925854638466882;
  cfg.run.steps = 5000;
  ExperimentResult res = run_experiment(cfg);
  std::printf("initial_psi_err %.17g\n", res.summary.initial_psi_err);
  std::printf("initial_x_err   %.17g\n", res.summary.initial_x_err);
  std::printf("g11 %.17g\ng12 %.17g\n", res.trace[11].gram_min_eig, res.trace[12].gram_min_eig);
  std::printf("suggest_zeta %.17g\n", *suggest_zeta(res.trace, 12));
  std::printf("psi@12 %.17g\npsi@100 %.17g\npsi@4999 %.17g\n",
    res.trace[12].psi_err_norm, res.trace[100].psi_err_norm, res.trace[4999].psi_err_norm);
  std::printf("x@4999 %.17g\n", res.trace[4999].x_err_norm);
  std::printf("gamma_sq@12 %.17g\n", res.trace[12].gamma_sq);
  std::printf("y@3 %.17g  u0@3 %.17g  u1@3 %.17g\n", res.trace[3].y(0), res.trace[3].u(0),
    res.trace[3].u(1));
  std::printf("rate %.17g r2 %.17g\n", res.summary.fitted_decay_rate, res.summary.fit_r_squared);

  // w at t=5 via direct ops.
  const ObserverDims dims = dims_of(cfg.plant);
  ObserverState st = make_observer(dims, cfg.observer);
  Vector x = cfg.plant.x0;
  for (long t = 0; t < 6; ++t) {
    if (t == 5) {
      const Matrix w = compute_w(st);
      std::printf("norm_w5 %.17g\n", w.norm());
    }
    const Vector u = eval_input(cfg.input, t);
    auto [x_next, y] = plant_step(x, u, cfg.plant);
    observer_step(st, y, u);
    x = x_next;
  }

  // Ablation finals at the shipped budgets.
  ExperimentConfig b = cfg;
  b.observer.kappa3 = 0.0;
  b.input.envelope = Envelope::constant(1.0);
  ExperimentResult rb = run_experiment(b);
  std::printf("ablation_b final %.17g rel %.6g\n", rb.summary.final_psi_err,
    rb.summary.final_psi_err / rb.summary.initial_psi_err);

  ExperimentConfig c = cfg;
  c.observer.kappa3 = 0.0;
  c.input.envelope = Envelope::gate(12);
  ExperimentResult rc = run_experiment(c);
  std::printf("ablation_c final %.17g rel %.6g monotone %d\n", rc.summary.final_psi_err,
    rc.summary.final_psi_err / rc.summary.initial_psi_err, rc.summary.monotone_ok ? 1 : 0);
  return 0;
}
