// Scratch: frozen-term spectrum + envelope variants.
#include <cstdio>
#include <cmath>

#include "ieobs/ieobs.hpp"

using namespace ieobs;

static void report(const char * tag, ExperimentConfig cfg, long steps)
{
  cfg.run.steps = steps;
  ExperimentResult res = run_experiment(cfg);
  std::printf("\n=== %s (steps %ld) ===\n", tag, steps);
  std::printf("sie_step %ld  initial psi %.6g\n",
    res.summary.sie_step ? *res.summary.sie_step : -1L, res.summary.initial_psi_err);
  const double target = 1e-6 * res.summary.initial_psi_err;
  long hit = -1;
  for (const auto & rec : res.trace) {
    if (rec.psi_err_norm < target) { hit = rec.t; break; }
  }
  std::printf("first t with psi_err < 1e-6*init: %ld\n", hit);
  long hitx = -1;
  const double targetx = 1e-6 * res.summary.initial_x_err;
  for (const auto & rec : res.trace) {
    if (rec.x_err_norm < targetx) { hitx = rec.t; break; }
  }
  std::printf("first t with x_err < 1e-6*init: %ld\n", hitx);
  for (long t : {12L, 100L, 500L, 1000L, 2000L, 3000L, 4000L, 5000L, 10000L, 20000L, 40000L}) {
    if (t < (long)res.trace.size()) {
      std::printf("  t=%6ld  psi %.6g  x %.6g\n", t, res.trace[t].psi_err_norm,
        res.trace[t].x_err_norm);
    }
  }
  std::printf("final psi %.6g x %.6g  rate %.9f r2 %.4g\n", res.summary.final_psi_err,
    res.summary.final_x_err, res.summary.fitted_decay_rate, res.summary.fit_r_squared);
}

int main()
{
  ExperimentConfig cfg = load_config("configs/ie_observer.json");
  cfg.observer.zeta = 0.0020925854638466882;
  const ObserverDims dims = dims_of(cfg.plant);

  // Frozen snapshot spectrum.
  {
    ObserverState st = make_observer(dims, cfg.observer);
    Vector x = cfg.plant.x0;
    for (long t = 0; t < 40; ++t) {
      const Vector u = eval_input(cfg.input, t);
      auto [x_next, y] = plant_step(x, u, cfg.plant);
      observer_step(st, y, u);
      x = x_next;
    }
    const Matrix sf = st.S_frozen;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sf.transpose() * sf);
    std::printf("S_frozen: fro %.6g\n", sf.norm());
    std::printf("eig(Sf^T Sf):");
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      std::printf(" %.3g", es.eigenvalues()(i));
    }
    std::printf("\n");
    const double tr = cfg.observer.kappa3 * sf.squaredNorm();
    std::printf("asymptotic factor (frozen only): 1 - %.3g\n",
      cfg.observer.kappa3 * es.eigenvalues().minCoeff() / (1.0 + tr));
  }

  report("decaying e^{-0.001 t}", cfg, 50000);

  ExperimentConfig lit = cfg;
  lit.input.envelope = Envelope::constant(std::exp(0.001));
  report("literal constant e^{0.001}", lit, 10000);

  ExperimentConfig gated = cfg;
  gated.input.envelope = Envelope::gate(12);
  report("gated(12), kappa3 on", gated, 20000);

  ExperimentConfig faster = cfg;
  faster.input.envelope = Envelope::exponential(1.0, -0.01);
  report("decaying e^{-0.01 t}", faster, 20000);
  return 0;
}
