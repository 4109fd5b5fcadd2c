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

#ifndef IEOBS_OBSERVER_HPP_
#define IEOBS_OBSERVER_HPP_

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ieobs/numerics.hpp"
#include "ieobs/plant.hpp"

namespace ieobs
{

/// Dimensions shared by every observer quantity.
///
/// pdim = qn + mn parameters, h = pdim + n is the size of the combined
/// unknown (parameters plus initial state) and of every second-layer object.
struct ObserverDims
{
  int q = 0;
  int r = 0;
  int m = 0;

  int n() const { return q * r; }
  int pdim() const { return q * n() + m * n(); }
  int h() const { return pdim() + n(); }
};

inline ObserverDims dims_of(const PlantDefinition & plant)
{
  return ObserverDims{plant.q, plant.r, plant.m};
}

/// Tuning constants plus the assembled initial estimate.
struct ObserverConfig
{
  std::vector<Matrix> F_blocks;  ///< first block-column of F, canonical structure
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 0.0;
  double alpha = 0.5;    ///< chain mixing, in (0,1)
  double sigma = 0.0;    ///< second-layer forgetting, in (-1,1)
  double zeta = 1e-6;    ///< SIE threshold on the accumulated Gram
  Vector psi_hat_0;      ///< h-vector, see assemble_psi
};

// ---------------------------------------------------------------------------
// Parameter vectorization
// ---------------------------------------------------------------------------

/// Stacks canonical-form blocks into the n x q first block-column.
inline Matrix stack_block_column(const std::vector<Matrix> & blocks, int q, int r)
{
  detail::require_blocks(blocks, q, r, "stack_block_column");
  Matrix col(q * r, q);
  for (int i = 0; i < r; ++i) {
    col.middleRows(i * q, q) = blocks[static_cast<size_t>(i)];
  }
  return col;
}

/// The unknown vector pair: p = [a - f ; b] and psi = [p ; x0].
///
/// a and f are vect of the first block-columns of A and F, b = vect(B).
/// This layout makes estimate extraction a pure block selection.
struct ParameterVector
{
  Vector p;    ///< qn + mn entries
  Vector psi;  ///< p followed by x0
};

inline ParameterVector parameterize(
  const std::vector<Matrix> & A_blocks, const Matrix & B, const Vector & x0,
  const std::vector<Matrix> & F_blocks, const ObserverDims & dims)
{
  const Vector a = vect(stack_block_column(A_blocks, dims.q, dims.r));
  const Vector f = vect(stack_block_column(F_blocks, dims.q, dims.r));
  if (B.rows() != dims.n() || B.cols() != dims.m) {
    throw std::invalid_argument("parameterize: B must be n x m");
  }
  if (x0.size() != dims.n()) {
    throw std::invalid_argument("parameterize: x0 must have n entries");
  }
  ParameterVector out;
  out.p.resize(dims.pdim());
  out.p << (a - f), vect(B);
  out.psi.resize(dims.h());
  out.psi << out.p, x0;
  return out;
}

/// Assembles psi_hat_0 from initial guesses, using the same vectorization
/// as the truth so that estimation errors are plain vector differences.
inline Vector assemble_psi(
  const std::vector<Matrix> & A0_blocks, const Matrix & B0, const Vector & x00,
  const std::vector<Matrix> & F_blocks, const ObserverDims & dims)
{
  return parameterize(A0_blocks, B0, x00, F_blocks, dims).psi;
}

// ---------------------------------------------------------------------------
// Observer state
// ---------------------------------------------------------------------------

/// Everything the update law carries between steps. Single-writer: one
/// state is stepped sequentially; distinct states are independent.
struct ObserverState
{
  ObserverDims dims;
  ObserverConfig config;
  Matrix F;  ///< assembled from config.F_blocks

  long t = 0;                  ///< steps consumed so far
  Matrix M;                    ///< n x pdim first-layer filter
  MatrixPowerTracker F_power;  ///< F^t alongside M
  Matrix w_chain;              ///< h row-blocks of q rows each; block i is w_{t,(i)}
  Vector y_chain;              ///< h blocks of q entries each; block i is y_{t,(i)}
  Matrix S;                    ///< h x h second-layer filter
  Vector rho;                  ///< h second-layer filter
  Matrix gram;                 ///< accumulated sum of W^T W, h x h
  Vector psi_hat;              ///< current estimate of psi
  int eta = 0;                 ///< switch flag, flips 0 -> 1 exactly once
  std::optional<long> sie_step;
  Matrix S_frozen;             ///< empty until the switch fires
  Vector rho_frozen;

  ObserverState(const ObserverDims & d, const ObserverConfig & c, Matrix f_assembled)
  : dims(d), config(c), F(std::move(f_assembled)), F_power(F)
  {
    const int n = dims.n();
    const int h = dims.h();
    M = Matrix::Zero(n, dims.pdim());
    w_chain = Matrix::Zero(static_cast<Eigen::Index>(dims.q) * h, h);
    y_chain = Vector::Zero(static_cast<Eigen::Index>(dims.q) * h);
    S = Matrix::Zero(h, h);
    rho = Vector::Zero(h);
    gram = Matrix::Zero(h, h);
    psi_hat = config.psi_hat_0;
  }
};

/// Validates config against dims and builds the initial state.
/// A non-Schur F is not fatal; it prints a warning and continues.
inline ObserverState make_observer(const ObserverDims & dims, const ObserverConfig & config)
{
  if (dims.q < 1 || dims.r < 1 || dims.m < 1) {
    throw std::invalid_argument("observer.dims: q, r, m must be positive");
  }
  detail::require_blocks(config.F_blocks, dims.q, dims.r, "observer.F_blocks");
  if (!(config.kappa1 > 0.0) || !(config.kappa2 > 0.0)) {
    throw std::invalid_argument("observer.kappa1/kappa2: must be positive");
  }
  if (config.kappa3 < 0.0) {
    throw std::invalid_argument("observer.kappa3: must be nonnegative");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("observer.alpha: must lie in (0,1)");
  }
  if (!(config.sigma > -1.0 && config.sigma < 1.0)) {
    throw std::invalid_argument("observer.sigma: must lie in (-1,1)");
  }
  if (!(config.zeta > 0.0)) {
    throw std::invalid_argument("observer.zeta: must be positive");
  }
  if (config.psi_hat_0.size() != dims.h()) {
    throw std::invalid_argument(
      "observer.psi_hat_0: must have " + std::to_string(dims.h()) + " entries");
  }
  Matrix f = assemble_canonical(config.F_blocks, dims.q, dims.r);
  const double radius = spectral_radius_estimate(f, 32);
  if (radius >= 1.0) {
    std::fprintf(
      stderr, "warning: observer.F_blocks: F looks unstable (||F^32||^(1/32) = %.6g >= 1)\n",
      radius);
  }
  return ObserverState(dims, config, std::move(f));
}

// ---------------------------------------------------------------------------
// Per-step operations
// ---------------------------------------------------------------------------

/// Regression carrier for one measurement: [y^T (x) I_n | u^T (x) I_n].
/// Satisfies A x + B u = F x + Z p with p laid out as in ParameterVector.
inline Matrix build_Z(const Vector & y, const Vector & u, int n)
{
  if (n < 1 || y.size() < 1 || u.size() < 1) {
    throw std::invalid_argument("build_Z: n, y, u must be nonempty");
  }
  const Matrix id = Matrix::Identity(n, n);
  Matrix z(n, (y.size() + u.size()) * n);
  z << kron(y.transpose(), id), kron(u.transpose(), id);
  return z;
}

/// M <- F M + Z. Together with x_{t+1} = F x_t + Z_t p this keeps the
/// identity x_t = M_t p + F^t x0.
inline void filter_M_step(ObserverState & state, const Matrix & Z)
{
  if (Z.rows() != state.M.rows() || Z.cols() != state.M.cols()) {
    throw std::invalid_argument("filter_M_step: Z must match M's shape");
  }
  state.M = state.F * state.M + Z;
}

/// w_t = [C M_t | C F^t]; with canonical C these are the first q rows.
/// Satisfies y_t = w_t psi.
inline Matrix compute_w(const ObserverState & state)
{
  if (state.t != state.F_power.step()) {
    throw std::logic_error("compute_w: M and F_power are at different steps");
  }
  const int q = state.dims.q;
  Matrix w(q, state.dims.h());
  w << state.M.topRows(q), state.F_power.current().topRows(q);
  return w;
}

/// Advances the regressor chains one step and installs the new top entry:
///   w_{t,(i)} = alpha w_{t-1,(i)} + (1-alpha) w_{t-1,(i-1)},  w_{t,(0)} = w_new
/// and the same recursion for y. Row-block i of w_chain holds w_{t,(i)}, so
/// the chain matrices are already the stacked regressors W_t and Y_t.
inline void regressor_chain_step(ObserverState & state, const Matrix & w_new, const Vector & y_new)
{
  const int q = state.dims.q;
  const int h = state.dims.h();
  if (w_new.rows() != q || w_new.cols() != h || y_new.size() != q) {
    throw std::invalid_argument("regressor_chain_step: w_new must be q x h and y_new length q");
  }
  const double a = state.config.alpha;
  // Sweep from the tail so every block reads the previous step's values.
  for (int i = h - 1; i >= 1; --i) {
    state.w_chain.middleRows(i * q, q) =
      a * state.w_chain.middleRows(i * q, q) + (1.0 - a) * state.w_chain.middleRows((i - 1) * q, q);
    state.y_chain.segment(i * q, q) =
      a * state.y_chain.segment(i * q, q) + (1.0 - a) * state.y_chain.segment((i - 1) * q, q);
  }
  state.w_chain.topRows(q) = w_new;
  state.y_chain.head(q) = y_new;
}

/// S <- sigma S + W^T W, rho <- sigma rho + W^T Y, gram <- gram + W^T W.
inline void second_filter_step(ObserverState & state, const Matrix & W, const Vector & Y)
{
  const int h = state.dims.h();
  if (W.cols() != h || W.rows() != Y.size()) {
    throw std::invalid_argument("second_filter_step: W must be (q h) x h with matching Y");
  }
  const Matrix wtw = W.transpose() * W;
  state.S = state.config.sigma * state.S + wtw;
  state.rho = state.config.sigma * state.rho + W.transpose() * Y;
  state.gram += wtw;
}

/// True once the accumulated Gram clears the zeta floor. Callers gate this
/// on eta == 0 and t >= h and perform the freeze themselves.
inline bool sie_detect(const ObserverState & state)
{
  return min_eig_symmetric(state.gram) >= state.config.zeta;
}

/// Normalized-gradient correction of psi_hat from the current residuals:
///   psi_hat += [k1 W^T (Y - W psi_hat) + k2 S^T (rho - S psi_hat)
///               + k3 eta S_f^T (rho_f - S_f psi_hat)] / (1 + trace(Gamma^T Gamma))
/// where trace(Gamma^T Gamma) = k1 ||W||_F^2 + k2 ||S||_F^2 + k3 eta ||S_f||_F^2.
/// Returns ||gamma||_F^2 = trace / (1 + trace), which is < 1 by construction.
inline double update_psi(ObserverState & state)
{
  const ObserverConfig & c = state.config;
  if (state.eta == 1 && state.S_frozen.size() == 0) {
    throw std::logic_error("update_psi: eta is set but the frozen snapshots are missing");
  }
  const Matrix & W = state.w_chain;
  const Vector & Y = state.y_chain;

  double trace = c.kappa1 * W.squaredNorm() + c.kappa2 * state.S.squaredNorm();
  Vector numerator = c.kappa1 * (W.transpose() * (Y - W * state.psi_hat)) +
    c.kappa2 * (state.S.transpose() * (state.rho - state.S * state.psi_hat));
  if (state.eta == 1) {
    trace += c.kappa3 * state.S_frozen.squaredNorm();
    numerator += c.kappa3 *
      (state.S_frozen.transpose() * (state.rho_frozen - state.S_frozen * state.psi_hat));
  }
  state.psi_hat += numerator / (1.0 + trace);
  return trace / (1.0 + trace);
}

struct Estimates
{
  Vector p_hat;
  Vector x0_hat;
  Vector x_hat;
};

/// Block selection from psi_hat plus the state reconstruction
/// x_hat = M p_hat + F^t x0_hat at the state's current step index.
inline Estimates extract_estimates(const ObserverState & state)
{
  Estimates est;
  est.p_hat = state.psi_hat.head(state.dims.pdim());
  est.x0_hat = state.psi_hat.tail(state.dims.n());
  est.x_hat = state.M * est.p_hat + state.F_power.current() * est.x0_hat;
  return est;
}

struct SystemEstimate
{
  std::vector<Matrix> A_blocks;
  Matrix B;
};

/// Inverse of the parameter vectorization: undoes the F shift on the A part
/// and un-vectorizes the B part.
inline SystemEstimate reconstruct_AB(
  const Vector & p_hat, const std::vector<Matrix> & F_blocks, const ObserverDims & dims)
{
  if (p_hat.size() != dims.pdim()) {
    throw std::invalid_argument(
      "reconstruct_AB: p_hat must have " + std::to_string(dims.pdim()) + " entries");
  }
  const int n = dims.n();
  const Matrix a_col =
    unvect(p_hat.head(dims.q * n), n, dims.q) + stack_block_column(F_blocks, dims.q, dims.r);
  SystemEstimate out;
  out.A_blocks.reserve(static_cast<size_t>(dims.r));
  for (int i = 0; i < dims.r; ++i) {
    out.A_blocks.push_back(a_col.middleRows(i * dims.q, dims.q));
  }
  out.B = unvect(p_hat.tail(dims.m * n), n, dims.m);
  return out;
}

// ---------------------------------------------------------------------------
// Full step and diagnostics
// ---------------------------------------------------------------------------

struct StepResult
{
  Vector p_hat;
  Vector x0_hat;
  Vector x_hat;          ///< estimate of the state the measurement came from
  double gamma_sq = 0.0;
  double gram_min_eig = 0.0;
  int eta = 0;
  bool sie_fired = false;
};

/// One observer step on measurement (y_t, u_t):
/// build the regressor from the current filters, advance the chains and the
/// second layer, run SIE detection, correct psi_hat, read the estimates off
/// the pre-advance filters, then advance M and F^t for the next measurement.
inline StepResult observer_step(ObserverState & state, const Vector & y, const Vector & u)
{
  const ObserverDims & dims = state.dims;
  if (y.size() != dims.q) {
    throw std::invalid_argument("observer_step: y must have q entries");
  }
  if (u.size() != dims.m) {
    throw std::invalid_argument("observer_step: u must have m entries");
  }

  const Matrix w = compute_w(state);
  regressor_chain_step(state, w, y);
  second_filter_step(state, state.w_chain, state.y_chain);

  StepResult result;
  result.gram_min_eig = min_eig_symmetric(state.gram);
  if (state.eta == 0 && state.t >= state.dims.h() && result.gram_min_eig >= state.config.zeta) {
    state.sie_step = state.t;
    state.S_frozen = state.S;
    state.rho_frozen = state.rho;
    state.eta = 1;
    result.sie_fired = true;
    const double snapshot_floor = min_eig_symmetric(state.S_frozen.transpose() * state.S_frozen);
    if (snapshot_floor < 1e-12) {
      std::fprintf(
        stderr,
        "warning: frozen second-layer snapshot is near singular at t=%ld "
        "(min eig of S^T S = %.6g); post-switch convergence may stall\n",
        state.t, snapshot_floor);
    }
  }

  result.gamma_sq = update_psi(state);

  const Estimates est = extract_estimates(state);
  result.p_hat = est.p_hat;
  result.x0_hat = est.x0_hat;
  result.x_hat = est.x_hat;
  result.eta = state.eta;

  filter_M_step(state, build_Z(y, u, dims.n()));
  state.F_power.advance();
  ++state.t;
  return result;
}

/// Snapshot of the stability-relevant quantities. Error norms are filled
/// only when the corresponding truth is supplied (negative otherwise).
struct Diagnostics
{
  double psi_err_norm = -1.0;
  double x_err_norm = -1.0;
  double gamma_sq = 0.0;
  double gram_min_eig = 0.0;
  int eta = 0;
};

inline Diagnostics diagnostics(
  const ObserverState & state, const ParameterVector * truth = nullptr,
  const Vector * x_true = nullptr)
{
  Diagnostics d;
  const ObserverConfig & c = state.config;
  double trace = c.kappa1 * state.w_chain.squaredNorm() + c.kappa2 * state.S.squaredNorm();
  if (state.eta == 1) {
    trace += c.kappa3 * state.S_frozen.squaredNorm();
  }
  d.gamma_sq = trace / (1.0 + trace);
  d.gram_min_eig = min_eig_symmetric(state.gram);
  d.eta = state.eta;
  if (truth != nullptr) {
    d.psi_err_norm = (truth->psi - state.psi_hat).norm();
  }
  if (x_true != nullptr) {
    d.x_err_norm = (*x_true - extract_estimates(state).x_hat).norm();
  }
  return d;
}

}  // namespace ieobs

#endif  // IEOBS_OBSERVER_HPP_
