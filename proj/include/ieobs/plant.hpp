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

#ifndef IEOBS_PLANT_HPP_
#define IEOBS_PLANT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ieobs/numerics.hpp"

namespace ieobs
{

/// Discrete-time LTI plant in block observable canonical form.
///
/// The state matrix is determined by the r blocks of its first block-column;
/// every block of the super-diagonal is the q x q identity and everything
/// else is zero. The output picks off the first q states, so n = q * r.
struct PlantDefinition
{
  int q = 0;  ///< output dimension (block size)
  int r = 0;  ///< number of blocks per block-column
  int m = 0;  ///< input dimension
  std::vector<Matrix> A_blocks;  ///< r blocks, each q x q, top to bottom
  Matrix B;   ///< n x m
  Vector x0;  ///< n, initial state

  int n() const { return q * r; }
};

namespace detail
{

inline void require_blocks(
  const std::vector<Matrix> & blocks, int q, int r, const std::string & name)
{
  if (static_cast<int>(blocks.size()) != r) {
    throw std::invalid_argument(
      name + ": expected " + std::to_string(r) + " blocks, got " +
      std::to_string(blocks.size()));
  }
  for (const Matrix & blk : blocks) {
    if (blk.rows() != q || blk.cols() != q) {
      throw std::invalid_argument(name + ": every block must be " + std::to_string(q) + " x " +
        std::to_string(q));
    }
  }
}

}  // namespace detail

/// Assembles the full n x n matrix from canonical-form blocks.
inline Matrix assemble_canonical(const std::vector<Matrix> & blocks, int q, int r)
{
  if (q < 1 || r < 1) {
    throw std::invalid_argument("assemble_canonical: q and r must be positive");
  }
  detail::require_blocks(blocks, q, r, "assemble_canonical");
  const int n = q * r;
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) {
    a.block(i * q, 0, q, q) = blocks[static_cast<size_t>(i)];
    if (i + 1 < r) {
      a.block(i * q, (i + 1) * q, q, q) = Matrix::Identity(q, q);
    }
  }
  return a;
}

inline Matrix assemble_A(const PlantDefinition & plant)
{
  return assemble_canonical(plant.A_blocks, plant.q, plant.r);
}

/// Output matrix [I_q 0 ... 0] of the canonical form.
inline Matrix canonical_C(int q, int n)
{
  if (q < 1 || n < q) {
    throw std::invalid_argument("canonical_C: need 1 <= q <= n");
  }
  Matrix c = Matrix::Zero(q, n);
  c.topLeftCorner(q, q) = Matrix::Identity(q, q);
  return c;
}

/// Throws std::invalid_argument naming the offending field.
inline void validate(const PlantDefinition & plant)
{
  if (plant.q < 1) {throw std::invalid_argument("plant.q: must be at least 1");}
  if (plant.r < 1) {throw std::invalid_argument("plant.r: must be at least 1");}
  if (plant.m < 1) {throw std::invalid_argument("plant.m: must be at least 1");}
  detail::require_blocks(plant.A_blocks, plant.q, plant.r, "plant.A_blocks");
  if (plant.B.rows() != plant.n() || plant.B.cols() != plant.m) {
    throw std::invalid_argument(
      "plant.B: must be " + std::to_string(plant.n()) + " x " + std::to_string(plant.m));
  }
  if (plant.x0.size() != plant.n()) {
    throw std::invalid_argument("plant.x0: must have " + std::to_string(plant.n()) + " entries");
  }
  if (!plant.B.allFinite() || !plant.x0.allFinite()) {
    throw std::invalid_argument("plant: B and x0 must be finite");
  }
  for (const Matrix & blk : plant.A_blocks) {
    if (!blk.allFinite()) {throw std::invalid_argument("plant.A_blocks: blocks must be finite");}
  }
}

/// One simulation step. Returns the successor state and the output at the
/// current state, in that order.
inline std::pair<Vector, Vector> plant_step(
  const Vector & x, const Vector & u, const PlantDefinition & plant)
{
  if (x.size() != plant.n()) {
    throw std::invalid_argument("plant_step: state must have " + std::to_string(plant.n()) +
      " entries");
  }
  if (u.size() != plant.m) {
    throw std::invalid_argument("plant_step: input must have " + std::to_string(plant.m) +
      " entries");
  }
  const Matrix a = assemble_A(plant);
  Vector x_next = a * x + plant.B * u;
  Vector y = x.head(plant.q);
  return {std::move(x_next), std::move(y)};
}

// ---------------------------------------------------------------------------
// Input programs
// ---------------------------------------------------------------------------

struct SineTerm
{
  double amplitude = 0.0;
  double omega = 0.0;  ///< radians per step
};

/// Scalar gain applied on top of the sine sum, as a function of the step.
struct Envelope
{
  enum class Kind { kConstant, kExponential, kGate };

  Kind kind = Kind::kConstant;
  double scale = 1.0;      ///< c for constant and exponential
  double rate = 0.0;       ///< lambda for exponential: c * exp(lambda * t)
  long gate_steps = 0;     ///< T for gate: 1 while t < T, 0 afterwards

  static Envelope constant(double c)
  {
    Envelope e;
    e.kind = Kind::kConstant;
    e.scale = c;
    return e;
  }

  static Envelope exponential(double c, double lambda)
  {
    Envelope e;
    e.kind = Kind::kExponential;
    e.scale = c;
    e.rate = lambda;
    return e;
  }

  static Envelope gate(long steps)
  {
    Envelope e;
    e.kind = Kind::kGate;
    e.gate_steps = steps;
    return e;
  }

  double value(long t) const
  {
    switch (kind) {
      case Kind::kConstant:
        return scale;
      case Kind::kExponential:
        return scale * std::exp(rate * static_cast<double>(t));
      case Kind::kGate:
        return t < gate_steps ? 1.0 : 0.0;
    }
    return 0.0;
  }
};

/// Deterministic multi-sine input, one term list per channel:
///   u_i(t) = gain * envelope(t) * sum_j amplitude_ij * sin(omega_ij * t)
struct InputProgram
{
  double gain = 1.0;
  Envelope envelope;
  std::vector<std::vector<SineTerm>> channels;

  int channel_count() const { return static_cast<int>(channels.size()); }
};

inline Vector eval_input(const InputProgram & program, long t)
{
  if (program.channels.empty()) {
    throw std::invalid_argument("eval_input: program must define at least one channel");
  }
  Vector u(program.channel_count());
  const double env = program.gain * program.envelope.value(t);
  for (int i = 0; i < program.channel_count(); ++i) {
    double acc = 0.0;
    for (const SineTerm & term : program.channels[static_cast<size_t>(i)]) {
      acc += term.amplitude * std::sin(term.omega * static_cast<double>(t));
    }
    u(i) = env * acc;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Excitation diagnostics
// ---------------------------------------------------------------------------

enum class ExcitationMode { kPE, kIE, kSIE };

struct ExcitationReport
{
  ExcitationMode mode = ExcitationMode::kIE;
  long horizon = 0;            ///< window length actually examined
  double zeta_achieved = 0.0;  ///< min eigenvalue of the accumulated Gram
  bool satisfied = false;
};

/// Gram-floor excitation test over a recorded regressor sequence.
///
/// signals[t] holds the regressor at step t, one column per scalar equation
/// (a plain vector is a single column). For kPE every length-horizon window
/// must clear zeta and zeta_achieved reports the worst window; for kIE and
/// kSIE only the prefix [0, horizon) is examined, and kSIE additionally
/// requires horizon >= row dimension.
inline ExcitationReport excitation_check(
  const std::vector<Matrix> & signals, ExcitationMode mode, long horizon, double zeta)
{
  if (signals.empty()) {
    throw std::invalid_argument("excitation_check: signal sequence is empty");
  }
  if (horizon < 1 || horizon > static_cast<long>(signals.size())) {
    throw std::invalid_argument("excitation_check: horizon must lie in [1, signals.size()]");
  }
  if (!(zeta > 0.0)) {
    throw std::invalid_argument("excitation_check: zeta must be positive");
  }
  const Eigen::Index dim = signals.front().rows();
  for (const Matrix & s : signals) {
    if (s.rows() != dim) {
      throw std::invalid_argument("excitation_check: signals must share their row dimension");
    }
  }

  ExcitationReport report;
  report.mode = mode;
  report.horizon = horizon;

  const auto window_floor = [&signals, dim](long begin, long len) {
      Matrix gram = Matrix::Zero(dim, dim);
      for (long i = begin; i < begin + len; ++i) {
        const Matrix & s = signals[static_cast<size_t>(i)];
        gram += s * s.transpose();
      }
      return min_eig_symmetric(gram);
    };

  if (mode == ExcitationMode::kPE) {
    double worst = std::numeric_limits<double>::infinity();
    const long last_begin = static_cast<long>(signals.size()) - horizon;
    for (long begin = 0; begin <= last_begin; ++begin) {
      worst = std::min(worst, window_floor(begin, horizon));
    }
    report.zeta_achieved = worst;
    report.satisfied = worst >= zeta;
    return report;
  }

  report.zeta_achieved = window_floor(0, horizon);
  report.satisfied = report.zeta_achieved >= zeta;
  if (mode == ExcitationMode::kSIE && horizon < dim) {
    report.satisfied = false;
  }
  return report;
}

}  // namespace ieobs

#endif  // IEOBS_PLANT_HPP_
