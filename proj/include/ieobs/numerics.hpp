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

#ifndef IEOBS_NUMERICS_HPP_
#define IEOBS_NUMERICS_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ieobs
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-stacking vectorization: columns of m concatenated top to bottom.
inline Vector vect(const Matrix & m)
{
  if (m.size() == 0) {
    throw std::invalid_argument("vect: matrix must be nonempty");
  }
  return m.reshaped();
}

/// Inverse of vect. v.size() must equal rows * cols.
inline Matrix unvect(const Vector & v, Eigen::Index rows, Eigen::Index cols)
{
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
    throw std::invalid_argument(
      "unvect: need " + std::to_string(rows * cols) + " entries, got " +
      std::to_string(v.size()));
  }
  return v.reshaped(rows, cols);
}

/// Kronecker product a (p x q) with b (r x s), giving (p*r) x (q*s).
inline Matrix kron(const Matrix & a, const Matrix & b)
{
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Smallest eigenvalue of a symmetric matrix.
///
/// The input is symmetrized as (s + s^T) / 2 before factorization so that
/// accumulated roundoff in Gram-type sums cannot push the solver off the
/// symmetric path. Asymmetry beyond 1e3 * tol is treated as a caller bug.
inline double min_eig_symmetric(const Matrix & s, double tol = 1e-10)
{
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw std::invalid_argument("min_eig_symmetric: matrix must be square and nonempty");
  }
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e3 * tol)) {
    throw std::invalid_argument(
      "min_eig_symmetric: matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("min_eig_symmetric: eigenvalue iteration failed");
  }
  return solver.eigenvalues().minCoeff();
}

/// Frobenius-norm estimate ||f^k||_F^(1/k) of the spectral radius of f.
///
/// Upper-biased for finite k; converges to the spectral radius as k grows.
/// Used only as a stability screen, never inside the estimation loop.
inline double spectral_radius_estimate(const Matrix & f, int k)
{
  if (f.rows() != f.cols() || f.rows() == 0) {
    throw std::invalid_argument("spectral_radius_estimate: matrix must be square and nonempty");
  }
  if (k < 1) {
    throw std::invalid_argument("spectral_radius_estimate: power must be at least 1");
  }
  Matrix p = Matrix::Identity(f.rows(), f.cols());
  for (int i = 0; i < k; ++i) {
    p = p * f;
  }
  return std::pow(p.norm(), 1.0 / static_cast<double>(k));
}

/// Tracks successive powers of a fixed square matrix.
///
/// advance() multiplies one factor at a time, so after t calls current()
/// holds base^t without ever recomputing the power from scratch.
class MatrixPowerTracker
{
public:
  explicit MatrixPowerTracker(const Matrix & base)
  : base_(base), current_(Matrix::Identity(base.rows(), base.cols())), step_(0)
  {
    if (base.rows() != base.cols() || base.rows() == 0) {
      throw std::invalid_argument("MatrixPowerTracker: base must be square and nonempty");
    }
  }

  void advance()
  {
    current_ = current_ * base_;
    ++step_;
  }

  void reset()
  {
    current_ = Matrix::Identity(base_.rows(), base_.cols());
    step_ = 0;
  }

  const Matrix & base() const { return base_; }
  const Matrix & current() const { return current_; }
  long step() const { return step_; }

private:
  Matrix base_;
  Matrix current_;
  long step_;
};

}  // namespace ieobs

#endif  // IEOBS_NUMERICS_HPP_
