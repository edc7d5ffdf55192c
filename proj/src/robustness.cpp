// Copyright 2026 The Dephaser Authors
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

#include <cmath>
#include <sstream>

#include "dephaser/coherence.hpp"

namespace dephaser::coherence {

namespace {

constexpr double kClassicalCut = 1e-12;
constexpr double kTargetGap = 1e-8;
constexpr int kMaxNewton = 500;

Matrix hermitian_part_of(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// Y(y) = diag(y) - J_off.
Matrix assemble(const RealVector& y, const Matrix& j_off) {
  Matrix out = -j_off;
  for (Eigen::Index a = 0; a < y.size(); ++a) out(a, a) = y(a);
  return out;
}

struct Barrier {
  const Matrix& j_off;
  double t;

  // t * sum(y) - log det Y; nullopt outside the PD cone.
  std::optional<double> value(const RealVector& y) const {
    Eigen::LLT<Matrix> llt(assemble(y, j_off));
    if (llt.info() != Eigen::Success) return std::nullopt;
    double logdet = 0.0;
    const Matrix& l = llt.matrixLLT();
    for (Eigen::Index a = 0; a < l.rows(); ++a) {
      const double diag = l(a, a).real();
      if (!(diag > 0.0)) return std::nullopt;
      logdet += 2.0 * std::log(diag);
    }
    return t * y.sum() - logdet;
  }
};

// Basis of {y : sum_i y_{ik} = sum(y) / d for every k}.
RealMatrix constraint_null_space(int d) {
  const int n = d * d;
  RealMatrix a = RealMatrix::Zero(d, n);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) a(k, i * d + k) += 1.0;
  a.array() -= 1.0 / d;
  Eigen::FullPivLU<RealMatrix> lu(a);
  RealMatrix kernel = lu.kernel();
  // Orthonormal columns keep the reduced Newton system well scaled.
  Eigen::HouseholderQR<RealMatrix> qr(kernel);
  return qr.householderQ() * RealMatrix::Identity(n, kernel.cols());
}

StochasticMatrix target_from(const Matrix& jam, const Matrix& y, double r,
                             int d) {
  RealMatrix t(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      t(i, k) = d * (jam(i * d + k, i * d + k) + y(i * d + k, i * d + k)).real() /
                (1.0 + r);
  return StochasticMatrix(t, 1e-8);
}

}  // namespace

RobustnessCertificate robustness(const Channel& ch, const Tolerances& tol) {
  const int d = ch.dim();
  const int n = d * d;
  if (d > 4) throw DimensionError("robustness: supported for d <= 4");
  const Matrix& jam = ch.jamiolkowski();
  Matrix j_off = hermitian_part_of(jam);
  for (int a = 0; a < n; ++a) j_off(a, a) = 0.0;

  if (max_abs(j_off) < kClassicalCut) {
    RobustnessCertificate cert{
        .value = 0.0,
        .noise_channel = std::nullopt,
        .classical_target = target_from(jam, Matrix::Zero(n, n), 0.0, d),
        .primal_dual_gap = 0.0,
        .dual_value = 0.0,
        .y = Matrix::Zero(n, n),
        .newton_steps = 0,
    };
    return cert;
  }

  const RealMatrix null_space = constraint_null_space(d);
  const double shift = herm_eig(j_off, tol).values.maxCoeff() + 1.0;
  RealVector y = RealVector::Constant(n, shift);
  int steps = 0;

  for (double t = 1.0;; t *= 10.0) {
    const Barrier barrier{j_off, t};
    double current = *barrier.value(y);
    for (int inner = 0;; ++inner) {
      if (inner >= kMaxNewton) {
        throw SolverError("robustness: Newton iteration did not converge");
      }
      const Matrix inv = assemble(y, j_off).llt().solve(
          Matrix::Identity(n, n));
      RealVector grad(n);
      RealMatrix hess(n, n);
      for (int a = 0; a < n; ++a) {
        grad(a) = t - inv(a, a).real();
        for (int b = 0; b < n; ++b) hess(a, b) = std::norm(inv(a, b));
      }
      const RealVector g = null_space.transpose() * grad;
      const RealMatrix h = null_space.transpose() * hess * null_space;
      const RealVector dz = -h.ldlt().solve(g);
      const double decrement = -g.dot(dz);
      if (!std::isfinite(decrement)) {
        throw SolverError("robustness: singular Newton system");
      }
      if (decrement / 2.0 < 1e-12) break;
      const RealVector dy = null_space * dz;
      double step = 1.0;
      double gain = 0.0;
      for (;;) {
        const RealVector trial = y + step * dy;
        const auto value = barrier.value(trial);
        if (value && *value <= current - 0.25 * step * decrement) {
          y = trial;
          gain = current - *value;
          current = *value;
          break;
        }
        step *= 0.5;
        if (step < 1e-14) break;
      }
      ++steps;
      // Past this point the objective no longer resolves the progress.
      if (step < 1e-14 || gain <= 1e-13 * std::max(1.0, std::abs(current))) {
        break;
      }
    }
    if (n / t < kTargetGap) {
      const Matrix yy = assemble(y, j_off);
      const double r = y.sum();

      // Dual point from the central path, made exactly feasible by a
      // diagonal congruence: Z >= 0 with Z_{ik,ik} = w_k, sum_k w_k = d.
      Matrix z = assemble(y, j_off).llt().solve(Matrix::Identity(n, n)) / t;
      z = hermitian_part_of(z);
      RealVector w = RealVector::Zero(d);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) w(k) += z(i * d + k, i * d + k).real() / d;
      w *= d / w.sum();
      RealVector scale(n);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
          scale(i * d + k) = std::sqrt(w(k) / z(i * d + k, i * d + k).real());
      z = scale.cast<Complex>().asDiagonal() * z *
          scale.cast<Complex>().asDiagonal();
      const double dual = (z * j_off).trace().real();

      Matrix noise = yy / r;
      noise = hermitian_part_of(noise);
      RobustnessCertificate cert{
          .value = r,
          .noise_channel = Channel::from_jamiolkowski(noise, tol),
          .classical_target = target_from(jam, yy, r, d),
          .primal_dual_gap = r - dual,
          .dual_value = dual,
          .y = yy,
          .newton_steps = steps,
      };
      if (auto failure = certificate_violation(ch, cert)) {
        throw SolverError("robustness: certificate check failed: " + *failure);
      }
      return cert;
    }
  }
}

std::optional<std::string> certificate_violation(
    const Channel& ch, const RobustnessCertificate& cert, double tol) {
  const int d = ch.dim();
  const int n = d * d;
  const Matrix& jam = ch.jamiolkowski();
  const Matrix& y = cert.y;
  if (y.rows() != n || y.cols() != n) return "Y has the wrong size";
  if (cert.value < 0.0) return "negative robustness";
  if (!is_hermitian(y, tol)) return "Y is not Hermitian";
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (y + y.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) return "Y is not PSD";
  const Matrix sum = jam + y;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && std::abs(sum(a, b)) > tol) {
        std::ostringstream out;
        out << "J + Y has off-diagonal entry " << std::abs(sum(a, b));
        return out.str();
      }
  if (std::abs(y.trace().real() - cert.value) > tol) {
    return "Tr Y differs from the robustness value";
  }
  for (int k = 0; k < d; ++k) {
    double column = 0.0;
    for (int i = 0; i < d; ++i) column += y(i * d + k, i * d + k).real();
    if (std::abs(column - cert.value / d) > tol) {
      return "Y violates trace preservation";
    }
  }
  const RealMatrix& t = cert.classical_target.matrix();
  if (t.rows() != d) return "classical target has the wrong size";
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const double expected =
          d * sum(i * d + k, i * d + k).real() / (1.0 + cert.value);
      if (std::abs(t(i, k) - expected) > tol) {
        return "classical target does not match diag(J + Y)";
      }
    }
  return std::nullopt;
}

}  // namespace dephaser::coherence
