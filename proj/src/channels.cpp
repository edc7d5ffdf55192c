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

#include "dephaser/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dephaser::channels {

namespace {

int side_root(Eigen::Index n, const char* what) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d <= 0 || static_cast<Eigen::Index>(d) * d != n) {
    throw DimensionError(
        std::string(what) + ": size " + std::to_string(n) +
        " is not a perfect square");
  }
  return d;
}

void require_state(const Matrix& rho, int d, const Tolerances& tol) {
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(
        "state has size " + std::to_string(rho.rows()) + ", channel acts on " +
        std::to_string(d));
  }
  if (!is_density_matrix(rho, tol)) {
    throw InvalidStateError("input is not a density matrix");
  }
}

}  // namespace

/****************************** value types *********************************/

std::optional<std::string> cptp_violation(
    const Matrix& jam, int d, const Tolerances& tol) {
  if (d <= 0 || jam.rows() != d * d || jam.cols() != d * d) {
    return "Jamiolkowski matrix must be d^2 x d^2";
  }
  if (!jam.allFinite()) return "non-finite entries";
  if (!is_hermitian(jam, tol.herm)) return "not Hermitian";
  const double lowest = min_eigenvalue(jam, tol);
  if (lowest < -tol.psd) {
    return "not completely positive (min eigenvalue " +
           std::to_string(lowest) + ")";
  }
  const Matrix marginal = partial_trace(jam, {d, d}, Subsystem::kFirst);
  const double defect =
      max_abs(marginal - Matrix::Identity(d, d) / static_cast<double>(d));
  if (defect > tol.tp) {
    return "not trace preserving (|Tr_1 J - 1/d| = " + std::to_string(defect) +
           ")";
  }
  return std::nullopt;
}

Channel Channel::from_jamiolkowski(Matrix jam, const Tolerances& tol) {
  require_square(jam, "Channel");
  const int d = side_root(jam.rows(), "Channel");
  if (auto why = cptp_violation(jam, d, tol)) {
    throw InvalidChannelError("invalid channel: " + *why);
  }
  return Channel(d, std::move(jam), std::nullopt);
}

DephasingChannelC::DephasingChannelC(Matrix c, const Tolerances& tol)
    : c_(std::move(c)) {
  require_square(c_, "DephasingChannelC");
  if (!is_hermitian(c_, tol.herm)) {
    throw InvalidCorrelationError("correlation matrix is not Hermitian");
  }
  for (Eigen::Index i = 0; i < c_.rows(); ++i) {
    if (std::abs(c_(i, i) - 1.0) > tol.tp) {
      throw InvalidCorrelationError(
          "correlation matrix diagonal entry " + std::to_string(i) +
          " differs from 1");
    }
  }
  if (min_eigenvalue(c_, tol) < -tol.psd) {
    throw InvalidCorrelationError("correlation matrix is not PSD");
  }
}

StochasticMatrix::StochasticMatrix(RealMatrix t, double tol)
    : t_(std::move(t)) {
  if (t_.rows() != t_.cols() || t_.rows() == 0) {
    throw DimensionError("stochastic matrix must be square");
  }
  if (!t_.allFinite() || t_.minCoeff() < -tol) {
    throw InvalidChannelError("stochastic matrix has negative entries");
  }
  const RealVector sums = t_.colwise().sum().transpose();
  if ((sums.array() - 1.0).abs().maxCoeff() > tol) {
    throw InvalidChannelError("stochastic matrix columns do not sum to 1");
  }
}

bool is_density_matrix(const Matrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (!rho.allFinite() || !is_hermitian(rho, tol.herm)) return false;
  if (std::abs(rho.trace() - 1.0) > tol.tp) return false;
  return min_eigenvalue(rho, tol) >= -tol.psd;
}

/**************************** representations *******************************/

Channel from_kraus(std::vector<Matrix> ks, const Tolerances& tol) {
  if (ks.empty()) throw DimensionError("from_kraus: no operators");
  const Eigen::Index d = ks.front().rows();
  Matrix completeness = Matrix::Zero(d, d);
  for (const Matrix& k : ks) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionError("from_kraus: operators must all be d x d");
    }
    completeness += k.adjoint() * k;
  }
  const double defect = max_abs(completeness - Matrix::Identity(d, d));
  if (defect > tol.tp) {
    throw InvalidChannelError(
        "from_kraus: sum K^dagger K deviates from identity by " +
        std::to_string(defect));
  }
  Matrix jam = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : ks) {
    const Vector v = vec(k);
    jam += v * v.adjoint();
  }
  jam /= static_cast<double>(d);
  const int dim = static_cast<int>(d);
  if (auto why = cptp_violation(jam, dim, tol)) {
    throw InvalidChannelError("from_kraus: " + *why);
  }
  return Channel(dim, std::move(jam), std::move(ks));
}

std::vector<Matrix> to_kraus(const Channel& ch, const Tolerances& tol) {
  const int d = ch.dim();
  const EigenDecomposition eig =
      herm_eig(ch.jamiolkowski() * static_cast<double>(d), tol);
  std::vector<Matrix> ks;
  for (Eigen::Index m = eig.values.size() - 1; m >= 0; --m) {
    const double lambda = eig.values(m);
    if (lambda < tol.kraus_prune) continue;
    ks.push_back(std::sqrt(lambda) * unvec(eig.vectors.col(m), d, d));
  }
  return ks;
}

Matrix apply(const Channel& ch, const Matrix& rho, const Tolerances& tol) {
  const int d = ch.dim();
  require_state(rho, d, tol);
  const Matrix& jam = ch.jamiolkowski();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) acc += jam(i * d + k, j * d + l) * rho(k, l);
      out(i, j) = static_cast<double>(d) * acc;
    }
  return out;
}

Matrix apply_kraus(
    const Channel& ch, const Matrix& rho, const Tolerances& tol) {
  require_state(rho, ch.dim(), tol);
  const std::vector<Matrix> ks =
      ch.cached_kraus() ? *ch.cached_kraus() : to_kraus(ch, tol);
  Matrix out = Matrix::Zero(ch.dim(), ch.dim());
  for (const Matrix& k : ks) out += k * rho * k.adjoint();
  return out;
}

Matrix apply_extended(const Channel& ch, const Matrix& rho, int dim_b) {
  const int d = ch.dim();
  if (dim_b <= 0 || rho.rows() != d * dim_b || rho.cols() != d * dim_b) {
    throw DimensionError("apply_extended: state does not live on d x dim_b");
  }
  const Matrix& jam = ch.jamiolkowski();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const Complex w = static_cast<double>(d) * jam(i * d + k, j * d + l);
          if (w == Complex(0.0)) continue;
          out.block(i * dim_b, j * dim_b, dim_b, dim_b) +=
              w * rho.block(k * dim_b, l * dim_b, dim_b, dim_b);
        }
  return out;
}

Matrix apply_adjoint_extended(const Channel& ch, const Matrix& x, int dim_b) {
  const int d = ch.dim();
  if (dim_b <= 0 || x.rows() != d * dim_b || x.cols() != d * dim_b) {
    throw DimensionError(
        "apply_adjoint_extended: operator does not live on d x dim_b");
  }
  const Matrix& jam = ch.jamiolkowski();
  // Y_{(l,b'),(k,b)} = d sum_ij X_{(j,b'),(i,b)} J_{ik,jl}
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const Complex w = static_cast<double>(d) * jam(i * d + k, j * d + l);
          if (w == Complex(0.0)) continue;
          out.block(l * dim_b, k * dim_b, dim_b, dim_b) +=
              w * x.block(j * dim_b, i * dim_b, dim_b, dim_b);
        }
  return out;
}

Matrix superop_matrix(const Channel& ch) {
  return static_cast<double>(ch.dim()) * reshuffle(ch.jamiolkowski(), ch.dim());
}

Channel from_superop(const Matrix& phi, const Tolerances& tol) {
  require_square(phi, "from_superop");
  const int d = side_root(phi.rows(), "from_superop");
  return Channel::from_jamiolkowski(
      reshuffle(phi, d) / static_cast<double>(d), tol);
}

Matrix stinespring(const Channel& ch, const Tolerances& tol) {
  const int d = ch.dim();
  const std::vector<Matrix> ks = to_kraus(ch, tol);
  const int r = static_cast<int>(ks.size());
  Matrix w = Matrix::Zero(d * r, d);
  for (int m = 0; m < r; ++m)
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k) w(a * r + m, k) = ks[m](a, k);
  return w;
}

Matrix stinespring_unitary(const Channel& ch, const Tolerances& tol) {
  const Matrix w = stinespring(ch, tol);
  const int d = ch.dim();
  const int r = static_cast<int>(w.rows()) / d;
  Matrix sources = Matrix::Zero(d * r, d);
  for (int k = 0; k < d; ++k) sources(k * r, k) = 1.0;
  return complete_isometry(sources, w, tol);
}

/************************ named and dephasing channels **********************/

Channel identity_channel(int d) {
  if (d < 1) throw DimensionError("identity_channel: d must be positive");
  return from_kraus({Matrix::Identity(d, d)});
}

Channel completely_dephasing(int d) {
  return dephasing_channel(DephasingChannelC(Matrix::Identity(d, d)));
}

Channel unitary_channel(const Matrix& u, const Tolerances& tol) {
  require_square(u, "unitary_channel");
  if (!is_unitary(u, tol.unit)) {
    throw NotUnitaryError("unitary_channel: matrix is not unitary");
  }
  return from_kraus({u}, tol);
}

Channel dephasing_channel(const DephasingChannelC& dc) {
  const int d = dc.dim();
  const Matrix& c = dc.correlation();
  Matrix jam = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      jam(i * d + i, j * d + j) = c(i, j) / static_cast<double>(d);
  return Channel::from_jamiolkowski(std::move(jam));
}

std::vector<Matrix> dephasing_kraus(
    const DephasingChannelC& dc, const Tolerances& tol) {
  const int d = dc.dim();
  // Gram family from the eigenbasis: psi_i is column i of sqrt(L) V^T.
  const EigenDecomposition eig = herm_eig(dc.correlation(), tol);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  std::vector<Matrix> ks;
  for (int k = 0; k < d; ++k) {
    const double lambda = eig.values(k);
    if (lambda < -tol.psd) throw NotPsdError("correlation matrix is not PSD");
    const double root = lambda > floor ? std::sqrt(lambda) : 0.0;
    Matrix op = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) op(i, i) = root * eig.vectors(i, k);
    if (op.norm() > tol.kraus_prune) ks.push_back(std::move(op));
  }
  return ks;
}

Channel complementary_dephasing(
    const DephasingChannelC& dc, const Tolerances& tol) {
  const int d = dc.dim();
  const Matrix psi = gram_vectors(dc.correlation(), tol);
  Matrix jam = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    Matrix input = Matrix::Zero(d, d);
    input(k, k) = 1.0;
    jam += kron(projector(psi.col(k)), input);
  }
  jam /= static_cast<double>(d);
  return Channel::from_jamiolkowski(std::move(jam), tol);
}

Channel classical_channel(const StochasticMatrix& t) {
  const int d = t.dim();
  Matrix jam = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      jam(i * d + j, i * d + j) = t.matrix()(i, j) / static_cast<double>(d);
  return Channel::from_jamiolkowski(std::move(jam));
}

Channel classical_version(const Channel& ch) {
  Matrix jam = ch.jamiolkowski().diagonal().asDiagonal();
  return Channel::from_jamiolkowski(std::move(jam));
}

StochasticMatrix transition_matrix(const Channel& ch) {
  const int d = ch.dim();
  RealMatrix t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      t(i, j) = static_cast<double>(d) * ch.jamiolkowski()(i * d + j, i * d + j).real();
  return StochasticMatrix(std::move(t));
}

Channel compose(const Channel& a, const Channel& b, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw DimensionError("compose: dimension mismatch");
  return from_superop(superop_matrix(a) * superop_matrix(b), tol);
}

/********************************* sampling *********************************/

Channel random_channel(Rng& rng, int d, int rank) {
  if (d < 1) throw DimensionError("random_channel: d must be positive");
  if (rank < 1 || rank > d * d) {
    throw DimensionError("random_channel: rank must lie in [1, d^2]");
  }
  const Matrix u = haar_unitary(rng, d * rank);
  std::vector<Matrix> ks(rank, Matrix::Zero(d, d));
  for (int m = 0; m < rank; ++m)
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k) ks[m](a, k) = u(a * rank + m, k);
  return from_kraus(std::move(ks));
}

DephasingChannelC random_dephasing(Rng& rng, int d) {
  Matrix psi(d, d);
  for (int i = 0; i < d; ++i) psi.col(i) = random_pure_vector(rng, d);
  Matrix c = (psi.adjoint() * psi).transpose();
  for (int i = 0; i < d; ++i) c(i, i) = 1.0;
  return DephasingChannelC(std::move(c));
}

}  // namespace dephaser::channels
