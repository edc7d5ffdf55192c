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

#pragma once

#include <cmath>
#include <string>

#include "dephaser/channels.hpp"
#include "dephaser/io.hpp"
#include "dephaser/matcore.hpp"
#include "dephaser/superchannels.hpp"

namespace testing {

using dephaser::Complex;
using dephaser::Matrix;
using dephaser::RealMatrix;
using dephaser::RealVector;
using dephaser::Rng;
using dephaser::Vector;

inline std::string fixture(const std::string& name) {
  return std::string(DEPHASER_FIXTURE_DIR) + "/" + name;
}

inline Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

inline Matrix random_hermitian(Rng& rng, int n) {
  const Matrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Matrix ket_bra(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

inline Vector plus_minus(double sign) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), sign / std::sqrt(2.0);
  return v;
}

/// J_{ik,jl} = (1/d) <i| E(|k><l|) |j> evaluated entry by entry from a
/// Kraus list.
inline Matrix jamiolkowski_by_loops(const std::vector<Matrix>& ks) {
  const int d = static_cast<int>(ks[0].rows());
  Matrix jam = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Matrix out = Matrix::Zero(d, d);
      for (const Matrix& kr : ks) out += kr * ket_bra(d, k, l) * kr.adjoint();
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) jam(i * d + k, j * d + l) = out(i, j) / double(d);
    }
  return jam;
}

/// Direct Kraus-sum evaluation.
inline Matrix kraus_sum(const std::vector<Matrix>& ks, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& k : ks) out += k * rho * k.adjoint();
  return out;
}

inline dephaser::superchannels::DephasingSuperchannel load_superchannel(
    const std::string& name) {
  const auto [c, d] =
      dephaser::io::correlation_from_json(dephaser::io::read_file(fixture(name)));
  return dephaser::superchannels::make_superchannel(c, d);
}

inline dephaser::channels::Channel load_channel(const std::string& name) {
  return dephaser::io::channel_from_json(dephaser::io::read_file(fixture(name)));
}

/// Nearest correlation-like matrix: clip negative eigenvalues, then
/// rescale to unit diagonal.
inline Matrix project_to_correlation(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  const RealVector values = solver.eigenvalues().cwiseMax(0.0);
  Matrix psd = solver.eigenvectors() * values.cast<Complex>().asDiagonal() *
               solver.eigenvectors().adjoint();
  Vector scale(psd.rows());
  for (Eigen::Index i = 0; i < psd.rows(); ++i) {
    scale(i) = 1.0 / std::sqrt(psd(i, i).real());
  }
  psd = scale.asDiagonal() * psd * scale.asDiagonal();
  for (Eigen::Index i = 0; i < psd.rows(); ++i) psd(i, i) = 1.0;
  return psd;
}

}  // namespace testing
