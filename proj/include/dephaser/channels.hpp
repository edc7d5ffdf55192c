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

#include <optional>
#include <vector>

#include "dephaser/matcore.hpp"

namespace dephaser::channels {

/**
 * A CPTP map on a d-dimensional system, stored as its Jamiolkowski matrix
 *
 *   J_{ik,jl} = (1/d) <i| E(|k><l|) |j>,
 *
 * i.e. J = E (x) I (|Psi><Psi|) with the output factor first and the input
 * copy second. Row index i * d + k means output i, input k. The trace of J
 * is one and Tr_1 J = 1/d.
 *
 * Instances are immutable and always satisfy complete positivity and trace
 * preservation within the tolerances they were built with.
 */
class Channel {
 public:
  static Channel from_jamiolkowski(Matrix jam, const Tolerances& tol = {});

  int dim() const { return dim_; }
  const Matrix& jamiolkowski() const { return jam_; }
  /// Kraus operators the channel was built from, if any.
  const std::optional<std::vector<Matrix>>& cached_kraus() const {
    return kraus_;
  }

 private:
  Channel(int dim, Matrix jam, std::optional<std::vector<Matrix>> kraus)
      : dim_(dim), jam_(std::move(jam)), kraus_(std::move(kraus)) {}

  friend Channel from_kraus(std::vector<Matrix> ks, const Tolerances& tol);

  int dim_;
  Matrix jam_;
  std::optional<std::vector<Matrix>> kraus_;
};

/// Correlation matrix C (Hermitian, PSD, unit diagonal) of the dephasing
/// channel rho -> rho o C.
class DephasingChannelC {
 public:
  explicit DephasingChannelC(Matrix c, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(c_.rows()); }
  const Matrix& correlation() const { return c_; }

 private:
  Matrix c_;
};

/// Column-stochastic matrix: t(i, j) is the probability of j -> i.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(RealMatrix t, double tol = Tolerances{}.tp);

  int dim() const { return static_cast<int>(t_.rows()); }
  const RealMatrix& matrix() const { return t_; }

 private:
  RealMatrix t_;
};

/// Checks the invariants of a Jamiolkowski matrix and reports the first
/// failure; std::nullopt means the matrix is a valid CPTP channel.
std::optional<std::string> cptp_violation(
    const Matrix& jam, int d, const Tolerances& tol = {});

Channel from_kraus(std::vector<Matrix> ks, const Tolerances& tol = {});
/// Kraus operators from the eigendecomposition of d * J. Operators with
/// eigenvalue below tol.kraus_prune are dropped, so the count is the rank.
std::vector<Matrix> to_kraus(const Channel& ch, const Tolerances& tol = {});

/// E(rho) = d Tr_2(J (1 (x) rho^T)).
Matrix apply(const Channel& ch, const Matrix& rho, const Tolerances& tol = {});
/// sum_i K_i rho K_i^dagger using cached or extracted Kraus operators.
Matrix apply_kraus(
    const Channel& ch, const Matrix& rho, const Tolerances& tol = {});
/// (E (x) I)(rho) for rho on d * dim_b. No state validation.
Matrix apply_extended(const Channel& ch, const Matrix& rho, int dim_b);
/// (E^dagger (x) I)(x), the Heisenberg-picture adjoint.
Matrix apply_adjoint_extended(const Channel& ch, const Matrix& x, int dim_b);

/// Phi = d * reshuffle(J); Phi * vec(rho) = vec(E(rho)) with row-major vec.
Matrix superop_matrix(const Channel& ch);
Channel from_superop(const Matrix& phi, const Tolerances& tol = {});

/// Isometry W = sum_i K_i (x) |i>_env of size (d * r) x d, r = Kraus rank.
Matrix stinespring(const Channel& ch, const Tolerances& tol = {});
/// Unitary on d * r whose first-input-column block (ancilla |0>) equals
/// the Stinespring isometry: U (|k> (x) |0>) = W |k>.
Matrix stinespring_unitary(const Channel& ch, const Tolerances& tol = {});

Channel identity_channel(int d);
/// The completely dephasing channel Delta.
Channel completely_dephasing(int d);
Channel unitary_channel(const Matrix& u, const Tolerances& tol = {});

Channel dephasing_channel(const DephasingChannelC& dc);
/// K_k = sum_i <k|psi_i> |i><i| with psi_i the Gram vectors of C; zero
/// operators are pruned.
std::vector<Matrix> dephasing_kraus(
    const DephasingChannelC& dc, const Tolerances& tol = {});
/// rho -> sum_i rho_ii |psi_i><psi_i|.
Channel complementary_dephasing(
    const DephasingChannelC& dc, const Tolerances& tol = {});

Channel classical_channel(const StochasticMatrix& t);
/// Delta o E o Delta; zeroes every off-diagonal entry of J.
Channel classical_version(const Channel& ch);
StochasticMatrix transition_matrix(const Channel& ch);

/// a o b: b acts first.
Channel compose(const Channel& a, const Channel& b, const Tolerances& tol = {});

/// Channel from the first d columns of a Haar unitary of size d * rank.
Channel random_channel(Rng& rng, int d, int rank);
/// C_ij = <psi_j|psi_i> for Haar-random unit vectors psi_i.
DephasingChannelC random_dephasing(Rng& rng, int d);

bool is_density_matrix(const Matrix& rho, const Tolerances& tol = {});

}  // namespace dephaser::channels
