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
#include <string>
#include <vector>

#include "dephaser/channels.hpp"
#include "dephaser/matcore.hpp"

namespace dephaser::superchannels {

using channels::Channel;
using channels::DephasingChannelC;

/**
 * Schur-product superchannel J(E) -> J(E) o C.
 *
 * C is d^2 x d^2, indexed by pairs (i, k) -> i * d + k exactly like the
 * Jamiolkowski matrix it multiplies. It is a correlation matrix whose
 * diagonal d x d blocks all coincide: C_{ik,il} = C_{0k,0l}.
 *
 * Only `validate` and the constructors built on it produce instances.
 */
class DephasingSuperchannel {
 public:
  int dim() const { return dim_; }
  const Matrix& correlation() const { return c_; }

 private:
  DephasingSuperchannel(int dim, Matrix c) : dim_(dim), c_(std::move(c)) {}
  friend struct Validator;

  int dim_;
  Matrix c_;
};

enum class ViolationKind { kNotPsd, kDiagonalNotOne, kBlocksUnequal };

std::string to_string(ViolationKind kind);

/// A failed invariant. For entry violations, (i, k, j, l) locate the
/// offending entry C_{ik,jl}; BLOCKS_UNEQUAL compares it against block
/// `reference_block` (the i0 of the pair). NOT_PSD carries no location and
/// `magnitude` is the smallest eigenvalue.
struct Violation {
  ViolationKind kind;
  int i = -1;
  int k = -1;
  int j = -1;
  int l = -1;
  int reference_block = -1;
  double magnitude = 0.0;

  std::string describe() const;
};

/// A channel whose Schur image fails trace preservation.
struct Witness {
  Violation violation;
  Channel channel;
  /// max-norm of Tr_1(J(E) o C) - 1/d.
  double defect;
};

struct ValidationResult {
  std::optional<DephasingSuperchannel> superchannel;
  /// Entry violations in lexicographic (i, k, j, l) order, then NOT_PSD.
  std::vector<Violation> violations;
  /// Witness for the first entry violation, when there is one.
  std::optional<Witness> witness;

  bool ok() const { return superchannel.has_value(); }
};

ValidationResult validate(const Matrix& c, int d, const Tolerances& tol = {});
/// validate() that throws InvalidSuperchannelError on failure.
DephasingSuperchannel make_superchannel(
    const Matrix& c, int d, const Tolerances& tol = {});
DephasingSuperchannel identity_superchannel(int d);

Witness witness(
    const Matrix& c, int d, const Violation& violation,
    const Tolerances& tol = {});

Channel apply(const DephasingSuperchannel& sc, const Channel& ch,
              const Tolerances& tol = {});

/// d^4 x d^4 Jamiolkowski matrix of the supermap.
Matrix super_jamiolkowski(const DephasingSuperchannel& sc);
/// J(Xi[E]) = d^2 Tr_2(J_Xi (1 (x) J(E)^T)).
Matrix apply_super_jamiolkowski(const Matrix& super_jam, const Channel& ch);

/// Unitaries of size d^2 realizing the superchannel with a d^2 memory:
/// C_{ik,jl} = <0| U_l^dagger V_j^dagger V_i U_k |0>.
struct SuperRealization {
  std::vector<Matrix> us;
  std::vector<Matrix> vs;
};

SuperRealization realize(
    const DephasingSuperchannel& sc, const Tolerances& tol = {});
DephasingSuperchannel from_unitaries(
    const std::vector<Matrix>& us, const std::vector<Matrix>& vs,
    const Tolerances& tol = {});

/// from_unitaries() on Haar-random unitaries. This is one convenient
/// distribution over valid superchannels, not a uniform one.
DephasingSuperchannel sample(Rng& rng, int d);

enum class MemoryLabel { kProduct, kPpt, kNpt };

std::string to_string(MemoryLabel label);

struct MemoryClass {
  MemoryLabel label;
  double ppt_min_eig;
  double product_residual;
  /// sigma_2 / sigma_1 of the realigned C.
  double singular_ratio;
  /// Best product factors: C ~ post (x) pre.
  Matrix post_factor;
  Matrix pre_factor;
};

MemoryClass memory_class(
    const DephasingSuperchannel& sc, const Tolerances& tol = {});

/// Pre-processing by D_{c1} and post-processing by D_{c2}: C = c2 (x) c1.
DephasingSuperchannel pre_post(
    const DephasingChannelC& c1, const DephasingChannelC& c2);

/// tilde C_{ij} = C_{ii,jj}.
DephasingChannelC tilde_c(const DephasingSuperchannel& sc);
/// Xi_C[D_{C'}] = D_{C' o tilde C}.
DephasingChannelC act_on_dephasing(
    const DephasingSuperchannel& sc, const DephasingChannelC& dc);

/// max-norm of Tr_1(jam) - 1/d, the trace-preservation defect.
double tp_defect(const Matrix& jam, int d);

}  // namespace dephaser::superchannels
