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

#include "dephaser/superchannels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace dephaser::superchannels {

struct Validator {
  /// Accepted matrices are stored with an exact unit diagonal.
  static DephasingSuperchannel make(int d, Matrix c) {
    c.diagonal().setOnes();
    return DephasingSuperchannel(d, std::move(c));
  }
};

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNotPsd:
      return "NOT_PSD";
    case ViolationKind::kDiagonalNotOne:
      return "DIAGONAL_NOT_ONE";
    case ViolationKind::kBlocksUnequal:
      return "BLOCKS_UNEQUAL";
  }
  return "UNKNOWN";
}

std::string to_string(MemoryLabel label) {
  switch (label) {
    case MemoryLabel::kProduct:
      return "PRODUCT";
    case MemoryLabel::kPpt:
      return "PPT";
    case MemoryLabel::kNpt:
      return "NPT";
  }
  return "UNKNOWN";
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case ViolationKind::kNotPsd:
      out << ": smallest eigenvalue " << magnitude;
      break;
    case ViolationKind::kDiagonalNotOne:
      out << ": C[(" << i << "," << k << "),(" << j << "," << l
          << ")] deviates from 1 by " << magnitude;
      break;
    case ViolationKind::kBlocksUnequal:
      out << ": C[(" << i << "," << k << "),(" << j << "," << l
          << ")] differs from block " << reference_block << " by "
          << magnitude;
      break;
  }
  return out.str();
}

double tp_defect(const Matrix& jam, int d) {
  const Matrix marginal = partial_trace(jam, {d, d}, Subsystem::kFirst);
  return max_abs(marginal - Matrix::Identity(d, d) / static_cast<double>(d));
}

/******************************* validation *********************************/

namespace {

void require_size(const Matrix& c, int d, const char* what) {
  if (d < 1 || c.rows() != d * d || c.cols() != d * d) {
    throw DimensionError(std::string(what) + ": C must be d^2 x d^2");
  }
}

Matrix witness_jamiolkowski(const Violation& v, int d) {
  const double dd = static_cast<double>(d);
  if (v.kind == ViolationKind::kDiagonalNotOne) {
    // d J = |j><j| (x) 1: the constant channel preparing |j>.
    Matrix out = Matrix::Zero(d, d);
    out(v.i, v.i) = 1.0;
    return kron(out, Matrix::Identity(d, d)) / dd;
  }
  // d^2 J = 1 + (|i0><i0| - |i1><i1|) (x) (|k><l| + |l><k|). The 1/d^2
  // normalization is what makes this trace preserving.
  Matrix outer = Matrix::Zero(d, d);
  outer(v.reference_block, v.reference_block) = 1.0;
  outer(v.i, v.i) = -1.0;
  Matrix inner = Matrix::Zero(d, d);
  inner(v.k, v.l) = 1.0;
  inner(v.l, v.k) = 1.0;
  return (Matrix::Identity(d * d, d * d) + kron(outer, inner)) / (dd * dd);
}

}  // namespace

Witness witness(
    const Matrix& c, int d, const Violation& violation, const Tolerances& tol) {
  require_size(c, d, "witness");
  auto in_range = [d](int x) { return x >= 0 && x < d; };
  bool violated = false;
  switch (violation.kind) {
    case ViolationKind::kDiagonalNotOne:
      if (!in_range(violation.i) || !in_range(violation.k)) break;
      violated =
          std::abs(c(violation.i * d + violation.k,
                     violation.i * d + violation.k) - 1.0) > tol.tp;
      break;
    case ViolationKind::kBlocksUnequal: {
      const int i0 = violation.reference_block;
      const int i1 = violation.i;
      const int k = violation.k;
      const int l = violation.l;
      if (!in_range(i0) || !in_range(i1) || !in_range(k) || !in_range(l) ||
          i0 == i1 || k == l) {
        break;
      }
      violated = std::abs(c(i0 * d + k, i0 * d + l) -
                          c(i1 * d + k, i1 * d + l)) > tol.tp;
      break;
    }
    case ViolationKind::kNotPsd:
      throw Error("witness: NOT_PSD violations have no trace witness");
  }
  if (!violated) {
    throw Error(
        "witness: matrix does not violate " + violation.describe());
  }
  Channel ch =
      Channel::from_jamiolkowski(witness_jamiolkowski(violation, d), tol);
  const double defect = tp_defect(schur(ch.jamiolkowski(), c), d);
  return Witness{violation, std::move(ch), defect};
}

ValidationResult validate(const Matrix& c, int d, const Tolerances& tol) {
  require_size(c, d, "validate");
  if (!c.allFinite()) throw DimensionError("validate: non-finite entries");
  if (!is_hermitian(c, tol.herm)) {
    throw NotHermitianError("validate: C is not Hermitian");
  }

  ValidationResult result;
  for (int a = 0; a < d; ++a) {
    for (int k = 0; k < d; ++k) {
      const double dev = std::abs(c(a * d + k, a * d + k) - 1.0);
      if (dev > tol.tp) {
        result.violations.push_back(
            {ViolationKind::kDiagonalNotOne, a, k, a, k, -1, dev});
      }
    }
  }
  for (int a = 1; a < d; ++a) {
    for (int k = 0; k < d; ++k) {
      for (int l = k + 1; l < d; ++l) {
        const double dev =
            std::abs(c(a * d + k, a * d + l) - c(k, l));
        if (dev > tol.tp) {
          result.violations.push_back(
              {ViolationKind::kBlocksUnequal, a, k, a, l, 0, dev});
        }
      }
    }
  }
  std::sort(result.violations.begin(), result.violations.end(),
            [](const Violation& x, const Violation& y) {
              return std::tie(x.i, x.k, x.j, x.l) <
                     std::tie(y.i, y.k, y.j, y.l);
            });
  if (!result.violations.empty()) {
    result.witness = witness(c, d, result.violations.front(), tol);
  }
  const double lowest = min_eigenvalue(c, tol);
  if (lowest < -tol.psd) {
    result.violations.push_back(
        {ViolationKind::kNotPsd, -1, -1, -1, -1, -1, lowest});
  }
  if (result.violations.empty()) {
    result.superchannel = Validator::make(d, c);
  }
  return result;
}

DephasingSuperchannel make_superchannel(
    const Matrix& c, int d, const Tolerances& tol) {
  ValidationResult result = validate(c, d, tol);
  if (!result.ok()) {
    throw InvalidSuperchannelError(
        "invalid dephasing superchannel: " +
        result.violations.front().describe());
  }
  return std::move(*result.superchannel);
}

DephasingSuperchannel identity_superchannel(int d) {
  return make_superchannel(Matrix::Ones(d * d, d * d), d);
}

/********************************* action ***********************************/

Channel apply(const DephasingSuperchannel& sc, const Channel& ch,
              const Tolerances& tol) {
  if (sc.dim() != ch.dim()) throw DimensionError("apply: dimension mismatch");
  return Channel::from_jamiolkowski(
      schur(ch.jamiolkowski(), sc.correlation()), tol);
}

Matrix super_jamiolkowski(const DephasingSuperchannel& sc) {
  const int d = sc.dim();
  const int n = d * d;
  const Matrix& c = sc.correlation();
  Matrix out = Matrix::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out(a * n + a, b * n + b) = c(a, b) / static_cast<double>(n);
  return out;
}

Matrix apply_super_jamiolkowski(const Matrix& super_jam, const Channel& ch) {
  const int n = ch.dim() * ch.dim();
  if (super_jam.rows() != n * n || super_jam.cols() != n * n) {
    throw DimensionError("apply_super_jamiolkowski: dimension mismatch");
  }
  const Matrix lifted =
      super_jam * kron(Matrix::Identity(n, n), ch.jamiolkowski().transpose());
  return static_cast<double>(n) *
         partial_trace(lifted, {n, n}, Subsystem::kSecond);
}

/****************************** realization *********************************/

SuperRealization realize(const DephasingSuperchannel& sc, const Tolerances& tol) {
  const int d = sc.dim();
  const int n = d * d;
  // Column i * d + k holds xi_{ik}.
  const Matrix xi = gram_vectors(sc.correlation(), tol);
  const Matrix first_block = xi.leftCols(d);

  SuperRealization out;
  for (int i = 0; i < d; ++i) {
    out.vs.push_back(
        complete_isometry(first_block, xi.middleCols(i * d, d), tol));
  }
  Vector fiducial = Vector::Zero(n);
  fiducial(0) = 1.0;
  for (int k = 0; k < d; ++k) {
    out.us.push_back(complete_isometry(fiducial, xi.col(k), tol));
  }
  return out;
}

DephasingSuperchannel from_unitaries(
    const std::vector<Matrix>& us, const std::vector<Matrix>& vs,
    const Tolerances& tol) {
  const int d = static_cast<int>(us.size());
  const int n = d * d;
  if (d < 1 || vs.size() != us.size()) {
    throw DimensionError("from_unitaries: need d unitaries in each family");
  }
  for (const auto* family : {&us, &vs}) {
    for (const Matrix& u : *family) {
      if (u.rows() != n || u.cols() != n) {
        throw DimensionError("from_unitaries: unitaries must be d^2 x d^2");
      }
      if (!is_unitary(u, tol.unit)) {
        throw NotUnitaryError("from_unitaries: matrix is not unitary");
      }
    }
  }
  Matrix w(n, n);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) w.col(i * d + k) = vs[i] * us[k].col(0);
  // C_{ik,jl} = <w_jl|w_ik>.
  Matrix c = (w.adjoint() * w).transpose();
  c = (c + c.adjoint()) / 2.0;
  return make_superchannel(c, d, tol);
}

DephasingSuperchannel sample(Rng& rng, int d) {
  if (d < 2) throw DimensionError("sample: d must be at least 2");
  std::vector<Matrix> us;
  std::vector<Matrix> vs;
  for (int k = 0; k < d; ++k) us.push_back(haar_unitary(rng, d * d));
  for (int i = 0; i < d; ++i) vs.push_back(haar_unitary(rng, d * d));
  return from_unitaries(us, vs);
}

/************************** memory classification ***************************/

namespace {

Matrix nearest_correlation(const Matrix& m) {
  const Matrix herm = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
  Matrix psd = solver.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
               solver.eigenvectors().adjoint();
  RealVector scale = psd.diagonal().real();
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    scale(i) = scale(i) > 0.0 ? 1.0 / std::sqrt(scale(i)) : 0.0;
  }
  psd = scale.cast<Complex>().asDiagonal() * psd *
        scale.cast<Complex>().asDiagonal();
  for (Eigen::Index i = 0; i < psd.rows(); ++i) psd(i, i) = 1.0;
  return psd;
}

}  // namespace

MemoryClass memory_class(const DephasingSuperchannel& sc, const Tolerances& tol) {
  const int d = sc.dim();
  const Matrix& c = sc.correlation();
  MemoryClass out;
  out.ppt_min_eig = min_eigenvalue(
      partial_transpose(c, {d, d}, Subsystem::kSecond), tol);

  // Realignment sends c2 (x) c1 to vec(c2) vec(c1)^T.
  const Matrix realigned = reshuffle(c, d);
  Eigen::JacobiSVD<Matrix> svd(
      realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  out.singular_ratio = sigma.size() > 1 && sigma(0) > 0.0
                           ? sigma(1) / sigma(0)
                           : 0.0;
  Matrix post = unvec(svd.matrixU().col(0), d, d);
  Matrix pre = unvec(svd.matrixV().col(0).conjugate(), d, d);
  Complex scale = post.trace() / static_cast<double>(d);
  if (std::abs(scale) < 1e-12) scale = 1.0;
  post /= scale;
  pre *= sigma(0) * scale;
  out.post_factor = nearest_correlation(post);
  out.pre_factor = nearest_correlation(pre);
  out.product_residual =
      (c - kron(out.post_factor, out.pre_factor)).norm();

  if (out.ppt_min_eig < -tol.psd) {
    out.label = MemoryLabel::kNpt;
  } else if (out.singular_ratio < 1e-9 && out.product_residual <= tol.psd) {
    out.label = MemoryLabel::kProduct;
  } else {
    out.label = MemoryLabel::kPpt;
  }
  return out;
}

/************************ pre/post and dephasing action *********************/

DephasingSuperchannel pre_post(
    const DephasingChannelC& c1, const DephasingChannelC& c2) {
  if (c1.dim() != c2.dim()) throw DimensionError("pre_post: dimension mismatch");
  return make_superchannel(
      kron(c2.correlation(), c1.correlation()), c1.dim());
}

DephasingChannelC tilde_c(const DephasingSuperchannel& sc) {
  const int d = sc.dim();
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(i, j) = sc.correlation()(i * d + i, j * d + j);
  return DephasingChannelC(std::move(out));
}

DephasingChannelC act_on_dephasing(
    const DephasingSuperchannel& sc, const DephasingChannelC& dc) {
  if (sc.dim() != dc.dim()) {
    throw DimensionError("act_on_dephasing: dimension mismatch");
  }
  return DephasingChannelC(
      schur(dc.correlation(), tilde_c(sc).correlation()));
}

}  // namespace dephaser::superchannels
