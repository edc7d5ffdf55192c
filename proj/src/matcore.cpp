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

#include "dephaser/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dephaser {

/******************************** Rng ***************************************/

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw DimensionError("uniform_int: empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

/************************** elementary operations ***************************/

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(
        std::string(what) + ": expected a non-empty square matrix, got " +
        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

namespace {

void require_shape(const Matrix& m, BipartiteShape shape, const char* what) {
  require_square(m, what);
  if (shape.dim_a <= 0 || shape.dim_b <= 0 || shape.total() != m.rows()) {
    throw DimensionError(
        std::string(what) + ": shape " + std::to_string(shape.dim_a) + "x" +
        std::to_string(shape.dim_b) + " does not match matrix of size " +
        std::to_string(m.rows()));
  }
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix schur(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("schur: dimension mismatch");
  }
  return a.cwiseProduct(b);
}

Matrix partial_trace(const Matrix& m, BipartiteShape shape, Subsystem which) {
  require_shape(m, shape, "partial_trace");
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  if (which == Subsystem::kFirst) {
    Matrix out = Matrix::Zero(db, db);
    for (int a = 0; a < da; ++a) out += m.block(a * db, a * db, db, db);
    return out;
  }
  Matrix out(da, da);
  for (int a = 0; a < da; ++a) {
    for (int a2 = 0; a2 < da; ++a2) {
      out(a, a2) = m.block(a * db, a2 * db, db, db).trace();
    }
  }
  return out;
}

Matrix partial_transpose(
    const Matrix& m, BipartiteShape shape, Subsystem which) {
  require_shape(m, shape, "partial_transpose");
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  Matrix out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a) {
    for (int a2 = 0; a2 < da; ++a2) {
      if (which == Subsystem::kSecond) {
        out.block(a * db, a2 * db, db, db) =
            m.block(a * db, a2 * db, db, db).transpose();
      } else {
        out.block(a * db, a2 * db, db, db) = m.block(a2 * db, a * db, db, db);
      }
    }
  }
  return out;
}

Matrix reshuffle(const Matrix& m, int d) {
  if (d <= 0 || m.rows() != d * d || m.cols() != d * d) {
    throw DimensionError("reshuffle: matrix is not d^2 x d^2");
  }
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out(i * d + j, k * d + l) = m(i * d + k, j * d + l);
  return out;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <=
         tol;
}

/**************************** decompositions ********************************/

EigenDecomposition herm_eig(const Matrix& m, const Tolerances& tol) {
  require_square(m, "herm_eig");
  if (!is_hermitian(m, tol.herm)) {
    throw NotHermitianError(
        "herm_eig: matrix deviates from Hermitian by " +
        std::to_string(max_abs(m - m.adjoint())));
  }
  const Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& m, const Tolerances& tol) {
  require_square(m, "min_eigenvalue");
  if (!is_hermitian(m, tol.herm)) {
    throw NotHermitianError("min_eigenvalue: matrix is not Hermitian");
  }
  const Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_psd(const Matrix& m, double tol) {
  return min_eigenvalue(m) >= -tol;
}

Matrix psd_sqrt(const Matrix& m, const Tolerances& tol) {
  EigenDecomposition eig = herm_eig(m, tol);
  if (eig.values(0) < -tol.psd) {
    throw NotPsdError(
        "psd_sqrt: smallest eigenvalue " + std::to_string(eig.values(0)));
  }
  // Eigenvalues at round-off level would turn into sqrt-sized noise.
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() *
      std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  RealVector roots = eig.values.unaryExpr([floor](double v) {
    return v > floor ? std::sqrt(v) : 0.0;
  });
  return eig.vectors * roots.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

Matrix gram_vectors(const Matrix& c, const Tolerances& tol) {
  // Column i of (sqrt C)^T is row i of sqrt C; then
  // <v_j|v_i> = sum_k conj(S_jk) S_ik = (S S)_ij = C_ij.
  return psd_sqrt(c, tol).transpose();
}

namespace {

// Orthonormal vectors are appended to `basis` (as columns, first `count`
// used). Two passes of Gram-Schmidt keep the result orthonormal to machine
// precision even for residuals close to the pivot threshold.
Vector orthogonalize(const Matrix& basis, int count, Vector v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int m = 0; m < count; ++m) {
      v -= basis.col(m) * basis.col(m).dot(v);
    }
  }
  return v;
}

void complete_basis(Matrix& basis, int& count, double pivot) {
  const int n = static_cast<int>(basis.rows());
  for (int idx = 0; idx < n && count < n; ++idx) {
    Vector unit = Vector::Zero(n);
    unit(idx) = 1.0;
    Vector r = orthogonalize(basis, count, unit);
    const double norm = r.norm();
    if (norm > pivot) basis.col(count++) = r / norm;
  }
  if (count < n) {
    throw DimensionError("complete_isometry: basis completion failed");
  }
}

}  // namespace

Matrix complete_isometry(
    const Matrix& sources, const Matrix& targets, const Tolerances& tol) {
  if (sources.rows() != targets.rows() || sources.cols() != targets.cols()) {
    throw DimensionError("complete_isometry: collections differ in shape");
  }
  const int n = static_cast<int>(sources.rows());
  const int count_in = static_cast<int>(sources.cols());
  if (n == 0) throw DimensionError("complete_isometry: empty ambient space");

  const Matrix gram_s = sources.adjoint() * sources;
  const Matrix gram_t = targets.adjoint() * targets;
  const double mismatch = max_abs(gram_s - gram_t);
  if (mismatch > tol.gram) {
    throw GramMismatchError(
        "complete_isometry: Gram matrices differ by " +
        std::to_string(mismatch));
  }

  Matrix res_s = sources;
  Matrix res_t = targets;
  Matrix basis_s = Matrix::Zero(n, n);
  Matrix basis_t = Matrix::Zero(n, n);
  std::vector<bool> used(count_in, false);
  int rank = 0;
  while (rank < n) {
    int best = -1;
    double best_norm = tol.pivot;
    for (int k = 0; k < count_in; ++k) {
      if (used[k]) continue;
      const double norm = res_s.col(k).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = k;
      }
    }
    if (best < 0) break;
    used[best] = true;
    Vector e = orthogonalize(basis_s, rank, res_s.col(best));
    Vector f = orthogonalize(basis_t, rank, res_t.col(best));
    e /= e.norm();
    f /= f.norm();
    for (int k = 0; k < count_in; ++k) {
      if (used[k]) continue;
      res_s.col(k) -= e * e.dot(res_s.col(k));
      res_t.col(k) -= f * f.dot(res_t.col(k));
    }
    basis_s.col(rank) = e;
    basis_t.col(rank) = f;
    ++rank;
  }

  int count_s = rank;
  int count_t = rank;
  complete_basis(basis_s, count_s, tol.pivot);
  complete_basis(basis_t, count_t, tol.pivot);
  return basis_t * basis_s.adjoint();
}

/******************************** sampling **********************************/

Matrix haar_unitary(Rng& rng, int d) {
  if (d < 1) throw DimensionError("haar_unitary: d must be positive");
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    q.col(j) *= (mag > 0.0) ? diag / mag : Complex(1.0);
  }
  return q;
}

Vector random_pure_vector(Rng& rng, int d) {
  if (d < 1) throw DimensionError("random_pure_vector: d must be positive");
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

Matrix random_state(Rng& rng, int d, bool pure) {
  if (d < 1) throw DimensionError("random_state: d must be positive");
  if (pure) return projector(random_pure_vector(rng, d));
  const Vector psi = random_pure_vector(rng, d * d);
  Matrix rho =
      partial_trace(projector(psi), {d, d}, Subsystem::kSecond);
  rho = (rho + rho.adjoint()) / 2.0;
  return rho / rho.trace().real();
}

/********************************* helpers **********************************/

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Vector vec(const Matrix& m) {
  Vector out(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
  return out;
}

Matrix unvec(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw DimensionError("unvec: length mismatch");
  }
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  return out;
}

}  // namespace dephaser
