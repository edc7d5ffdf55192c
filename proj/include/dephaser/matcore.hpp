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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dephaser/errors.hpp"

namespace dephaser {

using Complex = std::complex<double>;
/// Dense complex matrix, the carrier for states, channels and correlation
/// matrices. Bipartite index (a, b) maps to a * dimB + b.
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Numerical tolerances shared by every module. Defaults are tuned for
/// double precision at d <= 4.
struct Tolerances {
  double herm = 1e-10;   // Hermiticity, max-norm of m - m^dagger
  double eig = 1e-10;    // decomposition residual
  double unit = 1e-10;   // unitarity, max-norm of U^dagger U - 1
  double psd = 1e-9;     // slack on the smallest eigenvalue
  double tp = 1e-9;      // trace preservation / unit diagonal
  double gram = 1e-9;    // Gram matrix agreement in complete_isometry
  double pivot = 1e-9;   // residual norm threshold for orthogonalization
  double kraus_prune = 1e-12;
};

/// Side lengths of a bipartite square matrix.
struct BipartiteShape {
  int dim_a;
  int dim_b;

  int total() const { return dim_a * dim_b; }
};

enum class Subsystem { kFirst, kSecond };

/// Seeded random stream. Identical seeds give identical streams on every
/// platform: the engine is mt19937_64 and all distributions are derived
/// from its raw output here rather than through <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  double normal();
  /// Standard complex normal: real and imaginary parts of variance 1/2.
  Complex complex_normal();

  /// Independent stream for task `index` (seed + index).
  Rng derive(std::uint64_t index) const { return Rng(seed_ + index); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

// Elementary operations.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix schur(const Matrix& a, const Matrix& b);
Matrix partial_trace(const Matrix& m, BipartiteShape shape, Subsystem which);
Matrix partial_transpose(
    const Matrix& m, BipartiteShape shape, Subsystem which);
/// out((i,j),(k,l)) = in((i,k),(j,l)) for a d^2 x d^2 input.
Matrix reshuffle(const Matrix& m, int d);

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);
bool is_unitary(const Matrix& m, double tol);

EigenDecomposition herm_eig(const Matrix& m, const Tolerances& tol = {});
double min_eigenvalue(const Matrix& m, const Tolerances& tol = {});
bool is_psd(const Matrix& m, double tol = Tolerances{}.psd);

/// Hermitian square root of a PSD matrix. Eigenvalues in [-psd, 0) are
/// clipped; anything more negative throws NotPsdError.
Matrix psd_sqrt(const Matrix& m, const Tolerances& tol = {});

/// Vectors |v_i> with <v_j|v_i> = c_ij. Returned as the columns of the
/// result, each of length n.
Matrix gram_vectors(const Matrix& c, const Tolerances& tol = {});

/// Unitary W with W * sources.col(k) == targets.col(k). Both collections
/// must share a Gram matrix. Orthogonal complements are completed from
/// the standard basis in index order, so the output is deterministic.
Matrix complete_isometry(
    const Matrix& sources, const Matrix& targets, const Tolerances& tol = {});

Matrix haar_unitary(Rng& rng, int d);
/// Random density matrix. The mixed case traces out a d-dimensional
/// partner of a Haar-random pure state on d x d.
Matrix random_state(Rng& rng, int d, bool pure);
Vector random_pure_vector(Rng& rng, int d);

Matrix projector(const Vector& v);
/// Row-major vectorization: vec(m)[i * cols + j] = m(i, j).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

void require_square(const Matrix& m, const char* what);

}  // namespace dephaser
