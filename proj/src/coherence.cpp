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

#include "dephaser/coherence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace dephaser::coherence {

std::string to_string(CoherenceMeasure m) {
  return m == CoherenceMeasure::kL1 ? "L1" : "REL_ENT";
}

std::optional<CoherenceMeasure> parse_measure(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "l1") return CoherenceMeasure::kL1;
  if (lower == "rel_ent") return CoherenceMeasure::kRelEnt;
  return std::nullopt;
}

namespace {

double entropy_of(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 1e-15) s -= p(i) * std::log2(p(i));
  }
  return s;
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0)) return false;
  return true;
}

double coherence_unchecked(
    const Matrix& rho, CoherenceMeasure m, const Tolerances& tol) {
  if (is_diagonal(rho)) return 0.0;
  if (m == CoherenceMeasure::kL1) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
      for (Eigen::Index j = 0; j < rho.cols(); ++j)
        if (i != j) sum += std::abs(rho(i, j));
    return sum;
  }
  const RealVector diag = rho.diagonal().real().cwiseMax(0.0);
  const double value = entropy_of(diag) - von_neumann_entropy(rho, tol);
  return std::max(0.0, value);
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

void require_density(const Matrix& rho, const char* what,
                     const Tolerances& tol) {
  if (!channels::is_density_matrix(rho, tol)) {
    throw InvalidStateError(std::string(what) + ": not a density matrix");
  }
}

}  // namespace

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol) {
  return entropy_of(herm_eig(rho, tol).values.cwiseMax(0.0));
}

double state_coherence(
    const Matrix& rho, CoherenceMeasure m, const Tolerances& tol) {
  require_density(rho, "state_coherence", tol);
  return coherence_unchecked(rho, m, tol);
}

double cohering_power(
    const Channel& ch, CoherenceMeasure m, const Tolerances& tol) {
  const int d = ch.dim();
  double best = 0.0;
  for (int k = 0; k < d; ++k) {
    Matrix basis = Matrix::Zero(d, d);
    basis(k, k) = 1.0;
    const Matrix out = hermitian_part(channels::apply(ch, basis, tol));
    best = std::max(best, coherence_unchecked(out, m, tol));
  }
  return best;
}

/************************ hypothesis-testing divergence *********************/

namespace {

struct Spectrum {
  RealVector values;
  Matrix vectors;
};

Spectrum spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Tr(P rho) for P the projector onto the columns of `vectors` selected by
// `keep`.
template <typename Keep>
double weight(const Spectrum& s, const Matrix& rho, Keep keep) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (keep(s.values(i))) {
      total += (s.vectors.col(i).adjoint() * rho * s.vectors.col(i))(0, 0).real();
    }
  }
  return total;
}

double boundary_width(const Matrix& rho, const Matrix& sigma, double t) {
  return 1e-10 * std::max(1.0, rho.norm() + t * sigma.norm());
}

}  // namespace

double hypothesis_test_divergence(
    const Matrix& rho, const Matrix& sigma, double eps,
    const Tolerances& tol) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("hypothesis_test_divergence: dimension mismatch");
  }
  require_density(rho, "hypothesis_test_divergence", tol);
  require_density(sigma, "hypothesis_test_divergence", tol);
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw Error("hypothesis_test_divergence: eps must lie in [0, 1)");
  }
  const double infinity = std::numeric_limits<double>::infinity();
  const double target = 1.0 - eps;
  const Matrix r = hermitian_part(rho);
  const Matrix s = hermitian_part(sigma);

  const Spectrum sig = spectrum(s);
  const double kernel_cut = tol.eig * std::max(1.0, sig.values.maxCoeff());
  if (weight(sig, r, [&](double v) { return v <= kernel_cut; }) >=
      target - 1e-12) {
    return infinity;
  }

  // The projector onto the nonnegative part of rho - t sigma carries
  // rho-weight that decreases with t; find the largest t where it still
  // reaches the target.
  auto feasible = [&](double t) {
    const Spectrum sp = spectrum(r - t * s);
    const double eta = boundary_width(r, s, t);
    return weight(sp, r, [&](double v) { return v >= -eta; }) >= target - 1e-12;
  };

  double smallest_positive = 0.0;
  for (Eigen::Index i = 0; i < sig.values.size(); ++i) {
    if (sig.values(i) > kernel_cut) {
      smallest_positive = sig.values(i);
      break;
    }
  }
  const double rho_max = spectrum(r).values.maxCoeff();
  double hi = smallest_positive > 0.0 ? rho_max / smallest_positive : 1e6;
  hi = std::max(hi, 1e-12);
  while (feasible(hi) && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const Spectrum sp = spectrum(r - lo * s);
  const double eta = boundary_width(r, s, lo);
  auto above = [&](double v) { return v > eta; };
  auto boundary = [&](double v) { return std::abs(v) <= eta; };
  const double rho_above = weight(sp, r, above);
  const double rho_boundary = weight(sp, r, boundary);
  double p = 0.0;
  if (rho_boundary > 1e-15) {
    p = std::clamp((target - rho_above) / rho_boundary, 0.0, 1.0);
  }
  const double type_two = weight(sp, s, above) + p * weight(sp, s, boundary);
  if (type_two <= 1e-15) return infinity;
  return -std::log2(type_two);
}

double dh_channel_divergence_lower(
    const Channel& e1, const Channel& e2, double eps, int restarts, Rng& rng,
    const Tolerances& tol) {
  if (e1.dim() != e2.dim()) {
    throw DimensionError("dh_channel_divergence_lower: dimension mismatch");
  }
  if (restarts < 0) throw Error("dh_channel_divergence_lower: restarts < 0");
  const int d = e1.dim();
  auto evaluate = [&](const Vector& psi) {
    const Matrix rho = projector(psi);
    return hypothesis_test_divergence(
        hermitian_part(channels::apply_extended(e1, rho, d)),
        hermitian_part(channels::apply_extended(e2, rho, d)), eps, tol);
  };

  Vector entangled = Vector::Zero(d * d);
  for (int k = 0; k < d; ++k) entangled(k * d + k) = 1.0 / std::sqrt(d);
  double best = evaluate(entangled);
  for (int trial = 0; trial < restarts; ++trial) {
    best = std::max(best, evaluate(random_pure_vector(rng, d * d)));
  }
  return best;
}

/******************************* monotonicity *******************************/

MonotonicityReport monotonicity_suite(
    Rng& rng, int trials, int d, CoherenceMeasure m,
    const std::optional<DephasingSuperchannel>& fixed, double tol) {
  if (trials < 1) throw Error("monotonicity_suite: trials must be >= 1");
  if (fixed && fixed->dim() != d) {
    throw DimensionError("monotonicity_suite: superchannel dimension");
  }
  MonotonicityReport report;
  report.trials = trials;
  report.max_violation = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int rank = 1 + static_cast<int>(rng.uniform_int(d * d));
    const Channel ch = channels::random_channel(rng, d, rank);
    const DephasingSuperchannel sc =
        fixed ? *fixed : superchannels::sample(rng, d);
    const double before = cohering_power(ch, m);
    const double after = cohering_power(superchannels::apply(sc, ch), m);
    const double gap = before - after;
    report.gaps.push_back(gap);
    report.max_violation = std::max(report.max_violation, -gap);
    if (-gap > tol) ++report.violations;
    sum += gap;
  }
  report.min_gap = *std::min_element(report.gaps.begin(), report.gaps.end());
  report.max_gap = *std::max_element(report.gaps.begin(), report.gaps.end());
  report.mean_gap = sum / trials;
  return report;
}

}  // namespace dephaser::coherence
