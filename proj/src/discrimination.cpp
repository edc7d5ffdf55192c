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

#include "dephaser/coherence.hpp"

namespace dephaser::coherence {

namespace {

constexpr int kRefinements = 50;

Matrix herm(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

double objective(const std::vector<Matrix>& outputs,
                 const std::vector<Matrix>& povm) {
  double total = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    total += (povm[i] * outputs[i]).trace().real();
  }
  return total / static_cast<double>(outputs.size());
}

// Pseudo-inverse square root on the support, and the kernel projector.
std::pair<Matrix, Matrix> inverse_sqrt(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm(s));
  const RealVector& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  const double cut = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  const Eigen::Index n = s.rows();
  Matrix inv = Matrix::Zero(n, n);
  Matrix kernel = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Matrix outer = vectors.col(a) * vectors.col(a).adjoint();
    if (values(a) > cut) {
      inv += outer / std::sqrt(values(a));
    } else {
      kernel += outer;
    }
  }
  return {inv, kernel};
}

std::vector<Matrix> helstrom(const std::vector<Matrix>& outputs) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm(outputs[0] - outputs[1]));
  const Eigen::Index n = outputs[0].rows();
  Matrix positive = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    if (solver.eigenvalues()(a) > 0.0) {
      positive += solver.eigenvectors().col(a) *
                  solver.eigenvectors().col(a).adjoint();
    }
  }
  return {positive, Matrix::Identity(n, n) - positive};
}

// Square-root measurement for the operators a_i, completed on the kernel of
// sum_i a_i by the first element.
std::vector<Matrix> square_root_measurement(const std::vector<Matrix>& a) {
  Matrix total = Matrix::Zero(a[0].rows(), a[0].cols());
  for (const Matrix& m : a) total += m;
  const auto [inv, kernel] = inverse_sqrt(total);
  std::vector<Matrix> povm;
  for (const Matrix& m : a) povm.push_back(herm(inv * m * inv));
  povm[0] += kernel;
  return povm;
}

std::vector<Matrix> improve_povm(const std::vector<Matrix>& outputs) {
  if (outputs.size() == 2) return helstrom(outputs);
  std::vector<Matrix> best = square_root_measurement(outputs);
  double best_value = objective(outputs, best);
  std::vector<Matrix> current = best;
  // Fixed-point iteration E_i <- R^-1 s_i E_i s_i R^-1 with
  // R^2 = sum_i s_i E_i s_i.
  for (int round = 0; round < kRefinements; ++round) {
    std::vector<Matrix> weighted;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      weighted.push_back(herm(outputs[i] * current[i] * outputs[i]));
    }
    current = square_root_measurement(weighted);
    const double value = objective(outputs, current);
    if (value > best_value) {
      best = current;
      best_value = value;
    }
  }
  return best;
}

Vector top_eigenvector(const Matrix& observable) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm(observable));
  return solver.eigenvectors().col(observable.rows() - 1);
}

}  // namespace

double success_probability(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    const Matrix& input_state, const std::vector<Matrix>& povm) {
  if (scs.size() != povm.size()) {
    throw DimensionError("success_probability: POVM size differs from M");
  }
  std::vector<Matrix> outputs;
  for (const auto& sc : scs) {
    outputs.push_back(channels::apply_extended(
        superchannels::apply(sc, gate), input_state, gate.dim()));
  }
  return objective(outputs, povm);
}

DiscriminationInstance discrimination_seesaw(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    int restarts, Rng& rng, const Tolerances& tol) {
  SeesawOptions options;
  options.restarts = restarts;
  return discrimination_seesaw(gate, scs, options, rng, tol);
}

DiscriminationInstance discrimination_seesaw(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    const SeesawOptions& options, Rng& rng, const Tolerances& tol) {
  const int d = gate.dim();
  if (scs.size() < 2) throw Error("discrimination_seesaw: need M >= 2");
  if (options.restarts < 1) {
    throw Error("discrimination_seesaw: restarts must be >= 1");
  }
  for (const auto& sc : scs) {
    if (sc.dim() != d) {
      throw DimensionError("discrimination_seesaw: dimension mismatch");
    }
  }
  std::vector<Channel> images;
  for (const auto& sc : scs) images.push_back(superchannels::apply(sc, gate, tol));
  auto outputs_for = [&](const Matrix& rho) {
    std::vector<Matrix> out;
    for (const Channel& e : images) {
      out.push_back(herm(channels::apply_extended(e, rho, d)));
    }
    return out;
  };

  DiscriminationInstance best{
      .gate = gate,
      .superchannels = scs,
      .input_state = Matrix(),
      .povm = {},
      .p_succ = -1.0,
      .best_restart = 0,
      .log = {},
  };
  for (int restart = 0; restart < options.restarts; ++restart) {
    Vector psi;
    if (restart == 0) {
      psi = Vector::Zero(d * d);
      for (int k = 0; k < d; ++k) psi(k * d + k) = 1.0 / std::sqrt(d);
    } else {
      psi = random_pure_vector(rng, d * d);
    }
    Matrix rho = projector(psi);
    std::vector<Matrix> outputs = outputs_for(rho);
    std::vector<Matrix> povm = improve_povm(outputs);
    double value = objective(outputs, povm);
    best.log.push_back({restart, 0, value});

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
      const double previous = value;

      Matrix observable = Matrix::Zero(d * d, d * d);
      for (std::size_t i = 0; i < images.size(); ++i) {
        observable += channels::apply_adjoint_extended(images[i], povm[i], d);
      }
      const Matrix candidate_rho = projector(top_eigenvector(observable));
      const std::vector<Matrix> candidate_outputs = outputs_for(candidate_rho);
      const double input_value = objective(candidate_outputs, povm);
      if (input_value >= value) {
        rho = candidate_rho;
        outputs = candidate_outputs;
        value = input_value;
      }

      const std::vector<Matrix> candidate_povm = improve_povm(outputs);
      const double povm_value = objective(outputs, candidate_povm);
      if (povm_value >= value) {
        povm = candidate_povm;
        value = povm_value;
      }
      best.log.push_back({restart, iter, value});
      if (value - previous <= options.stall) break;
    }
    if (value > best.p_succ) {
      best.p_succ = value;
      best.input_state = rho;
      best.povm = povm;
      best.best_restart = restart;
    }
  }
  return best;
}

BoundCheck robustness_bound_check(
    const DiscriminationInstance& inst, const RobustnessCertificate& cert,
    double tol) {
  BoundCheck out;
  out.m = static_cast<int>(inst.superchannels.size());
  out.p_succ = inst.p_succ;
  out.robustness = cert.value;
  out.lhs = out.m * inst.p_succ;
  out.rhs = 1.0 + cert.value;
  out.slack = out.rhs - out.lhs;
  out.discrimination_count_bound = out.rhs / inst.p_succ;
  out.holds = out.slack >= -tol;
  return out;
}

}  // namespace dephaser::coherence
