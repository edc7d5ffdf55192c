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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dephaser/channels.hpp"
#include "dephaser/matcore.hpp"

namespace dephaser::verify {

/// Robustness of a qubit channel by exhaustive search over the two free
/// diagonal weights of Y on a grid of the given step. For fixed weights
/// the smallest feasible r is 2 lambda_max(D^-1/2 J_off D^-1/2).
double grid_robustness_d2(const Matrix& jam, double step = 1e-3);

/// D_H for commuting states with spectra p (of rho) and q (of sigma) in a
/// common eigenbasis, by enumerating all vertices of the linear program
/// min q.x subject to p.x >= 1 - eps, 0 <= x <= 1.
double diagonal_dh_oracle(const RealVector& p, const RealVector& q, double eps);

/// Column-stochastic matrix with independent uniform columns.
RealMatrix random_stochastic(Rng& rng, int d);

struct AcceptanceConfig {
  std::uint64_t seed = 0;
  /// Caps every trial count; nullopt runs the full counts.
  std::optional<int> trials;
  Tolerances tol;
  std::string fixture_dir;
  int seesaw_restarts = 32;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  int trials = 0;
  /// Worst measured value of the checked quantity and its bound.
  double worst = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Runs criteria 1-12 in order. Exceptions inside a criterion count as a
/// failure of that criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config);

}  // namespace dephaser::verify
