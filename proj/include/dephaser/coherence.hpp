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
#include "dephaser/superchannels.hpp"

namespace dephaser::coherence {

using channels::Channel;
using channels::StochasticMatrix;
using superchannels::DephasingSuperchannel;

/// Coherence with respect to the computational basis. All logarithms are
/// base 2.
enum class CoherenceMeasure { kL1, kRelEnt };

std::string to_string(CoherenceMeasure m);
/// Accepts "l1" and "rel_ent" (any case).
std::optional<CoherenceMeasure> parse_measure(const std::string& name);

/// L1: sum of |rho_ij| over i != j. REL_ENT: S(Delta(rho)) - S(rho).
double state_coherence(
    const Matrix& rho, CoherenceMeasure m, const Tolerances& tol = {});

/// max_k coherence of E(|k><k|).
double cohering_power(
    const Channel& ch, CoherenceMeasure m, const Tolerances& tol = {});

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol = {});

/**
 * Hypothesis-testing divergence
 *
 *   D_H^eps(rho || sigma) = -log2 min { Tr(Q sigma) : 0 <= Q <= 1,
 *                                       Tr(Q rho) >= 1 - eps }.
 *
 * Returns +infinity when a test with zero type-II error exists.
 */
double hypothesis_test_divergence(
    const Matrix& rho, const Matrix& sigma, double eps,
    const Tolerances& tol = {});

/// Lower bound on sup_rho D_H^eps((E1 (x) I)(rho) || (E2 (x) I)(rho)) over
/// inputs on d x d. The maximally entangled state is always tried first,
/// followed by `restarts` random pure states drawn from `rng`.
double dh_channel_divergence_lower(
    const Channel& e1, const Channel& e2, double eps, int restarts, Rng& rng,
    const Tolerances& tol = {});

/// Optimal point of min { r : (J + Y) diagonal, Y = r J(F) >= 0, F CPTP }.
struct RobustnessCertificate {
  double value = 0.0;
  /// F* = Y / r; absent when the channel is already classical.
  std::optional<Channel> noise_channel;
  StochasticMatrix classical_target;
  /// r minus the value of an explicitly feasible dual point.
  double primal_dual_gap = 0.0;
  double dual_value = 0.0;
  /// Y = r J(F*); zero when value is 0.
  Matrix y;
  int newton_steps = 0;
};

RobustnessCertificate robustness(const Channel& ch, const Tolerances& tol = {});

/// Independent feasibility check of a certificate against its channel:
/// PSD of Y, diagonality of J + Y, trace preservation of F* and agreement
/// of the classical target. Returns the first failure.
std::optional<std::string> certificate_violation(
    const Channel& ch, const RobustnessCertificate& cert, double tol = 1e-8);

struct IterationRecord {
  int restart;
  int iter;
  double objective;
};

struct DiscriminationInstance {
  Channel gate;
  std::vector<DephasingSuperchannel> superchannels;
  /// Density matrix on d x d.
  Matrix input_state;
  std::vector<Matrix> povm;
  double p_succ = 0.0;
  int best_restart = 0;
  std::vector<IterationRecord> log;
};

struct SeesawOptions {
  int restarts = 32;
  int max_iterations = 200;
  double stall = 1e-13;
};

/// Seesaw over input states and POVMs for the task of guessing which of
/// the superchannels was applied to `gate`. The result is a lower bound on
/// the optimal success probability.
DiscriminationInstance discrimination_seesaw(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    int restarts, Rng& rng, const Tolerances& tol = {});
DiscriminationInstance discrimination_seesaw(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    const SeesawOptions& options, Rng& rng, const Tolerances& tol = {});

/// (1/M) sum_i Tr(E_i (Xi_i[gate] (x) I)(rho)).
double success_probability(
    const Channel& gate, const std::vector<DephasingSuperchannel>& scs,
    const Matrix& input_state, const std::vector<Matrix>& povm);

struct BoundCheck {
  int m = 0;
  double p_succ = 0.0;
  double robustness = 0.0;
  /// M * p_succ.
  double lhs = 0.0;
  /// 1 + R.
  double rhs = 0.0;
  double slack = 0.0;
  /// (1 + R) / p_succ.
  double discrimination_count_bound = 0.0;
  bool holds = false;
};

BoundCheck robustness_bound_check(
    const DiscriminationInstance& inst, const RobustnessCertificate& cert,
    double tol = 1e-8);

struct MonotonicityReport {
  int trials = 0;
  int violations = 0;
  /// max over trials of C_g(Xi[E]) - C_g(E).
  double max_violation = 0.0;
  double min_gap = 0.0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
  std::vector<double> gaps;
};

/// Samples (channel, superchannel) pairs and compares cohering powers.
/// With `fixed`, every trial uses that superchannel.
MonotonicityReport monotonicity_suite(
    Rng& rng, int trials, int d, CoherenceMeasure m,
    const std::optional<DephasingSuperchannel>& fixed = std::nullopt,
    double tol = 1e-9);

}  // namespace dephaser::coherence
