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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <catch2/catch_amalgamated.hpp>

#include "dephaser/coherence.hpp"
#include "dephaser/verify.hpp"
#include "support.hpp"

using namespace dephaser;
using namespace dephaser::coherence;
using namespace testing;
using channels::classical_channel;
using channels::random_channel;
using superchannels::identity_superchannel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Channel random_any(Rng& rng, int d) {
  return random_channel(rng, d, 1 + static_cast<int>(rng.uniform_int(d * d)));
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Fractional knapsack: fill x_i in decreasing order of p_i / q_i until
/// sum p_i x_i reaches 1 - eps, then report -log2 sum q_i x_i.
double knapsack_dh(const RealVector& p, const RealVector& q, double eps) {
  const int n = static_cast<int>(p.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return p(a) * q(b) > p(b) * q(a);
  });
  double need = 1.0 - eps;
  double cost = 0.0;
  for (int i : order) {
    if (need <= 0.0) break;
    if (p(i) <= 0.0) continue;
    const double x = std::min(1.0, need / p(i));
    need -= x * p(i);
    cost += x * q(i);
  }
  return cost <= 0.0 ? kInf : -std::log2(cost);
}

RealVector random_distribution(Rng& rng, int n, bool with_zero) {
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform();
  if (with_zero) v(static_cast<int>(rng.uniform_int(n))) = 0.0;
  return v / v.sum();
}

Matrix diag_state(const RealVector& p) {
  return p.cast<Complex>().asDiagonal();
}

Matrix pure(const Vector& v) { return v * v.adjoint(); }

}  // namespace

TEST_CASE("state coherence measures", "[coherence]") {
  Rng rng(71);
  for (int d = 2; d <= 4; ++d) {
    const Matrix rho = diag_state(random_distribution(rng, d, false));
    CHECK(state_coherence(rho, CoherenceMeasure::kL1) == 0.0);
    CHECK(state_coherence(rho, CoherenceMeasure::kRelEnt) == 0.0);
  }
  const Matrix plus = pure(plus_minus(1.0));
  CHECK(std::abs(state_coherence(plus, CoherenceMeasure::kL1) - 1.0) < 1e-15);
  CHECK(std::abs(state_coherence(plus, CoherenceMeasure::kRelEnt) - 1.0) < 1e-12);

  for (int trial = 0; trial < 50; ++trial) {
    const Matrix psi = random_state(rng, 2, true);
    const double h = binary_entropy(psi(0, 0).real());
    CHECK(std::abs(state_coherence(psi, CoherenceMeasure::kRelEnt) - h) < 1e-10);
    CHECK(std::abs(state_coherence(psi, CoherenceMeasure::kL1) -
                   2.0 * std::abs(psi(0, 1))) < 1e-14);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const Matrix rho = random_state(rng, d, trial % 2 == 0);
    const auto dc = channels::random_dephasing(rng, d);
    const Matrix out = channels::apply(channels::dephasing_channel(dc), rho);
    for (CoherenceMeasure m : {CoherenceMeasure::kL1, CoherenceMeasure::kRelEnt}) {
      CHECK(state_coherence(rho, m) >= 0.0);
      CHECK(state_coherence(out, m) <= state_coherence(rho, m) + 1e-9);
    }
  }
  CHECK_THROWS_AS(state_coherence(2.0 * plus, CoherenceMeasure::kL1),
                  InvalidStateError);
  CHECK(parse_measure("l1") == CoherenceMeasure::kL1);
  CHECK(parse_measure("rel_ent") == CoherenceMeasure::kRelEnt);
  CHECK_FALSE(parse_measure("l2").has_value());
}

TEST_CASE("cohering power", "[coherence]") {
  for (CoherenceMeasure m : {CoherenceMeasure::kL1, CoherenceMeasure::kRelEnt}) {
    CHECK(cohering_power(channels::identity_channel(3), m) == 0.0);
    CHECK(cohering_power(channels::completely_dephasing(3), m) == 0.0);
  }
  const Channel h = channels::unitary_channel(hadamard());
  CHECK(std::abs(cohering_power(h, CoherenceMeasure::kL1) - 1.0) < 1e-12);
  CHECK(std::abs(cohering_power(h, CoherenceMeasure::kRelEnt) - 1.0) < 1e-10);

  Rng rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const Channel ch = random_any(rng, d);
    double best = 0.0;
    for (int k = 0; k < d; ++k) {
      best = std::max(best, state_coherence(channels::apply(ch, ket_bra(d, k, k)),
                                            CoherenceMeasure::kL1));
    }
    CHECK(std::abs(cohering_power(ch, CoherenceMeasure::kL1) - best) < 1e-12);
  }
}

TEST_CASE("hypothesis testing divergence examples", "[coherence]") {
  Rng rng(73);
  for (double eps : {0.0, 0.1, 0.5, 0.9}) {
    const Matrix rho = random_state(rng, 3, false);
    CHECK(std::abs(hypothesis_test_divergence(rho, rho, eps) + std::log2(1.0 - eps)) <
          1e-9);
    CHECK(hypothesis_test_divergence(ket_bra(2, 0, 0), ket_bra(2, 1, 1), eps) == kInf);
    CHECK(hypothesis_test_divergence(pure(plus_minus(1.0)), pure(plus_minus(-1.0)),
                                     eps) == kInf);
  }
  // |+><+| against 1/2: Q = |+><+| gives Tr(Q sigma) = 1/2.
  CHECK(std::abs(hypothesis_test_divergence(pure(plus_minus(1.0)),
                                            Matrix::Identity(2, 2) / 2.0, 0.0) -
                 1.0) < 1e-9);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const RealVector p = random_distribution(rng, n, trial % 5 == 0);
    const RealVector q = random_distribution(rng, n, trial % 7 == 0);
    const double eps = rng.uniform() * 0.9;
    const double expected = knapsack_dh(p, q, eps);
    const double value = hypothesis_test_divergence(diag_state(p), diag_state(q), eps);
    if (std::isinf(expected)) {
      CHECK(std::isinf(value));
    } else {
      CHECK(std::abs(value - expected) < 1e-8);
      CHECK(std::abs(verify::diagonal_dh_oracle(p, q, eps) - expected) < 1e-10);
    }
  }
  CHECK_THROWS_AS(hypothesis_test_divergence(ket_bra(2, 0, 0), ket_bra(2, 0, 0), 1.0),
                  Error);
  CHECK_THROWS_AS(hypothesis_test_divergence(ket_bra(2, 0, 0), ket_bra(2, 0, 0), -0.1),
                  Error);
}

TEST_CASE("hypothesis testing divergence properties", "[coherence]") {
  Rng rng(74);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const Matrix rho = random_state(rng, d, false);
    const Matrix sigma = random_state(rng, d, false);
    double previous = -1.0;
    for (double eps : {0.0, 0.05, 0.2, 0.4, 0.7}) {
      const double value = hypothesis_test_divergence(rho, sigma, eps);
      CHECK(value >= -1e-12);
      CHECK(value >= previous - 1e-9);
      previous = value;
    }
    const Channel lambda = random_any(rng, d);
    const double eps = 0.3;
    CHECK(hypothesis_test_divergence(channels::apply(lambda, rho),
                                     channels::apply(lambda, sigma), eps) <=
          hypothesis_test_divergence(rho, sigma, eps) + 1e-8);
  }
}

TEST_CASE("channel divergence lower bound", "[coherence]") {
  Rng rng(75);
  const Channel ch = random_any(rng, 2);
  for (double eps : {0.0, 0.3}) {
    CHECK(std::abs(dh_channel_divergence_lower(ch, ch, eps, 4, rng) +
                   std::log2(1.0 - eps)) < 1e-9);
  }
  const Channel h = channels::unitary_channel(hadamard());
  const Channel hc = channels::classical_version(h);
  CHECK(dh_channel_divergence_lower(h, hc, 0.0, 8, rng) >= 1.0 - 1e-9);

  for (int trial = 0; trial < 5; ++trial) {
    const Channel e1 = random_any(rng, 2);
    const Channel e2 = random_any(rng, 2);
    double previous = -1.0;
    for (int restarts : {1, 2, 4, 8, 16}) {
      Rng stream(1000 + trial);
      const double value = dh_channel_divergence_lower(e1, e2, 0.1, restarts, stream);
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("robustness examples", "[coherence]") {
  Rng rng(76);
  for (int d = 2; d <= 4; ++d) {
    const RealMatrix t = verify::random_stochastic(rng, d);
    const RobustnessCertificate cert =
        robustness(classical_channel(StochasticMatrix(t)));
    CHECK(cert.value == 0.0);
    CHECK_FALSE(cert.noise_channel.has_value());
    CHECK((cert.classical_target.matrix() - t).cwiseAbs().maxCoeff() < 1e-12);
  }

  auto independent_check = [](const Channel& ch, const RobustnessCertificate& cert) {
    const int d = ch.dim();
    const Matrix& j = ch.jamiolkowski();
    REQUIRE(cert.noise_channel.has_value());
    const Matrix y = cert.value * cert.noise_channel->jamiolkowski();
    CHECK(min_eigenvalue(y) >= -1e-8);
    const Matrix sum = j + y;
    for (int a = 0; a < d * d; ++a)
      for (int b = 0; b < d * d; ++b)
        if (a != b) CHECK(std::abs(sum(a, b)) < 1e-8);
    for (int k = 0; k < d; ++k) {
      double col = 0.0;
      for (int i = 0; i < d; ++i) col += y(i * d + k, i * d + k).real();
      CHECK(std::abs(col - cert.value / d) < 1e-8);
    }
    // Target T_{ik} = d (J + Y)_{ik,ik} / (1 + r).
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        CHECK(std::abs(cert.classical_target.matrix()(i, k) -
                       d * sum(i * d + k, i * d + k).real() / (1.0 + cert.value)) <
              1e-8);
      }
    CHECK(cert.primal_dual_gap <= 1e-7);
  };

  const Channel h = load_channel("hadamard_channel.json");
  const RobustnessCertificate hr = robustness(h);
  independent_check(h, hr);
  CHECK(std::abs(hr.value - verify::grid_robustness_d2(h.jamiolkowski())) < 1e-5);
  CHECK(hr.value >= 1.0);

  for (int trial = 0; trial < 10; ++trial) {
    const Complex c = std::polar(rng.uniform(), 2.0 * M_PI * rng.uniform());
    Matrix cm(2, 2);
    cm << 1.0, c, std::conj(c), 1.0;
    const Channel dc = channels::dephasing_channel(channels::DephasingChannelC(cm));
    const RobustnessCertificate cert = robustness(dc);
    independent_check(dc, cert);
    CHECK(std::abs(cert.value - verify::grid_robustness_d2(dc.jamiolkowski())) <
          1e-5);
    CHECK_FALSE(certificate_violation(dc, cert).has_value());
  }
}

TEST_CASE("robustness on random channels", "[coherence]") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const Channel ch = random_any(rng, d);
    const RobustnessCertificate cert = robustness(ch);
    CHECK(cert.value > 0.0);
    CHECK(cert.primal_dual_gap <= 1e-7);
    CHECK(std::abs(cert.value - cert.dual_value) <= 1e-7);
    CHECK_FALSE(certificate_violation(ch, cert).has_value());
    if (d == 2) {
      CHECK(std::abs(cert.value - verify::grid_robustness_d2(ch.jamiolkowski())) <
            1e-4);
    }
  }
}

TEST_CASE("seesaw examples", "[coherence]") {
  Rng rng(78);
  const Channel h = load_channel("hadamard_channel.json");
  const std::vector<superchannels::DephasingSuperchannel> pair = {
      identity_superchannel(2), load_superchannel("hadamard_steering.json")};
  const DiscriminationInstance inst = discrimination_seesaw(h, pair, 4, rng);
  CHECK(std::abs(inst.p_succ - 1.0) < 1e-9);

  const BoundCheck check = robustness_bound_check(inst, robustness(h));
  CHECK(check.holds);
  CHECK(check.lhs == Catch::Approx(2.0 * inst.p_succ));

  for (int d = 2; d <= 3; ++d) {
    const Channel classical =
        classical_channel(StochasticMatrix(verify::random_stochastic(rng, d)));
    for (int m = 2; m <= 3; ++m) {
      std::vector<superchannels::DephasingSuperchannel> scs;
      for (int n = 0; n < m; ++n) scs.push_back(superchannels::sample(rng, d));
      const DiscriminationInstance ci = discrimination_seesaw(classical, scs, 2, rng);
      CHECK(std::abs(ci.p_succ - 1.0 / m) < 1e-9);
      const BoundCheck tight = robustness_bound_check(ci, robustness(classical));
      CHECK(tight.holds);
      CHECK(std::abs(tight.slack) < 1e-8);
    }
  }
}

TEST_CASE("seesaw invariants on random instances", "[coherence]") {
  Rng rng(79);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + trial % 2;
    const int m = 2 + trial % 3;
    const Channel gate = random_any(rng, d);
    std::vector<superchannels::DephasingSuperchannel> scs;
    for (int n = 0; n < m; ++n) scs.push_back(superchannels::sample(rng, d));
    const DiscriminationInstance inst = discrimination_seesaw(gate, scs, 3, rng);

    CHECK(inst.p_succ >= 1.0 / m - 1e-12);
    CHECK(std::abs(inst.p_succ -
                   success_probability(gate, scs, inst.input_state, inst.povm)) <
          1e-12);
    CHECK(channels::is_density_matrix(inst.input_state));
    Matrix total = Matrix::Zero(d * d, d * d);
    for (const Matrix& e : inst.povm) {
      CHECK(min_eigenvalue(e) >= -1e-10);
      total += e;
    }
    CHECK(max_diff(total, Matrix::Identity(d * d, d * d)) < 1e-10);

    for (std::size_t n = 1; n < inst.log.size(); ++n) {
      if (inst.log[n].restart == inst.log[n - 1].restart) {
        CHECK(inst.log[n].objective >= inst.log[n - 1].objective);
      }
    }

    const RobustnessCertificate cert = robustness(gate);
    const BoundCheck check = robustness_bound_check(inst, cert);
    CHECK(check.holds);
    CHECK(check.slack >= -1e-8);
    CHECK(inst.p_succ <= (1.0 + cert.value) / m + 1e-8);
  }
}

TEST_CASE("monotonicity suite", "[coherence]") {
  Rng rng(80);
  const MonotonicityReport id =
      monotonicity_suite(rng, 50, 3, CoherenceMeasure::kL1, identity_superchannel(3));
  CHECK(id.violations == 0);
  CHECK(id.max_gap == 0.0);
  CHECK(id.min_gap == 0.0);

  const auto npt = load_superchannel("npt_d3.json");
  const MonotonicityReport fixed =
      monotonicity_suite(rng, 50, 3, CoherenceMeasure::kRelEnt, npt);
  CHECK(fixed.violations == 0);
  CHECK(fixed.min_gap >= -1e-9);

  const MonotonicityReport qubits =
      monotonicity_suite(rng, 1000, 2, CoherenceMeasure::kL1);
  CHECK(qubits.trials == 1000);
  CHECK(qubits.violations == 0);
  CHECK(static_cast<int>(qubits.gaps.size()) == 1000);
  CHECK(qubits.min_gap <= qubits.mean_gap);
  CHECK(qubits.mean_gap <= qubits.max_gap);
}
