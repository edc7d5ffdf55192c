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

#include "dephaser/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "dephaser/coherence.hpp"
#include "dephaser/io.hpp"
#include "dephaser/superchannels.hpp"

namespace dephaser::verify {

using channels::Channel;
using superchannels::DephasingSuperchannel;

/********************************* oracles **********************************/

double grid_robustness_d2(const Matrix& jam, double step) {
  if (jam.rows() != 4 || jam.cols() != 4) {
    throw DimensionError("grid_robustness_d2: qubit channels only");
  }
  Eigen::Matrix4cd off = jam;
  for (int a = 0; a < 4; ++a) off(a, a) = 0.0;
  off = (off + off.adjoint()).eval() / 2.0;
  std::array<bool, 4> zero_row{};
  for (int a = 0; a < 4; ++a) zero_row[a] = off.row(a).cwiseAbs().maxCoeff() < 1e-14;

  const int points = static_cast<int>(std::lround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver;
  for (int ia = 0; ia <= points; ++ia) {
    const double a = static_cast<double>(ia) / points;
    for (int ib = 0; ib <= points; ++ib) {
      const double b = static_cast<double>(ib) / points;
      // Weights of y_{ik} / (r / 2) at index i * 2 + k.
      const std::array<double, 4> weights{a, b, 1.0 - a, 1.0 - b};
      Eigen::Matrix4cd scaled = Eigen::Matrix4cd::Zero();
      bool feasible = true;
      for (int p = 0; p < 4 && feasible; ++p) {
        if (weights[p] <= 0.0 && !zero_row[p]) feasible = false;
      }
      if (!feasible) continue;
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q)
          if (weights[p] > 0.0 && weights[q] > 0.0) {
            scaled(p, q) = off(p, q) / std::sqrt(weights[p] * weights[q]);
          }
      solver.compute(scaled, Eigen::EigenvaluesOnly);
      best = std::min(best, std::max(0.0, 2.0 * solver.eigenvalues()(3)));
    }
  }
  return best;
}

double diagonal_dh_oracle(const RealVector& p, const RealVector& q, double eps) {
  const int n = static_cast<int>(p.size());
  const double target = 1.0 - eps;
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    double covered = 0.0;
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        covered += p(i);
        cost += q(i);
      }
    }
    if (covered >= target - 1e-15) best = std::min(best, cost);
    for (int i = 0; i < n; ++i) {
      if ((mask & (1 << i)) || p(i) <= 0.0) continue;
      const double x = (target - covered) / p(i);
      if (x >= 0.0 && x <= 1.0) best = std::min(best, cost + x * q(i));
    }
  }
  if (best <= 1e-15) return std::numeric_limits<double>::infinity();
  return -std::log2(best);
}

RealMatrix random_stochastic(Rng& rng, int d) {
  RealMatrix t(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) t(i, j) = rng.uniform();
    t.col(j) /= t.col(j).sum();
  }
  return t;
}

/******************************** acceptance ********************************/

namespace {

// Tracks the worst observed value of a quantity that must stay below (or
// above) a bound.
struct Check {
  double threshold;
  bool upper = true;
  double worst = std::numeric_limits<double>::quiet_NaN();
  bool ok = true;

  void see(double value) {
    if (std::isnan(worst) || (upper ? value > worst : value < worst)) {
      worst = value;
    }
    if (std::isnan(value) || (upper ? value >= threshold : value < threshold)) {
      ok = false;
    }
  }
  void see_at_most(double value) {
    if (std::isnan(worst) || value > worst) worst = value;
    if (std::isnan(value) || value > threshold) ok = false;
  }
};

int count(const AcceptanceConfig& cfg, int full) {
  return cfg.trials ? std::max(1, std::min(full, *cfg.trials)) : full;
}

Channel random_channel_any_rank(Rng& rng, int d) {
  const int rank = 1 + static_cast<int>(rng.uniform_int(d * d));
  return channels::random_channel(rng, d, rank);
}

DephasingSuperchannel load_superchannel(const AcceptanceConfig& cfg,
                                        const std::string& name) {
  const auto [c, d] =
      io::correlation_from_json(io::read_file(cfg.fixture_dir + "/" + name));
  return superchannels::make_superchannel(c, d, cfg.tol);
}

Channel load_channel(const AcceptanceConfig& cfg, const std::string& name) {
  return io::channel_from_json(
      io::read_file(cfg.fixture_dir + "/" + name), cfg.tol);
}

Matrix basis_state(int d, int k) {
  Matrix out = Matrix::Zero(d, d);
  out(k, k) = 1.0;
  return out;
}

RealVector sorted_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::string describe(const char* label, double worst, double threshold) {
  std::ostringstream out;
  out.precision(3);
  out << label << " " << std::scientific << worst << " (bound " << threshold
      << ")";
  return out.str();
}

using Criterion = std::function<CriterionResult(const AcceptanceConfig&, Rng&)>;

CriterionResult npt_example(const AcceptanceConfig& cfg, Rng&) {
  const auto [c, d] = io::correlation_from_json(
      io::read_file(cfg.fixture_dir + "/npt_d3.json"));
  const auto validation = superchannels::validate(c, d, cfg.tol);
  const double ppt = superchannels::memory_class(
      superchannels::make_superchannel(c, d, cfg.tol), cfg.tol).ppt_min_eig;
  Check close{1e-10};
  close.see(std::abs(ppt - (1.0 - std::sqrt(2.0))));
  double diag = 0.0;
  for (int a = 0; a < d * d; ++a) diag = std::max(diag, std::abs(c(a, a) - 1.0));
  const bool psd = min_eigenvalue(c, cfg.tol) >= -cfg.tol.psd;
  const bool passed = close.ok && psd && diag <= cfg.tol.tp && validation.ok();
  std::ostringstream detail;
  detail.precision(12);
  detail << "ppt_min_eig " << ppt << ", psd " << (psd ? "yes" : "no")
         << ", diagonal deviation " << diag;
  return {1, "d=3 NPT example", passed, 1, close.worst, 1e-10, detail.str()};
}

CriterionResult qubit_ppt(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 1000);
  Check ppt{-cfg.tol.psd, false};
  Check spectrum{1e-10};
  for (int trial = 0; trial < n; ++trial) {
    const auto sc = superchannels::sample(rng, 2);
    const Matrix& c = sc.correlation();
    const Matrix pt = partial_transpose(c, {2, 2}, Subsystem::kSecond);
    ppt.see(superchannels::memory_class(sc, cfg.tol).ppt_min_eig);
    spectrum.see(
        (sorted_spectrum(pt) - sorted_spectrum(c)).cwiseAbs().maxCoeff());
  }
  return {2, "qubit PPT theorem", ppt.ok && spectrum.ok, n, ppt.worst,
          -cfg.tol.psd,
          describe("spectrum mismatch", spectrum.worst, 1e-10)};
}

CriterionResult hadamard_steering(const AcceptanceConfig& cfg, Rng& rng) {
  const auto sc = load_superchannel(cfg, "hadamard_steering.json");
  const Channel hadamard = load_channel(cfg, "hadamard_channel.json");
  const Channel steered = superchannels::apply(sc, hadamard, cfg.tol);
  const Matrix out = channels::apply(steered, basis_state(2, 0), cfg.tol);
  Vector minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const double fidelity = (minus.adjoint() * out * minus)(0, 0).real();
  const auto inst = coherence::discrimination_seesaw(
      hadamard, {superchannels::identity_superchannel(2), sc},
      cfg.seesaw_restarts, rng, cfg.tol);
  const bool passed = fidelity >= 1.0 - 1e-10 && inst.p_succ >= 1.0 - 1e-9;
  std::ostringstream detail;
  detail.precision(15);
  detail << "fidelity " << fidelity << ", p_succ " << inst.p_succ;
  return {3, "Hadamard steering", passed, 1, inst.p_succ, 1.0 - 1e-9,
          detail.str()};
}

CriterionResult transition_invariance(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 200);
  Check change{1e-12};
  int cptp_failures = 0;
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 2;
    const auto sc = superchannels::sample(rng, d);
    const Channel ch = random_channel_any_rank(rng, d);
    const Matrix out = schur(ch.jamiolkowski(), sc.correlation());
    if (channels::cptp_violation(out, d, cfg.tol)) {
      ++cptp_failures;
      continue;
    }
    const Channel image = superchannels::apply(sc, ch, cfg.tol);
    change.see((channels::transition_matrix(image).matrix() -
                channels::transition_matrix(ch).matrix())
                   .cwiseAbs()
                   .maxCoeff());
  }
  return {4, "transition-probability invariance",
          change.ok && cptp_failures == 0, n, change.worst, 1e-12,
          "CPTP failures " + std::to_string(cptp_failures)};
}

CriterionResult realization_round_trip(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 100);
  Check residual{1e-9};
  Check unitarity{1e-10};
  auto check = [&](const DephasingSuperchannel& sc) {
    const auto r = superchannels::realize(sc, cfg.tol);
    for (const auto* family : {&r.us, &r.vs}) {
      for (const Matrix& u : *family) {
        const Matrix id = Matrix::Identity(u.rows(), u.cols());
        unitarity.see(max_abs(u.adjoint() * u - id));
      }
    }
    const auto back = superchannels::from_unitaries(r.us, r.vs, cfg.tol);
    residual.see(max_abs(back.correlation() - sc.correlation()));
  };
  for (int trial = 0; trial < n; ++trial) {
    check(superchannels::sample(rng, 2 + trial % 2));
  }
  check(load_superchannel(cfg, "npt_d3.json"));
  return {5, "realization round trip", residual.ok && unitarity.ok, n + 1,
          residual.worst, 1e-9,
          describe("unitarity defect", unitarity.worst, 1e-10)};
}

CriterionResult schur_closure(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 200);
  Check jam{1e-12};
  Check contraction{1e-12};
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 2;
    const auto sc = superchannels::sample(rng, d);
    const auto dc = channels::random_dephasing(rng, d);
    const Channel image =
        superchannels::apply(sc, channels::dephasing_channel(dc), cfg.tol);
    const auto expected = superchannels::act_on_dephasing(sc, dc);
    jam.see(max_abs(image.jamiolkowski() -
                    channels::dephasing_channel(expected).jamiolkowski()));
    contraction.see(
        (expected.correlation().cwiseAbs() - dc.correlation().cwiseAbs())
            .maxCoeff());
  }
  return {6, "Schur-channel closure", jam.ok && contraction.ok, n, jam.worst,
          1e-12, describe("entrywise growth", contraction.worst, 1e-12)};
}

CriterionResult monotonicity(const AcceptanceConfig& cfg, Rng& rng) {
  const int n2 = count(cfg, 1000);
  const int n3 = count(cfg, 200);
  const auto r2 = coherence::monotonicity_suite(
      rng, n2, 2, coherence::CoherenceMeasure::kL1);
  const auto r3 = coherence::monotonicity_suite(
      rng, n3, 3, coherence::CoherenceMeasure::kL1);
  const double worst = std::max(r2.max_violation, r3.max_violation);
  std::ostringstream detail;
  detail << "violations d=2 " << r2.violations << ", d=3 " << r3.violations;
  return {7, "cohering-power monotonicity",
          r2.violations == 0 && r3.violations == 0, n2 + n3, worst, 1e-9,
          detail.str()};
}

CriterionResult classical_invariance(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 200);
  Check fixed{1e-12};
  Check sandwich{1e-12};
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 2;
    const auto sc = superchannels::sample(rng, d);
    const Channel classical = channels::classical_channel(
        channels::StochasticMatrix(random_stochastic(rng, d)));
    fixed.see(max_abs(superchannels::apply(sc, classical, cfg.tol).jamiolkowski() -
                      classical.jamiolkowski()));
    const Channel ch = random_channel_any_rank(rng, d);
    const Channel image = superchannels::apply(sc, ch, cfg.tol);
    sandwich.see(max_abs(channels::classical_version(image).jamiolkowski() -
                         channels::classical_version(ch).jamiolkowski()));
  }
  return {8, "classical invariance", fixed.ok && sandwich.ok, n, fixed.worst,
          1e-12, describe("dephased-sandwich deviation", sandwich.worst, 1e-12)};
}

CriterionResult robustness_oracle(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 20);
  Check agreement{1e-3, true};
  int infeasible = 0;
  auto check = [&](const Channel& ch) {
    const auto cert = coherence::robustness(ch, cfg.tol);
    if (coherence::certificate_violation(ch, cert, 1e-8)) ++infeasible;
    agreement.see_at_most(
        std::abs(cert.value - grid_robustness_d2(ch.jamiolkowski())));
  };
  for (int trial = 0; trial < n; ++trial) check(random_channel_any_rank(rng, 2));
  check(load_channel(cfg, "hadamard_channel.json"));
  const Channel classical = load_channel(cfg, "classical_d2.json");
  const double classical_value = coherence::robustness(classical, cfg.tol).value;
  std::ostringstream detail;
  detail << "infeasible certificates " << infeasible << ", classical value "
         << classical_value;
  return {9, "robustness SDP vs grid oracle",
          agreement.ok && infeasible == 0 && classical_value == 0.0, n + 2,
          agreement.worst, 1e-3, detail.str()};
}

CriterionResult bound_chain(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 100);
  Check lower{-1e-9, false};
  Check upper{1e-8, true};
  for (int trial = 0; trial < n; ++trial) {
    const int m = 2 + trial % 2;
    const Channel gate = random_channel_any_rank(rng, 2);
    std::vector<DephasingSuperchannel> scs;
    for (int i = 0; i < m; ++i) scs.push_back(superchannels::sample(rng, 2));
    const auto inst =
        coherence::discrimination_seesaw(gate, scs, cfg.seesaw_restarts, rng, cfg.tol);
    const auto cert = coherence::robustness(gate, cfg.tol);
    lower.see(inst.p_succ - 1.0 / m);
    upper.see_at_most(inst.p_succ - (1.0 + cert.value) / m);
  }
  return {10, "discrimination bound chain", lower.ok && upper.ok, n,
          upper.worst, 1e-8,
          describe("min p_succ - 1/M", lower.worst, -1e-9)};
}

CriterionResult dh_correctness(const AcceptanceConfig& cfg, Rng& rng) {
  Check equal{1e-10};
  Check lp{1e-8};
  Check processing{1e-8};
  const int n = count(cfg, 100);
  for (double eps : {0.0, 0.1, 0.5}) {
    for (int d = 2; d <= 4; ++d) {
      const Matrix rho = random_state(rng, d, false);
      equal.see(std::abs(coherence::hypothesis_test_divergence(rho, rho, eps, cfg.tol) +
                         std::log2(1.0 - eps)));
    }
  }
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 3;
    RealVector p(d);
    RealVector q(d);
    for (int i = 0; i < d; ++i) {
      p(i) = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
      q(i) = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    }
    if (p.sum() == 0.0) p(0) = 1.0;
    if (q.sum() == 0.0) q(d - 1) = 1.0;
    p /= p.sum();
    q /= q.sum();
    const double eps = 0.9 * rng.uniform();
    const double got = coherence::hypothesis_test_divergence(
        p.cast<Complex>().asDiagonal(), q.cast<Complex>().asDiagonal(), eps,
        cfg.tol);
    const double want = diagonal_dh_oracle(p, q, eps);
    if (std::isinf(got) || std::isinf(want)) {
      lp.see(std::isinf(got) && std::isinf(want) ? 0.0 : 1.0);
    } else {
      lp.see(std::abs(got - want));
    }
  }
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 2;
    const Matrix rho = random_state(rng, d, trial % 4 == 0);
    const Matrix sigma = random_state(rng, d, false);
    const Channel lambda = random_channel_any_rank(rng, d);
    const double eps = 0.9 * rng.uniform();
    const double before =
        coherence::hypothesis_test_divergence(rho, sigma, eps, cfg.tol);
    const Matrix rho_out = channels::apply(lambda, rho, cfg.tol);
    const Matrix sigma_out = channels::apply(lambda, sigma, cfg.tol);
    const double after = coherence::hypothesis_test_divergence(
        (rho_out + rho_out.adjoint()) / 2.0,
        (sigma_out + sigma_out.adjoint()) / 2.0, eps, cfg.tol);
    if (std::isinf(before)) continue;
    processing.see_at_most(after - before);
  }
  std::ostringstream detail;
  detail.precision(3);
  detail << std::scientific << "rho=sigma " << equal.worst << ", LP oracle "
         << lp.worst << ", data processing " << processing.worst;
  return {11, "hypothesis-testing divergence", equal.ok && lp.ok && processing.ok,
          9 + 2 * n, std::max(lp.worst, processing.worst), 1e-8, detail.str()};
}

CriterionResult dual_paths(const AcceptanceConfig& cfg, Rng& rng) {
  const int n = count(cfg, 100);
  Check contraction{1e-12};
  Check kraus{1e-12};
  Check composition{1e-12};
  for (int trial = 0; trial < n; ++trial) {
    const int d = 2 + trial % 2;
    const auto sc = superchannels::sample(rng, d);
    const Channel ch = random_channel_any_rank(rng, d);
    contraction.see(max_abs(
        superchannels::apply(sc, ch, cfg.tol).jamiolkowski() -
        superchannels::apply_super_jamiolkowski(
            superchannels::super_jamiolkowski(sc), ch)));

    const Matrix rho = random_state(rng, d, false);
    kraus.see(max_abs(channels::apply(ch, rho, cfg.tol) -
                      channels::apply_kraus(ch, rho, cfg.tol)));

    const auto c1 = channels::random_dephasing(rng, d);
    const auto c2 = channels::random_dephasing(rng, d);
    const Channel direct =
        superchannels::apply(superchannels::pre_post(c1, c2), ch, cfg.tol);
    const Channel explicit_form = channels::compose(
        channels::dephasing_channel(c2),
        channels::compose(ch, channels::dephasing_channel(c1), cfg.tol),
        cfg.tol);
    composition.see(
        max_abs(direct.jamiolkowski() - explicit_form.jamiolkowski()));
  }
  std::ostringstream detail;
  detail.precision(3);
  detail << std::scientific << "super-Jamiolkowski " << contraction.worst
         << ", Kraus " << kraus.worst << ", pre/post " << composition.worst;
  const double worst =
      std::max({contraction.worst, kraus.worst, composition.worst});
  return {12, "dual-path equivalences",
          contraction.ok && kraus.ok && composition.ok, n, worst, 1e-12,
          detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config) {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"d=3 NPT example", npt_example},
      {"qubit PPT theorem", qubit_ppt},
      {"Hadamard steering", hadamard_steering},
      {"transition-probability invariance", transition_invariance},
      {"realization round trip", realization_round_trip},
      {"Schur-channel closure", schur_closure},
      {"cohering-power monotonicity", monotonicity},
      {"classical invariance", classical_invariance},
      {"robustness SDP vs grid oracle", robustness_oracle},
      {"discrimination bound chain", bound_chain},
      {"hypothesis-testing divergence", dh_correctness},
      {"dual-path equivalences", dual_paths},
  };
  std::vector<CriterionResult> results;
  for (std::size_t index = 0; index < criteria.size(); ++index) {
    const int id = static_cast<int>(index) + 1;
    Rng rng = Rng(config.seed).derive(static_cast<std::uint64_t>(id));
    try {
      results.push_back(criteria[index].second(config, rng));
    } catch (const std::exception& e) {
      results.push_back({id, criteria[index].first, false, 0,
                         std::numeric_limits<double>::quiet_NaN(), 0.0,
                         std::string("error: ") + e.what()});
    }
  }
  return results;
}

}  // namespace dephaser::verify
