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
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace dephaser;
using namespace dephaser::superchannels;
using namespace testing;
using channels::random_channel;
using channels::transition_matrix;

namespace {

Channel random_any(Rng& rng, int d) {
  return random_channel(rng, d, 1 + static_cast<int>(rng.uniform_int(d * d)));
}

/// Entrywise Schur product followed by the partial trace over the output
/// factor, written as explicit loops.
double tp_defect_by_loops(const Matrix& jam, const Matrix& c, int d) {
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Complex sum = 0.0;
      for (int i = 0; i < d; ++i) {
        sum += jam(i * d + k, i * d + l) * c(i * d + k, i * d + l);
      }
      const double target = k == l ? 1.0 / d : 0.0;
      worst = std::max(worst, std::abs(sum - target));
    }
  return worst;
}

Matrix npt_c() { return load_superchannel("npt_d3.json").correlation(); }

}  // namespace

TEST_CASE("validate accepts valid correlation matrices", "[superchannels]") {
  for (int d = 2; d <= 4; ++d) {
    const ValidationResult r = validate(Matrix::Ones(d * d, d * d), d);
    CHECK(r.ok());
    CHECK(r.violations.empty());
    CHECK_FALSE(r.witness.has_value());
  }

  const Matrix c = npt_c();
  REQUIRE(c.rows() == 9);
  // Blocks 1, A, B of the d=3 example sit on the first block row.
  CHECK(max_diff(c.block(0, 0, 3, 3), Matrix::Identity(3, 3)) == 0.0);
  CHECK(validate(c, 3).ok());

  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    CHECK(validate(sample(rng, d).correlation(), d).ok());
  }
}

TEST_CASE("validate reports violations with witnesses", "[superchannels]") {
  Matrix diag = Matrix::Ones(4, 4);
  diag(1, 1) = 0.5;
  const ValidationResult r0 = validate(diag, 2);
  REQUIRE_FALSE(r0.ok());
  REQUIRE(!r0.violations.empty());
  CHECK(r0.violations.front().kind == ViolationKind::kDiagonalNotOne);
  CHECK(r0.violations.front().i == 0);
  CHECK(r0.violations.front().k == 1);
  REQUIRE(r0.witness.has_value());
  CHECK(std::abs(r0.witness->defect - 0.5 / 2.0) < 1e-15);

  // Perturb the off-diagonal entries of one diagonal block and project
  // back to a correlation matrix; the blocks then disagree.
  Rng rng(52);
  int found = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    Matrix c = sample(rng, d).correlation();
    const int block = 1 + static_cast<int>(rng.uniform_int(d - 1));
    for (int k = 0; k < d; ++k)
      for (int l = k + 1; l < d; ++l) {
        const Complex delta = 0.3 * rng.complex_normal();
        c(block * d + k, block * d + l) += delta;
        c(block * d + l, block * d + k) += std::conj(delta);
      }
    c = project_to_correlation(c);
    const ValidationResult r = validate(c, d);
    REQUIRE_FALSE(r.ok());
    bool blocks = false;
    for (const Violation& v : r.violations) {
      if (v.kind == ViolationKind::kBlocksUnequal) blocks = true;
      CHECK(v.kind != ViolationKind::kNotPsd);
    }
    if (!blocks) continue;
    ++found;
    REQUIRE(r.witness.has_value());
    const Matrix wj = r.witness->channel.jamiolkowski();
    const double oracle = tp_defect_by_loops(wj, c, d);
    CHECK(std::abs(r.witness->defect - oracle) < 1e-12);
    CHECK(r.witness->defect > Tolerances{}.tp);
    const Violation& first = r.violations.front();
    const Complex gap = c(first.i * d + first.k, first.j * d + first.l) -
                        c(first.k, first.l);
    CHECK(std::abs(r.witness->defect - std::abs(gap) / double(d * d)) < 1e-12);
  }
  CHECK(found == 20);

  Matrix not_psd = Matrix::Identity(4, 4);
  not_psd(0, 3) = not_psd(3, 0) = 2.0;
  const ValidationResult rp = validate(not_psd, 2);
  REQUIRE_FALSE(rp.ok());
  CHECK(rp.violations.back().kind == ViolationKind::kNotPsd);
  CHECK(rp.violations.back().magnitude < -0.9);

  const auto loaded = io::correlation_from_json(
      io::read_file(fixture("invalid_blocks_d2.json")));
  const ValidationResult rf = validate(loaded.first, loaded.second);
  REQUIRE_FALSE(rf.ok());
  CHECK(rf.violations.front().kind == ViolationKind::kBlocksUnequal);
  CHECK_THROWS_AS(make_superchannel(loaded.first, loaded.second),
                  InvalidSuperchannelError);
}

TEST_CASE("validate orders entry violations", "[superchannels]") {
  Matrix c = Matrix::Ones(9, 9);
  c(8, 8) = 0.7;
  c(4, 5) = c(5, 4) = 0.2;
  c(0, 0) = 0.9;
  const ValidationResult r = validate(c, 3);
  REQUIRE(r.violations.size() >= 3);
  for (std::size_t n = 1; n < r.violations.size(); ++n) {
    const Violation& a = r.violations[n - 1];
    const Violation& b = r.violations[n];
    if (b.kind == ViolationKind::kNotPsd) {
      CHECK(n + 1 == r.violations.size());
      continue;
    }
    CHECK(std::make_tuple(a.i, a.k, a.j, a.l) < std::make_tuple(b.i, b.k, b.j, b.l));
  }
}

TEST_CASE("witness channels", "[superchannels]") {
  for (int d = 2; d <= 3; ++d) {
    Matrix c = Matrix::Ones(d * d, d * d);
    c(d + 1, d + 1) = 0.5;
    Violation v{ViolationKind::kDiagonalNotOne, 1, 1, 1, 1, -1, 0.5};
    const Witness w = witness(c, d, v);
    CHECK(std::abs(w.defect - 0.5 / d) < 1e-15);
    // |j><j| (x) 1/d.
    Matrix expected = Matrix::Zero(d * d, d * d);
    for (int k = 0; k < d; ++k) expected(d + k, d + k) = 1.0 / d;
    CHECK(max_diff(w.channel.jamiolkowski(), expected) < 1e-15);
  }

  Matrix c = Matrix::Ones(4, 4);
  c(2, 3) = c(3, 2) = 0.0;
  Violation v{ViolationKind::kBlocksUnequal, 1, 0, 1, 1, 0, 1.0};
  const Witness w = witness(c, 2, v);
  CHECK(std::abs(w.defect - 1.0 / 4.0) < 1e-15);
  CHECK(std::abs(w.defect - tp_defect_by_loops(w.channel.jamiolkowski(), c, 2)) <
        1e-15);
  CHECK(std::abs(tp_defect(channels::identity_channel(2).jamiolkowski(), 2)) <
        1e-15);

  CHECK_THROWS_AS(witness(Matrix::Ones(4, 4), 2, v), Error);
}

TEST_CASE("apply multiplies entrywise", "[superchannels]") {
  Rng rng(53);
  for (int d = 2; d <= 4; ++d) {
    const Channel ch = random_any(rng, d);
    CHECK(max_diff(apply(identity_superchannel(d), ch).jamiolkowski(),
                   ch.jamiolkowski()) == 0.0);
  }

  const DephasingSuperchannel steer = load_superchannel("hadamard_steering.json");
  const Channel h = load_channel("hadamard_channel.json");
  const Matrix out = channels::apply(apply(steer, h), ket_bra(2, 0, 0));
  CHECK(max_diff(out, plus_minus(-1.0) * plus_minus(-1.0).adjoint()) < 1e-15);
  const Matrix out1 = channels::apply(apply(steer, h), ket_bra(2, 1, 1));
  CHECK(max_diff(out1, plus_minus(1.0) * plus_minus(1.0).adjoint()) < 1e-15);

  const Channel classical = load_channel("classical_d2.json");
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(max_diff(apply(sample(rng, 2), classical).jamiolkowski(),
                   classical.jamiolkowski()) < 1e-15);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const DephasingSuperchannel sc = sample(rng, d);
    const Channel ch = random_any(rng, d);
    const Channel out_ch = apply(sc, ch);
    const Matrix& jam = ch.jamiolkowski();
    const Matrix& c = sc.correlation();
    Matrix oracle(d * d, d * d);
    for (int a = 0; a < d * d; ++a)
      for (int b = 0; b < d * d; ++b) oracle(a, b) = jam(a, b) * c(a, b);
    CHECK(max_diff(out_ch.jamiolkowski(), oracle) < 1e-15);
    CHECK(channels::cptp_violation(out_ch.jamiolkowski(), d) == std::nullopt);
    CHECK((transition_matrix(out_ch).matrix() - transition_matrix(ch).matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(apply(identity_superchannel(2), channels::identity_channel(3)),
                  DimensionError);
}

TEST_CASE("superchannels compose by Schur product", "[superchannels]") {
  Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const DephasingSuperchannel s1 = sample(rng, d);
    const DephasingSuperchannel s2 = sample(rng, d);
    const Channel ch = random_any(rng, d);
    const DephasingSuperchannel both =
        make_superchannel(schur(s1.correlation(), s2.correlation()), d);
    CHECK(max_diff(apply(s2, apply(s1, ch)).jamiolkowski(),
                   apply(both, ch).jamiolkowski()) < 1e-12);
  }
}

TEST_CASE("super Jamiolkowski matrix", "[superchannels]") {
  const Matrix sj = super_jamiolkowski(identity_superchannel(2));
  REQUIRE(sj.rows() == 16);
  Vector v = Vector::Zero(16);
  for (int a = 0; a < 4; ++a) v(a * 4 + a) = 1.0;
  CHECK(max_diff(sj, v * v.adjoint() / 4.0) < 1e-15);

  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const DephasingSuperchannel sc = sample(rng, d);
    const Matrix s = super_jamiolkowski(sc);
    const int n = d * d;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        CHECK(s(a * n + b, a * n + b) == Complex(a == b ? 1.0 / n : 0.0));
      }
    CHECK(min_eigenvalue(s) >= -1e-12);
    const Channel ch = random_any(rng, d);
    CHECK(max_diff(apply_super_jamiolkowski(s, ch), apply(sc, ch).jamiolkowski()) <
          1e-12);
  }
}

TEST_CASE("realization round trips", "[superchannels]") {
  const SuperRealization ones = realize(identity_superchannel(3));
  REQUIRE(ones.us.size() == 3);
  REQUIRE(ones.vs.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(max_diff(ones.vs[i], Matrix::Identity(9, 9)) < 1e-12);
    CHECK((ones.us[i].col(0) - ones.us[0].col(0)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(max_diff(from_unitaries(ones.us, ones.vs).correlation(),
                 Matrix::Ones(9, 9)) < 1e-12);

  auto round_trip = [](const DephasingSuperchannel& sc) {
    const SuperRealization r = realize(sc);
    for (const Matrix& u : r.us) CHECK(is_unitary(u, 1e-10));
    for (const Matrix& v : r.vs) CHECK(is_unitary(v, 1e-10));
    CHECK(max_diff(r.vs[0], Matrix::Identity(r.vs[0].rows(), r.vs[0].cols())) <
          1e-12);
    const int d = sc.dim();
    // C_{ik,jl} = <0| U_l^dagger V_j^dagger V_i U_k |0>, evaluated directly.
    Matrix rebuilt(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l) {
            const Vector left = r.vs[j] * r.us[l].col(0);
            const Vector right = r.vs[i] * r.us[k].col(0);
            rebuilt(i * d + k, j * d + l) = left.dot(right);
          }
    CHECK(max_diff(rebuilt, sc.correlation()) < 1e-9);
  };
  round_trip(load_superchannel("npt_d3.json"));
  round_trip(load_superchannel("product_d2.json"));
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    round_trip(sample(rng, 2 + trial % 3));
    round_trip(pre_post(channels::random_dephasing(rng, 3),
                        channels::random_dephasing(rng, 3)));
  }
}

TEST_CASE("from_unitaries", "[superchannels]") {
  for (int d = 2; d <= 3; ++d) {
    const std::vector<Matrix> id(d, Matrix::Identity(d * d, d * d));
    CHECK(max_diff(from_unitaries(id, id).correlation(),
                   Matrix::Ones(d * d, d * d)) < 1e-15);
  }

  const int d = 3;
  const double theta[] = {0.0, 0.7, -2.1};
  std::vector<Matrix> us(d, Matrix::Identity(9, 9));
  std::vector<Matrix> vs;
  for (double t : theta) vs.push_back(std::polar(1.0, t) * Matrix::Identity(9, 9));
  const Matrix c = from_unitaries(us, vs).correlation();
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          CHECK(std::abs(c(i * d + k, j * d + l) -
                         std::polar(1.0, theta[i] - theta[j])) < 1e-14);
        }
  const auto eig = herm_eig(c);
  CHECK(eig.values.head(8).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(57);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<Matrix> hu;
    std::vector<Matrix> hv;
    for (int m = 0; m < n; ++m) hu.push_back(haar_unitary(rng, n * n));
    for (int m = 0; m < n; ++m) hv.push_back(haar_unitary(rng, n * n));
    const Matrix cc = from_unitaries(hu, hv).correlation();
    if (!validate(cc, n).ok()) FAIL("from_unitaries produced invalid C");
  }
  std::vector<Matrix> bad(2, Matrix::Identity(4, 4));
  bad[1](0, 0) = 2.0;
  CHECK_THROWS_AS(from_unitaries(bad, std::vector<Matrix>(2, Matrix::Identity(4, 4))),
                  Error);
}

TEST_CASE("sampling is deterministic and qubit samples are PPT",
          "[superchannels]") {
  Rng a(77);
  Rng b(77);
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(max_diff(sample(a, 3).correlation(), sample(b, 3).correlation()) == 0.0);
  }
  Rng rng(58);
  for (int trial = 0; trial < 1000; ++trial) {
    const DephasingSuperchannel sc = sample(rng, 2);
    const Matrix pt = partial_transpose(sc.correlation(), {2, 2}, Subsystem::kSecond);
    const auto pt_eig = herm_eig(pt);
    if (pt_eig.values(0) < -1e-9) FAIL("qubit sample is not PPT");
    const auto c_eig = herm_eig(sc.correlation());
    if ((pt_eig.values - c_eig.values).cwiseAbs().maxCoeff() > 1e-10) {
      FAIL("qubit partial transpose changed the spectrum");
    }
    if (memory_class(sc).label == MemoryLabel::kNpt) FAIL("qubit sample NPT");
  }
}

TEST_CASE("memory classification", "[superchannels]") {
  const MemoryClass npt = memory_class(load_superchannel("npt_d3.json"));
  CHECK(npt.label == MemoryLabel::kNpt);
  CHECK(std::abs(npt.ppt_min_eig - (1.0 - std::sqrt(2.0))) < 1e-10);

  const MemoryClass product = memory_class(load_superchannel("product_d2.json"));
  CHECK(product.label == MemoryLabel::kProduct);
  CHECK(product.product_residual < 1e-10);
  CHECK(max_diff(kron(product.post_factor, product.pre_factor),
                 load_superchannel("product_d2.json").correlation()) < 1e-10);

  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const auto c1 = channels::random_dephasing(rng, d);
    const auto c2 = channels::random_dephasing(rng, d);
    const MemoryClass m = memory_class(pre_post(c1, c2));
    CHECK(m.label == MemoryLabel::kProduct);
    CHECK(m.product_residual < 1e-10);
    // Unit-diagonal factors are fixed by the product up to one scalar,
    // which the unit diagonals pin to 1.
    CHECK(max_diff(m.post_factor, c2.correlation()) < 1e-9);
    CHECK(max_diff(m.pre_factor, c1.correlation()) < 1e-9);
  }

  const MemoryClass generic = memory_class(sample(rng, 2));
  CHECK(generic.label == MemoryLabel::kPpt);
  CHECK(generic.product_residual > 1e-6);
  CHECK(to_string(MemoryLabel::kNpt) == "NPT");
}

TEST_CASE("pre- and post-processing", "[superchannels]") {
  using channels::DephasingChannelC;
  const DephasingChannelC ones(Matrix::Ones(3, 3));
  const DephasingChannelC eye(Matrix::Identity(3, 3));
  CHECK(max_diff(pre_post(ones, ones).correlation(), Matrix::Ones(9, 9)) == 0.0);

  Rng rng(60);
  const Channel ch = random_any(rng, 3);
  CHECK(max_diff(apply(pre_post(ones, eye), ch).jamiolkowski(),
                 channels::compose(channels::completely_dephasing(3), ch)
                     .jamiolkowski()) < 1e-15);

  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const auto c1 = channels::random_dephasing(rng, d);
    const auto c2 = channels::random_dephasing(rng, d);
    const Channel e = random_any(rng, d);
    const Channel direct = apply(pre_post(c1, c2), e);
    const Channel composed = channels::compose(
        channels::dephasing_channel(c2),
        channels::compose(e, channels::dephasing_channel(c1)));
    CHECK(max_diff(direct.jamiolkowski(), composed.jamiolkowski()) < 1e-12);
  }
  CHECK_THROWS_AS(pre_post(ones, DephasingChannelC(Matrix::Ones(2, 2))),
                  DimensionError);
}

TEST_CASE("action on dephasing channels", "[superchannels]") {
  CHECK(max_diff(tilde_c(identity_superchannel(3)).correlation(),
                 Matrix::Ones(3, 3)) == 0.0);
  CHECK(max_diff(tilde_c(load_superchannel("npt_d3.json")).correlation(),
                 Matrix::Identity(3, 3)) < 1e-15);

  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    const DephasingSuperchannel sc = sample(rng, d);
    const Matrix t = tilde_c(sc).correlation();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CHECK(t(i, j) == sc.correlation()(i * d + i, j * d + j));
      }
    CHECK(min_eigenvalue(t) >= -1e-12);

    const auto dc = channels::random_dephasing(rng, d);
    const auto result = act_on_dephasing(sc, dc);
    CHECK(max_diff(apply(sc, channels::dephasing_channel(dc)).jamiolkowski(),
                   channels::dephasing_channel(result).jamiolkowski()) < 1e-12);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CHECK(std::abs(result.correlation()(i, j)) <=
              std::abs(dc.correlation()(i, j)) + 1e-15);
      }
    CHECK(max_diff(act_on_dephasing(identity_superchannel(d), dc).correlation(),
                   dc.correlation()) == 0.0);
    const channels::DephasingChannelC delta(Matrix::Identity(d, d));
    CHECK(max_diff(act_on_dephasing(sc, delta).correlation(),
                   Matrix::Identity(d, d)) < 1e-15);
  }
}
