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

#include "dephaser/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dephaser::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

int integer_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw FormatError(std::string("field \"") + key + "\" must be an integer");
  }
  return v.get<int>();
}

std::vector<Matrix> matrix_list(const json& j, const char* key) {
  const json& list = field(j, key);
  if (!list.is_array()) {
    throw FormatError(std::string("field \"") + key + "\" must be an array");
  }
  std::vector<Matrix> out;
  for (const json& m : list) out.push_back(matrix_from_json(m));
  return out;
}

json matrix_array(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const Matrix& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  throw FormatError("expected a number");
}

json to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json to_json(const RealMatrix& m) {
  return to_json(Matrix(m.cast<Complex>()));
}

Matrix matrix_from_json(const json& j) {
  const int rows = integer_field(j, "rows");
  const int cols = integer_field(j, "cols");
  const json& data = field(j, "data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      data.size() != static_cast<std::size_t>(rows) * cols) {
    throw FormatError("matrix data does not match rows x cols");
  }
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const json& entry = data[static_cast<std::size_t>(i) * cols + k];
      if (entry.is_number()) {
        out(i, k) = entry.get<double>();
      } else if (entry.is_array() && entry.size() == 2 &&
                 entry[0].is_number() && entry[1].is_number()) {
        out(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw FormatError("matrix entries must be [re, im] pairs");
      }
    }
  return out;
}

json to_json(const channels::Channel& ch) {
  return {{"dim", ch.dim()}, {"jamiolkowski", to_json(ch.jamiolkowski())}};
}

channels::Channel channel_from_json(const json& j, const Tolerances& tol) {
  const int d = integer_field(j, "dim");
  if (d < 1) throw FormatError("channel dimension must be positive");
  if (j.contains("jamiolkowski")) {
    const Matrix jam = matrix_from_json(j.at("jamiolkowski"));
    if (jam.rows() != d * d || jam.cols() != d * d) {
      throw DimensionError("channel: Jamiolkowski matrix must be d^2 x d^2");
    }
    return channels::Channel::from_jamiolkowski(jam, tol);
  }
  if (j.contains("kraus")) {
    std::vector<Matrix> ks = matrix_list(j, "kraus");
    for (const Matrix& k : ks) {
      if (k.rows() != d || k.cols() != d) {
        throw DimensionError("channel: Kraus operators must be d x d");
      }
    }
    return channels::from_kraus(std::move(ks), tol);
  }
  throw FormatError("channel needs \"jamiolkowski\" or \"kraus\"");
}

json to_json(const channels::DephasingChannelC& dc) {
  return {{"dim", dc.dim()}, {"correlation", to_json(dc.correlation())}};
}

json to_json(const superchannels::DephasingSuperchannel& sc) {
  return {{"dim", sc.dim()}, {"correlation", to_json(sc.correlation())}};
}

std::pair<Matrix, int> correlation_from_json(const json& j) {
  const int d = integer_field(j, "dim");
  if (d < 1) throw FormatError("superchannel dimension must be positive");
  return {matrix_from_json(field(j, "correlation")), d};
}

json to_json(const superchannels::SuperRealization& r) {
  return {{"us", matrix_array(r.us)}, {"vs", matrix_array(r.vs)}};
}

superchannels::SuperRealization realization_from_json(const json& j) {
  return {matrix_list(j, "us"), matrix_list(j, "vs")};
}

json to_json(const superchannels::Violation& v) {
  json out = {{"kind", superchannels::to_string(v.kind)},
              {"magnitude", number(v.magnitude)},
              {"description", v.describe()}};
  if (v.kind != superchannels::ViolationKind::kNotPsd) {
    out["entry"] = {v.i, v.k, v.j, v.l};
  }
  if (v.reference_block >= 0) out["reference_block"] = v.reference_block;
  return out;
}

json to_json(const superchannels::Witness& w) {
  return {{"violation", to_json(w.violation)},
          {"channel", to_json(w.channel)},
          {"defect", number(w.defect)}};
}

json to_json(const superchannels::MemoryClass& mc) {
  return {{"label", superchannels::to_string(mc.label)},
          {"ppt_min_eig", number(mc.ppt_min_eig)},
          {"product_residual", number(mc.product_residual)},
          {"singular_ratio", number(mc.singular_ratio)},
          {"post_factor", to_json(mc.post_factor)},
          {"pre_factor", to_json(mc.pre_factor)}};
}

json to_json(const coherence::RobustnessCertificate& cert) {
  json out = {{"value", number(cert.value)},
              {"classical_target", to_json(cert.classical_target.matrix())},
              {"primal_dual_gap", number(cert.primal_dual_gap)},
              {"dual_value", number(cert.dual_value)},
              {"newton_steps", cert.newton_steps}};
  out["noise_channel"] =
      cert.noise_channel ? to_json(*cert.noise_channel) : json(nullptr);
  return out;
}

json to_json(const coherence::DiscriminationInstance& inst) {
  json scs = json::array();
  for (const auto& sc : inst.superchannels) scs.push_back(to_json(sc));
  json log = json::array();
  for (const auto& rec : inst.log) {
    log.push_back({{"restart", rec.restart},
                   {"iter", rec.iter},
                   {"objective", number(rec.objective)}});
  }
  return {{"gate", to_json(inst.gate)},
          {"superchannels", scs},
          {"input_state", to_json(inst.input_state)},
          {"povm", matrix_array(inst.povm)},
          {"p_succ", number(inst.p_succ)},
          {"best_restart", inst.best_restart},
          {"log", log}};
}

json to_json(const coherence::BoundCheck& check) {
  return {{"m", check.m},
          {"p_succ", number(check.p_succ)},
          {"robustness", number(check.robustness)},
          {"lhs", number(check.lhs)},
          {"rhs", number(check.rhs)},
          {"slack", number(check.slack)},
          {"discrimination_count_bound",
           number(check.discrimination_count_bound)},
          {"holds", check.holds}};
}

json to_json(const coherence::MonotonicityReport& report) {
  return {{"trials", report.trials},
          {"violations", report.violations},
          {"max_violation", number(report.max_violation)},
          {"min_gap", number(report.min_gap)},
          {"mean_gap", number(report.mean_gap)},
          {"max_gap", number(report.max_gap)}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dephaser::io
