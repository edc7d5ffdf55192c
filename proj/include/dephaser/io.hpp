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

#include <string>
#include <vector>

#include "json.hpp"

#include "dephaser/channels.hpp"
#include "dephaser/coherence.hpp"
#include "dephaser/superchannels.hpp"

namespace dephaser::io {

using nlohmann::json;

/// Malformed or structurally wrong JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Finite values as numbers, infinities as the strings "inf" / "-inf".
json number(double x);
double to_number(const json& j);

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json to_json(const RealMatrix& m);

json to_json(const channels::Channel& ch);
/// Accepts {"dim", "jamiolkowski"} or {"dim", "kraus": [Matrix...]}.
channels::Channel channel_from_json(const json& j, const Tolerances& tol = {});

json to_json(const channels::DephasingChannelC& dc);

json to_json(const superchannels::DephasingSuperchannel& sc);
/// The raw correlation matrix and dimension of a superchannel document,
/// unvalidated.
std::pair<Matrix, int> correlation_from_json(const json& j);

json to_json(const superchannels::SuperRealization& r);
superchannels::SuperRealization realization_from_json(const json& j);

json to_json(const superchannels::Violation& v);
json to_json(const superchannels::Witness& w);
json to_json(const superchannels::MemoryClass& mc);

json to_json(const coherence::RobustnessCertificate& cert);
json to_json(const coherence::DiscriminationInstance& inst);
json to_json(const coherence::BoundCheck& check);
json to_json(const coherence::MonotonicityReport& report);

json read_file(const std::string& path);
/// Two-space indented JSON followed by a newline.
std::string dump(const json& j);

}  // namespace dephaser::io
