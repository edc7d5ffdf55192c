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

// Runs the twelve acceptance criteria at full trial counts and prints one
// line per criterion.

#include <cstdio>

#include "dephaser/verify.hpp"

int main() {
  dephaser::verify::AcceptanceConfig config;
  config.fixture_dir = DEPHASER_FIXTURE_DIR;
  const auto results = dephaser::verify::run_acceptance(config);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    std::printf("[%s] %2d %s: trials=%d worst=%.3e threshold=%.3e %s\n",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.trials,
                r.worst, r.threshold, r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 && results.size() == 12 ? 0 : 1;
}
