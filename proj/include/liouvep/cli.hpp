// Copyright 2026 The liouvep Authors
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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace liouvep::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "LIOUVEP_OUTPUT_DIR";

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns the process exit code: 0 on completed analyses,
/// 1 on verification mismatches, 2 on invalid input or numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Outcome of the closed-form cross-checks run by the verify command.
struct VerifyReport {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  nlohmann::ordered_json deviations = nlohmann::ordered_json::array();
  std::size_t failures = 0;  // excludes logged printed-formula deviations
};

/// example is "example1", "example2" or "all".
VerifyReport verify(const std::string& example, std::size_t samples, std::uint64_t seed);

}  // namespace liouvep::cli
