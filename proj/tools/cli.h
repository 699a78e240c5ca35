// Copyright 2026 The qnsr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNSR_TOOLS_CLI_H_
#define QNSR_TOOLS_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qnsr/errors.h"
#include "qnsr/operator_core.h"

namespace qnsr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Invalid command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Runs one CLI invocation; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses "re+imj", "re", "imj" (no spaces). Throws ConfigError.
Complex parse_complex(std::string_view token);

/// Reads a custom observable: a header line `dim <n>` followed by n*n
/// whitespace-separated complex entries in row-major order. The matrix must
/// be Hermitian.
Operator parse_observable(std::istream& in);
Operator read_observable_file(const std::filesystem::path& path);

/// "lo:hi:n" (log- or linear-spaced) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text, bool log_spaced);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace qnsr::cli

#endif  // QNSR_TOOLS_CLI_H_
