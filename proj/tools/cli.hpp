// Copyright 2026 The aifgrid Authors
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


#ifndef AIFGRID_TOOLS_CLI_HPP_
#define AIFGRID_TOOLS_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aifgrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct Command {
  std::string verb;
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0};
  bool quiet = false;
};

const std::vector<std::string>& Verbs();

// Runs one command; returns the process exit status. The one-line summary
// goes to `out`, diagnostics to `err`.
int Execute(const Command& cmd, std::ostream& out, std::ostream& err);

// Parses argv and executes. Usage errors exit with kExitConfig.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

// Writes through a temporary sibling and renames it into place. Throws
// IoError.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace aifgrid::cli

#endif  // AIFGRID_TOOLS_CLI_HPP_
