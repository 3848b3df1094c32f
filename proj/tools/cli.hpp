// Copyright 2026 The estlab Authors
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

#include "estlab/config.hpp"

namespace estlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Payload files written by one command, relative to the output directory.
using FileList = std::vector<std::string>;

FileList cmd_trace(const RunConfig& config);
FileList cmd_energy_sweep(const RunConfig& config);
FileList cmd_trajectory(const RunConfig& config);
FileList cmd_bullet(const RunConfig& config);
FileList cmd_revival(const RunConfig& config);

/// Full command line handling; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace estlab::cli
