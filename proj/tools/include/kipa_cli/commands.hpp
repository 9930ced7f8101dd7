// Copyright 2026 The kipa-esr Authors
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

#include "kipa_cli/config.hpp"

namespace kipa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& command_names();
const std::vector<std::string>& fit_kinds();

// Runs one command against a validated config. `arg` is the fit kind for
// "fit" and must be empty otherwise.
void run_command(const std::string& command, const std::string& arg, const Config& cfg, std::ostream& out);

// Whole front end: parses argv, loads config, runs, writes to --out or `out`.
// Returns the process exit code; messages go to `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kipa::cli
