// Copyright 2026 The simprune Authors. All Rights Reserved.
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

namespace simprune {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerificationFailed = 2;

// Entry point of the `simprune` tool. Subcommands: prune, distances, flops,
// verify, report. Human-readable output goes to `out`, diagnostics and usage
// to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

int cli_main(int argc, const char* const* argv);

}  // namespace simprune
