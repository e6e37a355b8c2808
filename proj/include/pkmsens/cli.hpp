// Copyright 2026 The pkmsens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PKMSENS_CLI_HPP_
#define PKMSENS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace pkmsens::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailed = 1;
inline constexpr int kIoError = 2;
inline constexpr int kConfigError = 3;
inline constexpr int kOutOfWorkspace = 4;

// Runs the command line `args` (without the program name) and returns the exit
// code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pkmsens::cli

#endif  // PKMSENS_CLI_HPP_
