/* Copyright 2026 The jacprop Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jacprop::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoOrParseFailure = 1;
inline constexpr int kValidationFailure = 2;
inline constexpr int kSingularity = 3;
inline constexpr int kCheckFailed = 4;

// Runs one command line (args[0] is the program name). Data goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace jacprop::cli
