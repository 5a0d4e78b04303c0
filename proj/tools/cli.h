/*
 * Copyright 2026 The TrustQuant Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TRUSTQUANT_TOOLS_CLI_H_
#define TRUSTQUANT_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace trustquant::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs the trustquant command line. argv[0] is the program name.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace trustquant::cli

#endif  // TRUSTQUANT_TOOLS_CLI_H_
