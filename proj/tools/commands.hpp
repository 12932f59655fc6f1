// Copyright 2026 The pdkit Authors. All Rights Reserved.
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
#ifndef PDKIT_TOOLS_COMMANDS_HPP_
#define PDKIT_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pdkit::cli {

/// Entry point behind main(). Exit 0 on success, 1 for I/O and format
/// errors, 2 for validation errors. Exposed so tests can drive the
/// subcommands in-process.
int run(int argc, const char* const* argv);

/// Convenience overload; args exclude the program name.
int run(const std::vector<std::string>& args);

/// Stem -> path for the .png files directly inside dir, sorted by stem.
/// Directory evaluation pairs files through this map, so enumeration
/// order never influences results.
std::map<std::string, std::filesystem::path> png_stems(
    const std::filesystem::path& dir);

}  // namespace pdkit::cli

#endif  // PDKIT_TOOLS_COMMANDS_HPP_
