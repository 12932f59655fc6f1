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
#ifndef PDKIT_ERRORS_HPP_
#define PDKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pdkit {

/// File, format, and decode failures. The CLI maps these to exit code 1.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Contract violations: bad dimensions, unknown ids, invalid configs,
/// empty evaluation sets. The CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pdkit

#endif  // PDKIT_ERRORS_HPP_
