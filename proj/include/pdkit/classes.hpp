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
#ifndef PDKIT_CLASSES_HPP_
#define PDKIT_CLASSES_HPP_

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pdkit {

struct ClassDef {
  int id = 0;
  std::string name;
  bool is_thing = false;
  bool operator==(const ClassDef&) const = default;
};

/// The active category set. Classes are kept sorted by id.
class ClassSet {
 public:
  ClassSet() = default;
  explicit ClassSet(std::vector<ClassDef> defs);

  /// Cityscapes urban-driving classes with their original label ids:
  /// 11 stuff (road..sky) and 8 things (person..bicycle).
  static ClassSet cityscapes();

  static ClassSet from_json(const nlohmann::json& doc);
  static ClassSet from_json_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  bool contains(int id) const { return index_.count(id) != 0; }
  const ClassDef* find(int id) const;
  /// Throws validation_error for an unknown id.
  const ClassDef& at(int id) const;

  const std::vector<ClassDef>& defs() const { return defs_; }
  std::vector<int> thing_ids() const;
  std::vector<int> stuff_ids() const;
  bool empty() const { return defs_.empty(); }

 private:
  std::vector<ClassDef> defs_;
  std::unordered_map<int, std::size_t> index_;
};

}  // namespace pdkit

#endif  // PDKIT_CLASSES_HPP_
