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
#include "pdkit/classes.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pdkit/errors.hpp"

namespace pdkit {

ClassSet::ClassSet(std::vector<ClassDef> defs) : defs_(std::move(defs)) {
  std::sort(defs_.begin(), defs_.end(),
            [](const ClassDef& a, const ClassDef& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    if (!index_.emplace(defs_[i].id, i).second) {
      throw validation_error("duplicate class id " +
                             std::to_string(defs_[i].id));
    }
  }
}

ClassSet ClassSet::cityscapes() {
  return ClassSet({
      {7, "road", false},
      {8, "sidewalk", false},
      {11, "building", false},
      {12, "wall", false},
      {13, "fence", false},
      {17, "pole", false},
      {19, "traffic light", false},
      {20, "traffic sign", false},
      {21, "vegetation", false},
      {22, "terrain", false},
      {23, "sky", false},
      {24, "person", true},
      {25, "rider", true},
      {26, "car", true},
      {27, "truck", true},
      {28, "bus", true},
      {31, "train", true},
      {32, "motorcycle", true},
      {33, "bicycle", true},
  });
}

ClassSet ClassSet::from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw io_error("classes document must be a JSON array");
  }
  std::vector<ClassDef> defs;
  defs.reserve(doc.size());
  for (const auto& item : doc) {
    ClassDef def;
    def.id = item.at("id").get<int>();
    def.name = item.at("name").get<std::string>();
    def.is_thing = item.at("isthing").get<bool>();
    defs.push_back(std::move(def));
  }
  return ClassSet(std::move(defs));
}

ClassSet ClassSet::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open classes file: " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed classes JSON " + path.string() + ": " +
                   e.what());
  }
  return from_json(doc);
}

nlohmann::json ClassSet::to_json() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& def : defs_) {
    doc.push_back({{"id", def.id}, {"name", def.name}, {"isthing", def.is_thing}});
  }
  return doc;
}

const ClassDef* ClassSet::find(int id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &defs_[it->second];
}

const ClassDef& ClassSet::at(int id) const {
  const ClassDef* def = find(id);
  if (def == nullptr) {
    throw validation_error("unknown class id " + std::to_string(id));
  }
  return *def;
}

std::vector<int> ClassSet::thing_ids() const {
  std::vector<int> ids;
  for (const auto& def : defs_) {
    if (def.is_thing) ids.push_back(def.id);
  }
  return ids;
}

std::vector<int> ClassSet::stuff_ids() const {
  std::vector<int> ids;
  for (const auto& def : defs_) {
    if (!def.is_thing) ids.push_back(def.id);
  }
  return ids;
}

}  // namespace pdkit
