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
//
// Class-table and panoptic-map invariant tests.

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdkit/classes.hpp"
#include "pdkit/errors.hpp"
#include "pdkit/panoptic.hpp"
#include "test_helpers.hpp"

using namespace pdkit;
using pdkit::test::TempDir;
using pdkit::test::make_map;
using pdkit::test::small_classes;

TEST_CASE("built-in class set has 19 classes split into stuff and things") {
  const ClassSet classes = ClassSet::cityscapes();
  CHECK(classes.defs().size() == 19);
  CHECK(classes.stuff_ids().size() == 11);
  CHECK(classes.thing_ids().size() == 8);
  CHECK(classes.at(7).name == "road");
  CHECK_FALSE(classes.at(7).is_thing);
  CHECK(classes.at(26).name == "car");
  CHECK(classes.at(26).is_thing);
  CHECK_FALSE(classes.contains(0));
  CHECK(classes.find(99) == nullptr);
  CHECK_THROWS_AS(classes.at(99), validation_error);
}

TEST_CASE("class set rejects duplicate ids") {
  CHECK_THROWS_AS(ClassSet({{1, "a", false}, {1, "b", true}}),
                  validation_error);
}

TEST_CASE("class set json round trip preserves ids, names, and kinds") {
  TempDir dir;
  const ClassSet original = small_classes();
  const auto doc = original.to_json();
  const ClassSet back = ClassSet::from_json(doc);
  REQUIRE(back.defs().size() == original.defs().size());
  for (std::size_t i = 0; i < back.defs().size(); ++i) {
    CHECK(back.defs()[i].id == original.defs()[i].id);
    CHECK(back.defs()[i].name == original.defs()[i].name);
    CHECK(back.defs()[i].is_thing == original.defs()[i].is_thing);
  }
}

TEST_CASE("malformed class documents are io errors") {
  CHECK_THROWS_AS(ClassSet::from_json(nlohmann::json::object()), io_error);
  TempDir dir;
  CHECK_THROWS_AS(ClassSet::from_json_file(dir / "missing.json"), io_error);
}

TEST_CASE("panoptic map sorts its segment table by id") {
  const PanopticMap map = make_map(2, 2, {5, 5, 3, 3},
                                   {{5, 2, true, false}, {3, 1, false, false}});
  REQUIRE(map.segments().size() == 2);
  CHECK(map.segments()[0].id == 3);
  CHECK(map.segments()[1].id == 5);
}

TEST_CASE("panoptic map rejects malformed tables and rasters") {
  // Void id in the table.
  CHECK_THROWS_AS(make_map(2, 1, {0, 1}, {{0, 1, false, false},
                                          {1, 1, false, false}}),
                  validation_error);
  // Crowd marking on a stuff segment.
  CHECK_THROWS_AS(make_map(2, 1, {1, 1}, {{1, 1, false, true}}),
                  validation_error);
  // Duplicate segment ids.
  CHECK_THROWS_AS(make_map(2, 1, {1, 1}, {{1, 1, false, false},
                                          {1, 2, true, false}}),
                  validation_error);
  // A segment that covers no pixel.
  CHECK_THROWS_AS(make_map(2, 1, {1, 1}, {{1, 1, false, false},
                                          {2, 2, true, false}}),
                  validation_error);
}

TEST_CASE("a pixel id missing from the table is reported with its location") {
  try {
    make_map(3, 2, {1, 1, 1, 1, 9, 1}, {{1, 1, false, false}});
    FAIL("expected a validation error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("9") != std::string::npos);
    CHECK(msg.find("(1, 1)") != std::string::npos);
  }
}

TEST_CASE("void pixels need no table entry") {
  const PanopticMap map = make_map(2, 2, {0, 0, 7, 7}, {{7, 2, true, false}});
  CHECK(map.id_at(0, 0) == PanopticMap::kVoidId);
  CHECK(map.id_at(1, 1) == 7);
  CHECK(map.area(7) == 2);
}

TEST_CASE("segment lookup and areas") {
  const PanopticMap map = make_map(3, 1, {4, 4, 6},
                                   {{4, 1, false, false}, {6, 3, true, false}});
  CHECK(map.area(4) == 2);
  CHECK(map.area(6) == 1);
  CHECK(map.segment(6).category_id == 3);
  CHECK(map.find_segment(5) == nullptr);
  CHECK_THROWS_AS(map.segment(5), validation_error);
  CHECK_THROWS_AS(map.area(5), validation_error);
}

TEST_CASE("panoptic maps compare by raster and table") {
  const auto a = make_map(2, 1, {1, 2},
                          {{1, 1, false, false}, {2, 2, true, false}});
  const auto b = make_map(2, 1, {1, 2},
                          {{1, 1, false, false}, {2, 2, true, false}});
  const auto c = make_map(2, 1, {2, 1},
                          {{1, 1, false, false}, {2, 2, true, false}});
  CHECK(a == b);
  CHECK_FALSE(a == c);
}
