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
// Image container and PNG codec tests.

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pdkit/errors.hpp"
#include "pdkit/image.hpp"
#include "pdkit/png_io.hpp"
#include "pdkit/synth.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace pdkit;
using pdkit::test::TempDir;

TEST_CASE("image constructor rejects bad dimensions and sizes") {
  CHECK_THROWS_AS(Image<std::uint8_t>(0, 4), validation_error);
  CHECK_THROWS_AS(Image<std::uint8_t>(4, -1), validation_error);
  CHECK_THROWS_AS(Image<std::uint8_t>(2, 2, std::vector<std::uint8_t>(3)),
                  validation_error);
  CHECK_NOTHROW(Image<std::uint8_t>(2, 2, std::vector<std::uint8_t>(4)));
}

TEST_CASE("image indexing is row-major") {
  Image<int> img(3, 2, {1, 2, 3, 4, 5, 6});
  CHECK(img.at(0, 0) == 1);
  CHECK(img.at(0, 2) == 3);
  CHECK(img.at(1, 0) == 4);
  CHECK(img.at(1, 2) == 6);
  CHECK(img[4] == 5);
  CHECK(img.pixel_count() == 6);
}

TEST_CASE("gray16 png survives an encode/decode round trip") {
  Image<std::uint16_t> img(5, 3);
  for (std::int64_t i = 0; i < img.pixel_count(); ++i) {
    img[i] = static_cast<std::uint16_t>(i * 7919 % 65536);
  }
  const auto bytes = encode_png_gray16(img);
  const PngImage decoded = decode_png(bytes);
  CHECK(decoded.format == PngFormat::gray16);
  CHECK(decoded.width == 5);
  CHECK(decoded.height == 3);
  CHECK(decoded.gray == img);
}

TEST_CASE("rgb8 png survives an encode/decode round trip") {
  RgbImage img(4, 4);
  for (std::int64_t i = 0; i < img.pixel_count(); ++i) {
    img[i] = Rgb{static_cast<std::uint8_t>(3 * i), static_cast<std::uint8_t>(i),
                 static_cast<std::uint8_t>(255 - i)};
  }
  const auto bytes = encode_png_rgb8(img);
  const PngImage decoded = decode_png(bytes);
  CHECK(decoded.format == PngFormat::rgb8);
  CHECK(decoded.width == 4);
  CHECK(decoded.height == 4);
  CHECK(decoded.rgb == img);
}

TEST_CASE("png encoding is deterministic") {
  Image<std::uint16_t> img(16, 16);
  for (std::int64_t i = 0; i < img.pixel_count(); ++i) {
    img[i] = static_cast<std::uint16_t>(i * 31 % 65536);
  }
  CHECK(encode_png_gray16(img) == encode_png_gray16(img));
}

TEST_CASE("decoder rejects garbage and truncated input") {
  const std::vector<std::uint8_t> garbage = {0x01, 0x02, 0x03, 0x04};
  CHECK_THROWS_AS(decode_png(garbage), io_error);

  Image<std::uint16_t> img(8, 8, std::uint16_t{1234});
  auto bytes = encode_png_gray16(img);
  bytes.resize(bytes.size() / 2);
  CHECK_THROWS_AS(decode_png(bytes), io_error);

  CHECK_THROWS_AS(decode_png(std::span<const std::uint8_t>{}), io_error);
}

TEST_CASE("decoder survives random corruption without crashing") {
  Image<std::uint16_t> img(12, 9);
  for (std::int64_t i = 0; i < img.pixel_count(); ++i) {
    img[i] = static_cast<std::uint16_t>(i);
  }
  const auto clean = encode_png_gray16(img);
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto bytes = clean;
    const int flips = 1 + static_cast<int>(rng.next_below(8));
    for (int f = 0; f < flips; ++f) {
      const auto pos = rng.next_below(bytes.size());
      bytes[pos] ^= static_cast<std::uint8_t>(1 + rng.next_below(255));
    }
    try {
      const PngImage decoded = decode_png(bytes);
      CHECK(decoded.width > 0);   // Either a valid image or an exception,
      CHECK(decoded.height > 0);  // never an empty or negative geometry.
    } catch (const io_error&) {
      // Rejected corrupt input: fine.
    }
  }
}

TEST_CASE("file round trip via write/read helpers") {
  TempDir dir;
  Image<std::uint16_t> gray(6, 2, std::uint16_t{512});
  write_png_gray16(dir / "g.png", gray);
  const PngImage back = read_png(dir / "g.png");
  CHECK(back.format == PngFormat::gray16);
  CHECK(back.gray == gray);

  RgbImage rgb(2, 2, Rgb{10, 20, 30});
  write_png_rgb8(dir / "c.png", rgb);
  CHECK(read_png(dir / "c.png").rgb == rgb);
}

TEST_CASE("reading a missing file reports an io error") {
  TempDir dir;
  CHECK_THROWS_AS(read_png(dir / "nope.png"), io_error);
  CHECK_THROWS_AS(read_file_bytes(dir / "nope.bin"), io_error);
}

TEST_CASE("atomic writes leave no temporary files behind") {
  TempDir dir;
  write_text_atomic(dir / "a.txt", "hello\n");
  const std::vector<std::uint8_t> payload = {1, 2, 3};
  write_file_atomic(dir / "b.bin", payload);

  int entries = 0;
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    ++entries;
    const auto name = entry.path().filename().string();
    CHECK((name == "a.txt" || name == "b.bin"));
  }
  CHECK(entries == 2);
  CHECK(read_file_bytes(dir / "b.bin") == payload);
}

TEST_CASE("atomic write replaces existing content completely") {
  TempDir dir;
  write_text_atomic(dir / "f.txt", "a longer first version");
  write_text_atomic(dir / "f.txt", "v2");
  const auto bytes = read_file_bytes(dir / "f.txt");
  CHECK(std::string(bytes.begin(), bytes.end()) == "v2");
}
