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
#ifndef PDKIT_PNG_IO_HPP_
#define PDKIT_PNG_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pdkit/image.hpp"

namespace pdkit {

enum class PngFormat { gray8, gray16, rgb8 };

/// Decoded PNG pixels. Grayscale samples are widened to 16 bit; 8-bit
/// gray keeps its 0..255 range (format tells callers which it was).
struct PngImage {
  int width = 0;
  int height = 0;
  PngFormat format = PngFormat::gray8;
  Image<std::uint16_t> gray;  // gray8 / gray16
  RgbImage rgb;               // rgb8 (alpha stripped)
};

/// Throws io_error on malformed data or unsupported layouts.
PngImage decode_png(std::span<const std::uint8_t> bytes);
PngImage read_png(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png_gray16(const Image<std::uint16_t>& img);
std::vector<std::uint8_t> encode_png_rgb8(const RgbImage& img);

void write_png_gray16(const std::filesystem::path& path,
                      const Image<std::uint16_t>& img);
void write_png_rgb8(const std::filesystem::path& path, const RgbImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Writes through a temp file and renames, so a failed run never leaves a
/// partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace pdkit

#endif  // PDKIT_PNG_IO_HPP_
