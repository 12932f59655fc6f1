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
#include "pdkit/png_io.hpp"

#include <png.h>

#include <bit>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>

#include "pdkit/errors.hpp"

namespace pdkit {

static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed");

namespace {

constexpr int kCompressionLevel = 6;  // fixed so outputs are reproducible

struct MemReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemReader*>(png_get_io_ptr(png));
  if (reader->offset + count > reader->size) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, reader->data + reader->offset, count);
  reader->offset += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

void error_callback(png_structp png, png_const_charp message) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err != nullptr) *err = message;
  std::longjmp(png_jmpbuf(png), 1);
}

void warning_callback(png_structp, png_const_charp) {}

}  // namespace

PngImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 ||
      png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
    throw io_error("not a PNG file");
  }
  std::string errmsg;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                           error_callback, warning_callback);
  if (png == nullptr) throw io_error("libpng read init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw io_error("libpng info init failed");
  }

  MemReader reader{bytes.data(), bytes.size(), 0};
  std::vector<std::uint8_t> buffer;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("PNG decode failed: " + errmsg);
  }

  png_set_read_fn(png, &reader, read_callback);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (width == 0 || height == 0 || width > 1u << 20 || height > 1u << 20) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("PNG has unreasonable dimensions");
  }

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
      png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  if constexpr (std::endian::native == std::endian::little) {
    if (bit_depth == 16) png_set_swap(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);
  const bool gray = color_type == PNG_COLOR_TYPE_GRAY;
  const bool rgb = color_type == PNG_COLOR_TYPE_RGB;
  if (!(gray && (bit_depth == 8 || bit_depth == 16)) &&
      !(rgb && bit_depth == 8)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("unsupported PNG layout (want gray 8/16-bit or RGB 8-bit)");
  }

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = buffer.data() + static_cast<std::size_t>(y) * rowbytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  PngImage out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  const std::int64_t pixels = static_cast<std::int64_t>(width) * height;
  if (gray && bit_depth == 16) {
    out.format = PngFormat::gray16;
    Image<std::uint16_t> img(out.width, out.height);
    std::memcpy(img.pixels().data(), buffer.data(), pixels * 2);
    out.gray = std::move(img);
  } else if (gray) {
    out.format = PngFormat::gray8;
    Image<std::uint16_t> img(out.width, out.height);
    for (std::int64_t i = 0; i < pixels; ++i) img[i] = buffer[i];
    out.gray = std::move(img);
  } else {
    out.format = PngFormat::rgb8;
    RgbImage img(out.width, out.height);
    std::memcpy(img.pixels().data(), buffer.data(), pixels * 3);
    out.rgb = std::move(img);
  }
  return out;
}

PngImage read_png(const std::filesystem::path& path) {
  return decode_png(read_file_bytes(path));
}

namespace {

std::vector<std::uint8_t> encode_png(const void* pixels, int width, int height,
                                     int bit_depth, int color_type,
                                     std::size_t rowbytes) {
  std::string errmsg;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                            error_callback, warning_callback);
  if (png == nullptr) throw io_error("libpng write init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw io_error("libpng info init failed");
  }

  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(static_cast<png_const_bytep>(pixels)) +
              static_cast<std::size_t>(y) * rowbytes;
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw io_error("PNG encode failed: " + errmsg);
  }

  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, kCompressionLevel);
  png_write_info(png, info);
  if constexpr (std::endian::native == std::endian::little) {
    if (bit_depth == 16) png_set_swap(png);
  }
  png_write_image(png, rows.data());
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png_gray16(const Image<std::uint16_t>& img) {
  if (img.empty()) throw validation_error("cannot encode an empty image");
  return encode_png(img.pixels().data(), img.width(), img.height(), 16,
                    PNG_COLOR_TYPE_GRAY, static_cast<std::size_t>(img.width()) * 2);
}

std::vector<std::uint8_t> encode_png_rgb8(const RgbImage& img) {
  if (img.empty()) throw validation_error("cannot encode an empty image");
  return encode_png(img.pixels().data(), img.width(), img.height(), 8,
                    PNG_COLOR_TYPE_RGB, static_cast<std::size_t>(img.width()) * 3);
}

void write_png_gray16(const std::filesystem::path& path,
                      const Image<std::uint16_t>& img) {
  write_file_atomic(path, encode_png_gray16(img));
}

void write_png_rgb8(const std::filesystem::path& path, const RgbImage& img) {
  write_file_atomic(path, encode_png_rgb8(img));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("read failed: " + path.string());
  return bytes;
}

namespace {

// Unlinks the temp file unless the rename committed.
struct TempGuard {
  std::filesystem::path path;
  bool committed = false;
  ~TempGuard() {
    if (!committed) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }
};

}  // namespace

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  TempGuard guard{tmp};
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot create file: " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("rename failed for " + path.string() + ": " + ec.message());
  guard.committed = true;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  write_file_atomic(path,
                    {reinterpret_cast<const std::uint8_t*>(text.data()),
                     text.size()});
}

}  // namespace pdkit
