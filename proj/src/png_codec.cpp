// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

// libpng glue. Error handling uses libpng's setjmp protocol; everything that
// outlives a longjmp is owned by the caller frame.

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "patchroute/error.hpp"
#include "patchroute/io.hpp"
#include "png_codec.hpp"

namespace patchroute::io {

namespace {

struct ReadCursor {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void read_callback(png_structp png, png_bytep out, png_size_t n) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + n > cur->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, cur->data + cur->pos, n);
  cur->pos += n;
}

void write_callback(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void flush_callback(png_structp) {}

// libpng would print to stderr; keep the message for the thrown Error instead.
[[noreturn]] void error_callback(png_structp png, png_const_charp msg) {
  *static_cast<std::string*>(png_get_error_ptr(png)) = msg;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

struct DecodedHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  bool palette = false;
};

// Returns false on a libpng error. `pixels` and `header` live in the caller.
bool decode_into(std::span<const std::uint8_t> bytes, bool keep_indices,
                 std::vector<std::uint8_t>* pixels, std::vector<png_bytep>* rows,
                 DecodedHeader* header, std::string* message) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, message, error_callback, warning_callback);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  ReadCursor cursor{bytes.data(), bytes.size(), 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &cursor, read_callback);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  header->palette = color == PNG_COLOR_TYPE_PALETTE;
  if (color == PNG_COLOR_TYPE_PALETTE) {
    if (keep_indices) {
      png_set_packing(png);
    } else {
      png_set_palette_to_rgb(png);
    }
  }
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (!keep_indices && png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  header->width = png_get_image_width(png, info);
  header->height = png_get_image_height(png, info);
  header->channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels->resize(rowbytes * header->height);
  rows->resize(header->height);
  for (png_uint_32 y = 0; y < header->height; ++y) (*rows)[y] = pixels->data() + y * rowbytes;
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_into(int width, int height, int color_type, int channels,
                 const std::uint8_t* pixels, const std::vector<png_color>* palette,
                 std::vector<std::uint8_t>* out, std::vector<png_bytep>* rows,
                 std::string* message) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, message, error_callback, warning_callback);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, write_callback, flush_callback);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (palette) {
    png_set_PLTE(png, info, palette->data(), static_cast<int>(palette->size()));
  }
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  rows->resize(height);
  for (int y = 0; y < height; ++y) {
    (*rows)[y] = const_cast<png_bytep>(pixels + y * stride);
  }
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

int color_type_for(int channels) {
  switch (channels) {
    case 1: return PNG_COLOR_TYPE_GRAY;
    case 3: return PNG_COLOR_TYPE_RGB;
    default: return PNG_COLOR_TYPE_RGBA;
  }
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows;
  std::string message;
  if (image.width() <= 0 || image.height() <= 0 ||
      !encode_into(image.width(), image.height(), color_type_for(image.channels()),
                   image.channels(), image.data().data(), nullptr, &out, &rows, &message)) {
    throw Error(ErrorCode::IoError, "PNG encoding failed: " + message);
  }
  return out;
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  DecodedHeader header;
  std::string message;
  if (!decode_into(bytes, false, &pixels, &rows, &header, &message)) {
    throw Error(ErrorCode::CorruptFile, "PNG decoding failed: " + message);
  }
  if (header.channels != 1 && header.channels != 3 && header.channels != 4) {
    throw Error(ErrorCode::CorruptFile,
                "unsupported PNG channel count " + std::to_string(header.channels));
  }
  return RasterImage(static_cast<int>(header.width), static_cast<int>(header.height),
                     header.channels, std::move(pixels));
}

std::vector<std::uint8_t> encode_indexed_png(int width, int height,
                                             std::span<const std::uint8_t> indices) {
  std::vector<png_color> palette(256);
  for (int i = 0; i < 256; ++i) {
    // Bit-reversed label spread, the usual segmentation-visualization palette.
    int r = 0, g = 0, b = 0, c = i;
    for (int k = 0; k < 8; ++k) {
      r |= ((c >> 0) & 1) << (7 - k);
      g |= ((c >> 1) & 1) << (7 - k);
      b |= ((c >> 2) & 1) << (7 - k);
      c >>= 3;
    }
    palette[i] = png_color{static_cast<png_byte>(r), static_cast<png_byte>(g),
                           static_cast<png_byte>(b)};
  }
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows;
  std::string message;
  if (width <= 0 || height <= 0 ||
      !encode_into(width, height, PNG_COLOR_TYPE_PALETTE, 1, indices.data(), &palette, &out,
                   &rows, &message)) {
    throw Error(ErrorCode::IoError, "indexed PNG encoding failed: " + message);
  }
  return out;
}

IndexedImage decode_indexed_png(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  DecodedHeader header;
  std::string message;
  if (!decode_into(bytes, true, &pixels, &rows, &header, &message)) {
    throw Error(ErrorCode::CorruptFile, "PNG decoding failed: " + message);
  }
  if (header.channels != 1) {
    throw Error(ErrorCode::CorruptFile, "parsing PNG must be indexed or 8-bit grayscale");
  }
  return {static_cast<int>(header.width), static_cast<int>(header.height), std::move(pixels)};
}

}  // namespace patchroute::io
