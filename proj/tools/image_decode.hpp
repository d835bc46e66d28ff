#pragma once

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "nftsquat/errors.hpp"
#include "nftsquat/imagehash.hpp"

namespace imgio {

using nftsquat::GrayImage;
using nftsquat::ValidationError;

/// ITU-R BT.601 luma, rounded. Alpha is ignored.
inline std::uint8_t luma(unsigned r, unsigned g, unsigned b) {
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

inline GrayImage from_rgb(std::size_t w, std::size_t h, const std::vector<std::uint8_t>& rgb, std::size_t channels) {
  GrayImage img(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    const auto* p = &rgb[i * channels];
    img.pixels[i] = channels >= 3 ? luma(p[0], p[1], p[2]) : p[0];
  }
  return img;
}

inline GrayImage decode_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw ValidationError(path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ValidationError(path.string() + ": " + msg);
  }
  return from_rgb(image.width, image.height, buf, 4);
}

namespace detail {
struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_fail(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}
}  // namespace detail

inline GrayImage decode_jpeg(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "rb"), std::fclose);
  if (!file) throw ValidationError("cannot open " + path.string());
  jpeg_decompress_struct cinfo{};
  detail::JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = detail::jpeg_fail;
  std::vector<std::uint8_t> rgb;
  std::size_t w = 0, h = 0, channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw ValidationError(path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space != JCS_GRAYSCALE) cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  w = cinfo.output_width;
  h = cinfo.output_height;
  channels = static_cast<std::size_t>(cinfo.output_components);
  rgb.resize(w * h * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_rgb(w, h, rgb, channels);
}

/// Binary PGM (P5) with maxval up to 255.
inline GrayImage decode_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  auto token = [&]() {
    std::string t;
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
        continue;
      }
      if (std::isspace(c)) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(static_cast<char>(c));
    }
    return t;
  };
  if (token() != "P5") throw ValidationError(path.string() + ": not a binary PGM");
  std::size_t w = 0, h = 0;
  unsigned maxval = 0;
  try {
    w = std::stoul(token());
    h = std::stoul(token());
    maxval = static_cast<unsigned>(std::stoul(token()));
  } catch (const std::exception&) {
    throw ValidationError(path.string() + ": malformed PGM header");
  }
  if (maxval == 0 || maxval > 255) throw ValidationError(path.string() + ": unsupported PGM maxval");
  std::vector<std::uint8_t> px(w * h);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (static_cast<std::size_t>(in.gcount()) != px.size()) throw ValidationError(path.string() + ": truncated PGM");
  if (maxval != 255)
    for (auto& p : px) p = static_cast<std::uint8_t>((p * 255u + maxval / 2) / maxval);
  return GrayImage(w, h, std::move(px));
}

/// Picks the decoder from the file's magic bytes.
inline GrayImage decode_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  unsigned char magic[8]{};
  in.read(reinterpret_cast<char*>(magic), 8);
  in.close();
  if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') return decode_png(path);
  if (magic[0] == 0xFF && magic[1] == 0xD8) return decode_jpeg(path);
  if (magic[0] == 'P' && magic[1] == '5') return decode_pgm(path);
  throw ValidationError(path.string() + ": unsupported image format");
}

}  // namespace imgio
