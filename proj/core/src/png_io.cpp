#include "gperiods/png_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <png.h>

#include "gperiods/error.hpp"

namespace gp {

namespace {

png_image make_header(std::uint32_t width, std::uint32_t height) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  header.width = width;
  header.height = height;
  header.format = PNG_FORMAT_RGBA;
  return header;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.width() == 0 || image.height() == 0) throw Error(Errc::invalid_dimension, "cannot encode an empty image");
  png_image header = make_header(image.width(), image.height());
  const auto stride = static_cast<png_int_32>(image.width() * 4);

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&header, nullptr, &size, 0, image.bytes().data(), stride, nullptr)) {
    const std::string msg = header.message;
    png_image_free(&header);
    throw Error(Errc::io_error, "png encode failed: " + msg);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&header, out.data(), &size, 0, image.bytes().data(), stride, nullptr)) {
    const std::string msg = header.message;
    png_image_free(&header);
    throw Error(Errc::io_error, "png encode failed: " + msg);
  }
  out.resize(size);
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&header, bytes.data(), bytes.size())) {
    const std::string msg = header.message;
    png_image_free(&header);
    throw Error(Errc::io_error, "png decode failed: " + msg);
  }
  header.format = PNG_FORMAT_RGBA;
  Image image(header.width, header.height);
  if (!png_image_finish_read(&header, nullptr, image.bytes().data(), static_cast<png_int_32>(header.width * 4),
                             nullptr)) {
    const std::string msg = header.message;
    png_image_free(&header);
    throw Error(Errc::io_error, "png decode failed: " + msg);
  }
  return image;
}

void write_png(const std::filesystem::path& path, const Image& image) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
}

Image read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace gp
