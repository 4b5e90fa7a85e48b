#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gperiods/render.hpp"

namespace gp {

/// 8-bit RGBA PNG with fixed compression settings, so equal images encode
/// to equal bytes.
std::vector<std::uint8_t> encode_png(const Image& image);
/// Accepts any PNG libpng reads; output is always RGBA8.
Image decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

}  // namespace gp
