#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gperiods/periods.hpp"

namespace gp {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;

  bool operator==(const Rgba&) const = default;
};

/// Canvas geometry and styling. Fully determines the pixels produced.
struct RenderSpec {
  std::uint32_t width = 1024;
  std::uint32_t height = 1024;
  double margin = 0.05;        ///< fraction of the half-size left empty around the plot
  double point_radius = 1.0;   ///< pixels
  std::vector<Rgba> palette;   ///< empty = auto palette
  Rgba background{255, 255, 255, 255};
  std::vector<std::uint32_t> layer_order;  ///< empty = ascending class id
  unsigned threads = 0;

  /// Throws Error{Errc::invalid_dimension} or Error{Errc::invalid_argument}.
  void validate() const;
};

inline constexpr std::uint32_t kMaxCanvasSide = 16384;

/// 8-bit RGBA, row-major, top row first.
class Image {
 public:
  Image() = default;
  Image(std::uint32_t width, std::uint32_t height, Rgba fill = {0, 0, 0, 0});

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }
  std::span<std::uint8_t> bytes() noexcept { return pixels_; }

  Rgba at(std::uint32_t x, std::uint32_t y) const;
  void set(std::uint32_t x, std::uint32_t y, Rgba c);

  bool operator==(const Image&) const = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct PixelPos {
  double x = 0.0;
  double y = 0.0;
};

/// Largest |value| in the set, at least 1.
double plot_extent(const PeriodSet& set);

/// Origin-centered, aspect-preserving, y up. `extent` lands on the margin edge.
PixelPos map_to_canvas(std::complex<double> value, double extent, const RenderSpec& spec);

/// class i gets hue i / count at full saturation.
std::vector<Rgba> auto_palette(std::uint32_t count);

/// Straight-alpha "over" in 8-bit integer arithmetic.
Rgba blend_over(Rgba dst, Rgba src) noexcept;

/// Composites `layer` over `dst` pixel by pixel. Both must have the same size.
void composite_over(Image& dst, const Image& layer);

/// Flat render: background, then each class layer in layer_order.
/// Throws Error{Errc::palette_too_small}.
Image rasterize(const PeriodSet& set, const RenderSpec& spec);

struct LayerImage {
  std::uint32_t class_id = 0;
  Image image;  ///< transparent outside stamped disks
};

/// One transparent image per class, returned in layer_order.
std::vector<LayerImage> render_layers(const PeriodSet& set, const RenderSpec& spec);

/// Writes layer_<class_id>.png for every class plus render.json into `dir`.
/// Returns the PNG paths in layer_order. Throws Error{Errc::io_error}.
std::vector<std::filesystem::path> export_layers(const PeriodSet& set, const RenderSpec& spec,
                                                 const std::filesystem::path& dir);

/// JSON record of spec + params sufficient to reproduce a render.
std::string render_sidecar_json(const PeriodSet& set, const RenderSpec& spec);

}  // namespace gp
