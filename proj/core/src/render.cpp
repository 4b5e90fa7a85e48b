#include "gperiods/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "gperiods/error.hpp"
#include "gperiods/png_io.hpp"
#include "parallel.hpp"

namespace gp {

namespace {

constexpr std::uint32_t kNotStamped = std::numeric_limits<std::uint32_t>::max();

std::vector<Rgba> resolve_palette(const RenderSpec& spec, std::uint32_t class_count) {
  if (spec.palette.empty()) return auto_palette(class_count);
  if (spec.palette.size() < class_count) {
    throw Error(Errc::palette_too_small, "palette has " + std::to_string(spec.palette.size()) + " colors but " +
                                             std::to_string(class_count) + " classes need coloring");
  }
  return spec.palette;
}

std::vector<std::uint32_t> resolve_layer_order(const RenderSpec& spec, std::uint32_t class_count) {
  std::vector<std::uint32_t> order(class_count);
  for (std::uint32_t i = 0; i < class_count; ++i) order[i] = i;
  if (spec.layer_order.empty()) return order;

  std::vector<std::uint32_t> sorted = spec.layer_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != order) {
    throw Error(Errc::invalid_argument, "layer_order must be a permutation of the " + std::to_string(class_count) +
                                            " class ids");
  }
  return spec.layer_order;
}

/// Orbit indices grouped by class, each group in representative order.
std::vector<std::vector<std::uint32_t>> bucket_by_class(const PeriodSet& set) {
  std::vector<std::vector<std::uint32_t>> buckets(set.class_count);
  for (std::size_t i = 0; i < set.orbits.size(); ++i) {
    const std::uint32_t cls = set.orbits[i].color_class;
    if (cls >= set.class_count) throw Error(Errc::invalid_argument, "orbit color class out of range");
    buckets[cls].push_back(static_cast<std::uint32_t>(i));
  }
  return buckets;
}

/// Visits every pixel index covered by the disk of a point.
template <typename F>
void stamp_disk(PixelPos pos, double radius, std::uint32_t width, std::uint32_t height, F&& visit) {
  const double fx = std::floor(pos.x);
  const double fy = std::floor(pos.y);
  if (fx >= 0 && fy >= 0 && fx < width && fy < height) {
    visit(static_cast<std::size_t>(fy) * width + static_cast<std::size_t>(fx));
  }
  if (radius <= 0.0) return;
  const double r2 = radius * radius;
  const auto x0 = static_cast<std::int64_t>(std::max(0.0, std::floor(pos.x - radius)));
  const auto x1 = static_cast<std::int64_t>(std::min<double>(width - 1.0, std::ceil(pos.x + radius)));
  const auto y0 = static_cast<std::int64_t>(std::max(0.0, std::floor(pos.y - radius)));
  const auto y1 = static_cast<std::int64_t>(std::min<double>(height - 1.0, std::ceil(pos.y + radius)));
  for (std::int64_t y = y0; y <= y1; ++y) {
    const double dy = static_cast<double>(y) + 0.5 - pos.y;
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (static_cast<double>(x) == fx && static_cast<double>(y) == fy) continue;
      const double dx = static_cast<double>(x) + 0.5 - pos.x;
      if (dx * dx + dy * dy <= r2) visit(static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x));
    }
  }
}

void put(std::span<std::uint8_t> bytes, std::size_t pixel, Rgba c) {
  bytes[4 * pixel + 0] = c.r;
  bytes[4 * pixel + 1] = c.g;
  bytes[4 * pixel + 2] = c.b;
  bytes[4 * pixel + 3] = c.a;
}

Rgba get(std::span<const std::uint8_t> bytes, std::size_t pixel) {
  return {bytes[4 * pixel + 0], bytes[4 * pixel + 1], bytes[4 * pixel + 2], bytes[4 * pixel + 3]};
}

}  // namespace

void RenderSpec::validate() const {
  if (width == 0 || height == 0 || width > kMaxCanvasSide || height > kMaxCanvasSide) {
    throw Error(Errc::invalid_dimension, "canvas must be between 1x1 and " + std::to_string(kMaxCanvasSide) + "x" +
                                             std::to_string(kMaxCanvasSide) + " pixels");
  }
  if (!(margin >= 0.0 && margin < 1.0)) throw Error(Errc::invalid_argument, "margin must lie in [0, 1)");
  if (!(point_radius >= 0.0 && point_radius <= 1024.0)) {
    throw Error(Errc::invalid_argument, "point_radius must lie in [0, 1024]");
  }
}

Image::Image(std::uint32_t width, std::uint32_t height, Rgba fill)
    : width_(width), height_(height), pixels_(std::size_t{width} * height * 4) {
  for (std::size_t p = 0; p < std::size_t{width} * height; ++p) put(pixels_, p, fill);
}

Rgba Image::at(std::uint32_t x, std::uint32_t y) const { return get(pixels_, std::size_t{y} * width_ + x); }

void Image::set(std::uint32_t x, std::uint32_t y, Rgba c) { put(pixels_, std::size_t{y} * width_ + x, c); }

double plot_extent(const PeriodSet& set) {
  double extent = 1.0;
  for (const OrbitRecord& rec : set.orbits) extent = std::max(extent, std::abs(rec.value));
  return extent;
}

PixelPos map_to_canvas(std::complex<double> value, double extent, const RenderSpec& spec) {
  const double half = std::min(spec.width, spec.height) / 2.0;
  const double scale = half * (1.0 - spec.margin) / extent;
  return {spec.width / 2.0 + value.real() * scale, spec.height / 2.0 - value.imag() * scale};
}

std::vector<Rgba> auto_palette(std::uint32_t count) {
  std::vector<Rgba> out;
  out.reserve(count);
  constexpr double kValue = 0.85;
  for (std::uint32_t i = 0; i < count; ++i) {
    const double h = 6.0 * static_cast<double>(i) / static_cast<double>(count);
    const int sector = static_cast<int>(std::floor(h)) % 6;
    const double f = h - std::floor(h);
    const double v = kValue;
    const double p = 0.0;
    const double q = v * (1.0 - f);
    const double t = v * f;
    double r = 0, g = 0, b = 0;
    switch (sector) {
      case 0: r = v; g = t; b = p; break;
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      default: r = v; g = p; b = q; break;
    }
    auto to8 = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
    out.push_back({to8(r), to8(g), to8(b), 255});
  }
  return out;
}

Rgba blend_over(Rgba dst, Rgba src) noexcept {
  if (src.a == 255) return src;
  if (src.a == 0) return dst;
  const std::uint32_t sa = src.a;
  const std::uint32_t da = dst.a;
  // Everything below is scaled by 255 to stay in integers.
  const std::uint32_t alpha = sa * 255 + da * (255 - sa);
  auto channel = [&](std::uint32_t cs, std::uint32_t cd) {
    const std::uint32_t num = cs * sa * 255 + cd * da * (255 - sa);
    return static_cast<std::uint8_t>((num + alpha / 2) / alpha);
  };
  return {channel(src.r, dst.r), channel(src.g, dst.g), channel(src.b, dst.b),
          static_cast<std::uint8_t>((alpha + 127) / 255)};
}

void composite_over(Image& dst, const Image& layer) {
  if (dst.width() != layer.width() || dst.height() != layer.height()) {
    throw Error(Errc::invalid_dimension, "composite_over: image sizes differ");
  }
  auto out = dst.bytes();
  const auto in = layer.bytes();
  const std::size_t pixels = std::size_t{dst.width()} * dst.height();
  for (std::size_t p = 0; p < pixels; ++p) {
    const Rgba src = get(in, p);
    if (src.a == 0) continue;
    put(out, p, blend_over(get(out, p), src));
  }
}

Image rasterize(const PeriodSet& set, const RenderSpec& spec) {
  spec.validate();
  const auto palette = resolve_palette(spec, set.class_count);
  const auto order = resolve_layer_order(spec, set.class_count);
  const auto buckets = bucket_by_class(set);
  const double extent = plot_extent(set);

  Image canvas(spec.width, spec.height, spec.background);
  auto bytes = canvas.bytes();
  // Which layer last blended each pixel, so overlapping disks within one
  // layer blend once, exactly as a separately exported layer would.
  std::vector<std::uint32_t> stamped(std::size_t{spec.width} * spec.height, kNotStamped);
  for (std::uint32_t layer = 0; layer < order.size(); ++layer) {
    const std::uint32_t cls = order[layer];
    const Rgba color = palette[cls];
    for (std::uint32_t idx : buckets[cls]) {
      const PixelPos pos = map_to_canvas(set.orbits[idx].value, extent, spec);
      stamp_disk(pos, spec.point_radius, spec.width, spec.height, [&](std::size_t p) {
        if (stamped[p] == layer) return;
        stamped[p] = layer;
        if (color.a != 0) put(bytes, p, blend_over(get(bytes, p), color));
      });
    }
  }
  return canvas;
}

std::vector<LayerImage> render_layers(const PeriodSet& set, const RenderSpec& spec) {
  spec.validate();
  const auto palette = resolve_palette(spec, set.class_count);
  const auto order = resolve_layer_order(spec, set.class_count);
  const auto buckets = bucket_by_class(set);
  const double extent = plot_extent(set);

  std::vector<LayerImage> layers(order.size());
  detail::parallel_chunks(order.size(), spec.threads, [&](std::size_t layer) {
    const std::uint32_t cls = order[layer];
    LayerImage& out = layers[layer];
    out.class_id = cls;
    out.image = Image(spec.width, spec.height, Rgba{0, 0, 0, 0});
    auto bytes = out.image.bytes();
    const Rgba color = palette[cls];
    for (std::uint32_t idx : buckets[cls]) {
      const PixelPos pos = map_to_canvas(set.orbits[idx].value, extent, spec);
      stamp_disk(pos, spec.point_radius, spec.width, spec.height, [&](std::size_t p) { put(bytes, p, color); });
    }
  });
  return layers;
}

std::vector<std::filesystem::path> export_layers(const PeriodSet& set, const RenderSpec& spec,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create layer directory " + dir.string() + ": " + ec.message());

  const auto layers = render_layers(set, spec);
  std::vector<std::filesystem::path> paths;
  paths.reserve(layers.size());
  for (const LayerImage& layer : layers) {
    auto path = dir / ("layer_" + std::to_string(layer.class_id) + ".png");
    write_png(path, layer.image);
    paths.push_back(std::move(path));
  }

  const auto sidecar = dir / "render.json";
  std::ofstream out(sidecar, std::ios::binary);
  out << render_sidecar_json(set, spec);
  if (!out) throw Error(Errc::io_error, "cannot write " + sidecar.string());
  return paths;
}

std::string render_sidecar_json(const PeriodSet& set, const RenderSpec& spec) {
  auto color_json = [](Rgba c) { return nlohmann::json::array({c.r, c.g, c.b, c.a}); };
  nlohmann::json palette = nlohmann::json::array();
  for (const Rgba& c : spec.palette.empty() ? auto_palette(set.class_count) : spec.palette) {
    palette.push_back(color_json(c));
  }
  nlohmann::json order = nlohmann::json::array();
  for (std::uint32_t id : resolve_layer_order(spec, set.class_count)) order.push_back(id);

  nlohmann::json j;
  j["params"] = {{"n", set.params.n},
                 {"omega", set.params.omega},
                 {"d", set.params.d},
                 {"c", set.c},
                 {"mode", set.mode == ColorMode::standard ? "standard" : "period-squared"}};
  j["spec"] = {{"width", spec.width},
               {"height", spec.height},
               {"margin", spec.margin},
               {"point_radius", spec.point_radius},
               {"background", color_json(spec.background)},
               {"palette", palette},
               {"auto_palette", spec.palette.empty()},
               {"layer_order", order}};
  j["class_count"] = set.class_count;
  j["extent"] = plot_extent(set);
  j["format"] = "png-rgba8";
  return j.dump(2) + "\n";
}

}  // namespace gp
