#include "options.hpp"

#include <charconv>
#include <cmath>

#include "gperiods/error.hpp"

namespace gp::tools {

namespace {

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  throw Error(Errc::invalid_argument, "invalid " + std::string(what) + " '" + std::string(text) + "'");
}

template <typename F>
void for_each_item(std::string_view text, F&& f) {
  while (!text.empty()) {
    const auto comma = text.find(',');
    f(text.substr(0, comma));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
}

}  // namespace

Rgba parse_rgba(std::string_view text) {
  std::string_view hex = text;
  if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
  if (hex.size() != 6 && hex.size() != 8) bad("color", text);
  std::uint8_t parts[4] = {0, 0, 0, 255};
  for (std::size_t i = 0; i < hex.size() / 2; ++i) {
    const char* first = hex.data() + 2 * i;
    auto [ptr, ec] = std::from_chars(first, first + 2, parts[i], 16);
    if (ec != std::errc{} || ptr != first + 2) bad("color", text);
  }
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::vector<Rgba> parse_palette(std::string_view text) {
  std::vector<Rgba> out;
  for_each_item(text, [&](std::string_view item) { out.push_back(parse_rgba(item)); });
  return out;
}

std::vector<std::uint32_t> parse_id_list(std::string_view text) {
  std::vector<std::uint32_t> out;
  for_each_item(text, [&](std::string_view item) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) bad("id list", text);
    out.push_back(v);
  });
  return out;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) bad("unsigned integer", text);
  return v;
}

std::int64_t parse_i64(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) bad("integer", text);
  return v;
}

double parse_double(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    bad("number", text);
  }
  return v;
}

std::string format_rgba(Rgba c) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "#";
  for (std::uint8_t v : {c.r, c.g, c.b, c.a}) {
    out += kHex[v >> 4];
    out += kHex[v & 15];
  }
  return out;
}

}  // namespace gp::tools
