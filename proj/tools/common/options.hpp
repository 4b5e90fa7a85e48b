#pragma once

// Text forms shared by the command line and the HTTP query parser, so both
// front ends build identical RenderSpecs from identical strings.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gperiods/render.hpp"

namespace gp::tools {

/// "#rrggbb", "rrggbb", "#rrggbbaa" or "rrggbbaa". Throws Error{Errc::invalid_argument}.
Rgba parse_rgba(std::string_view text);

/// Comma-separated colors; empty text gives an empty (auto) palette.
std::vector<Rgba> parse_palette(std::string_view text);

/// Comma-separated non-negative integers, e.g. a layer order "2,0,1".
std::vector<std::uint32_t> parse_id_list(std::string_view text);

/// Whole-string unsigned / signed / floating parse. Throws Error{Errc::invalid_argument}.
std::uint64_t parse_u64(std::string_view text);
std::int64_t parse_i64(std::string_view text);
double parse_double(std::string_view text);

std::string format_rgba(Rgba c);

}  // namespace gp::tools
