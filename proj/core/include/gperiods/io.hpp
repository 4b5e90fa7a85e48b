#pragma once

#include <string>
#include <string_view>

#include "gperiods/fillout.hpp"
#include "gperiods/periods.hpp"

namespace gp {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string_view to_string(ColorMode mode) noexcept;
/// Accepts "standard" and "period-squared" (or "period_squared").
/// Throws Error{Errc::invalid_argument}.
ColorMode parse_color_mode(std::string_view text);

std::string_view to_string(SampleStrategy strategy) noexcept;

/// Header `rep,size,re,im,color_class`, one row per orbit, LF line endings.
std::string to_csv(const PeriodSet& set);

/// {params, class_count, orbits: [{rep, size, re, im, color_class}]}
std::string to_json(const PeriodSet& set);

std::string to_json(const CoverageReport& report);
std::string to_json(const Applicability& report);

}  // namespace gp
