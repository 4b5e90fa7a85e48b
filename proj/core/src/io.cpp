#include "gperiods/io.hpp"

#include <charconv>
#include <string>

#include <json.hpp>

#include "gperiods/error.hpp"

namespace gp {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string_view to_string(ColorMode mode) noexcept {
  return mode == ColorMode::standard ? "standard" : "period-squared";
}

ColorMode parse_color_mode(std::string_view text) {
  if (text == "standard") return ColorMode::standard;
  if (text == "period-squared" || text == "period_squared") return ColorMode::period_squared;
  throw Error(Errc::invalid_argument, "unknown coloring mode '" + std::string(text) + "'");
}

std::string_view to_string(SampleStrategy strategy) noexcept {
  return strategy == SampleStrategy::grid ? "grid" : "random";
}

std::string to_csv(const PeriodSet& set) {
  std::string out = "rep,size,re,im,color_class\n";
  out.reserve(out.size() + set.orbits.size() * 56);
  for (const OrbitRecord& rec : set.orbits) {
    out += std::to_string(rec.rep);
    out += ',';
    out += std::to_string(rec.size);
    out += ',';
    out += format_double(rec.value.real());
    out += ',';
    out += format_double(rec.value.imag());
    out += ',';
    out += std::to_string(rec.color_class);
    out += '\n';
  }
  return out;
}

std::string to_json(const PeriodSet& set) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const OrbitRecord& rec : set.orbits) {
    orbits.push_back({{"rep", rec.rep},
                      {"size", rec.size},
                      {"re", rec.value.real()},
                      {"im", rec.value.imag()},
                      {"color_class", rec.color_class}});
  }
  nlohmann::json j;
  j["params"] = {{"n", set.params.n},
                 {"omega", set.params.omega},
                 {"d", set.params.d},
                 {"c", set.c},
                 {"mode", to_string(set.mode)}};
  j["class_count"] = set.class_count;
  j["orbit_count"] = set.orbits.size();
  j["orbits"] = std::move(orbits);
  return j.dump() + "\n";
}

std::string to_json(const CoverageReport& report) {
  nlohmann::json j = {{"d", report.d},
                      {"epsilon", report.epsilon},
                      {"fraction_covered", report.fraction_covered},
                      {"max_point_distance", report.max_point_distance},
                      {"sample_count", report.sample_count},
                      {"point_count", report.point_count},
                      {"strategy", to_string(report.strategy)},
                      {"seed", report.seed}};
  return j.dump(2) + "\n";
}

std::string to_json(const Applicability& report) {
  nlohmann::json j = {{"is_prime_power", report.is_prime_power},
                      {"p", report.p},
                      {"a", report.a},
                      {"d", report.d},
                      {"d_divides_p_minus_1", report.d_divides_p_minus_1},
                      {"applicable", report.applicable()}};
  return j.dump(2) + "\n";
}

}  // namespace gp
