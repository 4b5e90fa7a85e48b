#include "gperiods/fillout.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gperiods/compensated_sum.hpp"
#include "gperiods/error.hpp"
#include "gperiods/point_grid.hpp"
#include "parallel.hpp"

namespace gp {

namespace {

constexpr std::size_t kMaxSamples = std::size_t{1} << 27;

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (acc > limit / base) return limit + 1;
    acc *= base;
  }
  return acc;
}

}  // namespace

LaurentMap::LaurentMap(std::uint64_t d) : matrix_(exponent_matrix(d)) {}

std::complex<double> laurent_eval(const LaurentMap& map, std::span<const double> angles) {
  if (angles.size() != map.arity()) {
    throw Error(Errc::arity_mismatch, "laurent_eval: expected " + std::to_string(map.arity()) + " angles, got " +
                                          std::to_string(angles.size()));
  }
  const ExponentMatrix& b = map.matrix();
  CompensatedComplexSum sum;
  for (std::uint64_t k = 0; k < b.rows(); ++k) {
    CompensatedSum phase;
    for (std::uint64_t j = 0; j < b.cols(); ++j) phase += static_cast<double>(b(k, j)) * angles[j];
    sum += std::polar(1.0, phase.value());
  }
  return sum.value();
}

std::uint64_t grid_points_per_axis(std::size_t count, std::uint64_t arity) {
  if (count <= 1 || arity == 0) return 1;
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(count), 1.0 / arity)));
  m = std::max<std::uint64_t>(m, 2) - 1;
  while (checked_power(m, arity, count) < count) ++m;
  return m;
}

std::vector<std::complex<double>> sample_image(std::uint64_t d, std::size_t count, const SampleOptions& options) {
  return sample_image(LaurentMap(d), count, options);
}

std::vector<std::complex<double>> sample_image(const LaurentMap& map, std::size_t count,
                                               const SampleOptions& options) {
  if (count == 0) throw Error(Errc::invalid_argument, "sample_image: count must be positive");
  const ExponentMatrix& b = map.matrix();
  const std::uint64_t arity = map.arity();

  if (options.strategy == SampleStrategy::grid) {
    const std::uint64_t per_axis = grid_points_per_axis(count, arity);
    const std::uint64_t total = checked_power(per_axis, arity, kMaxSamples);
    if (total > kMaxSamples) throw Error(Errc::too_large, "sample_image: grid exceeds sample limit");

    // On the grid each angle is 2 pi digit / per_axis, so <row_k, angles> is a
    // rational multiple of 2 pi and reduces exactly mod per_axis.
    std::vector<std::complex<double>> out(total);
    const std::size_t chunk = 4096;
    detail::parallel_chunks((total + chunk - 1) / chunk, options.threads, [&](std::size_t c) {
      std::vector<std::uint64_t> digits(arity);
      const std::uint64_t begin = c * chunk;
      const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        std::uint64_t rest = idx;
        for (std::uint64_t j = 0; j < arity; ++j) {
          digits[j] = rest % per_axis;
          rest /= per_axis;
        }
        CompensatedComplexSum sum;
        for (std::uint64_t k = 0; k < b.rows(); ++k) {
          std::int64_t exponent = 0;
          for (std::uint64_t j = 0; j < arity; ++j) {
            exponent = (exponent + b(k, j) % static_cast<std::int64_t>(per_axis) *
                                       static_cast<std::int64_t>(digits[j])) %
                       static_cast<std::int64_t>(per_axis);
          }
          sum += unit_root(reduce_mod(exponent, per_axis), per_axis);
        }
        out[idx] = sum.value();
      }
    });
    return out;
  }

  if (count > kMaxSamples) throw Error(Errc::too_large, "sample_image: count exceeds sample limit");
  std::mt19937_64 rng(options.seed);
  std::vector<double> angles(count * arity);
  for (double& a : angles) {
    const double u = static_cast<double>(rng() >> 11U) * 0x1.0p-53;
    a = 2 * std::numbers::pi * u;
  }
  std::vector<std::complex<double>> out(count);
  const std::size_t chunk = 4096;
  detail::parallel_chunks((count + chunk - 1) / chunk, options.threads, [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      out[i] = laurent_eval(map, std::span<const double>(angles).subspan(i * arity, arity));
    }
  });
  return out;
}

Applicability applicability_check(std::uint64_t q, std::int64_t omega) {
  Applicability out;
  out.d = multiplicative_order(omega, q);
  const auto factors = factorize(q);
  if (factors.size() == 1 && factors.front().prime != 2) {
    out.is_prime_power = true;
    out.p = factors.front().prime;
    out.a = factors.front().exponent;
    out.d_divides_p_minus_1 = (out.p - 1) % out.d == 0;
  } else if (factors.size() == 1) {
    out.p = 2;
    out.a = factors.front().exponent;
  }
  return out;
}

std::vector<double> preimage_angles(std::uint64_t q, std::int64_t omega, std::uint64_t k) {
  const PeriodParams params = PeriodParams::make(q, omega, q);
  const std::uint64_t arity = euler_totient(params.d);
  std::vector<double> angles;
  angles.reserve(arity);
  std::uint64_t x = k % q;
  for (std::uint64_t j = 0; j < arity; ++j) {
    angles.push_back(2 * std::numbers::pi * (static_cast<double>(x) / static_cast<double>(q)));
    x = mul_mod(x, params.omega, q);
  }
  return angles;
}

CoverageReport coverage_against(std::span<const std::complex<double>> period_points,
                                std::span<const std::complex<double>> samples, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_argument, "coverage: epsilon must be positive");
  if (samples.empty()) throw Error(Errc::invalid_argument, "coverage: no image samples");

  CoverageReport report;
  report.epsilon = epsilon;
  report.sample_count = samples.size();
  report.point_count = period_points.size();

  const PointGrid point_grid(period_points, epsilon);
  std::size_t covered = 0;
  for (const auto s : samples) {
    if (point_grid.any_within(s, epsilon)) ++covered;
  }
  report.fraction_covered = static_cast<double>(covered) / static_cast<double>(samples.size());

  const PointGrid sample_grid(samples, epsilon);
  for (const auto p : period_points) {
    report.max_point_distance = std::max(report.max_point_distance, sample_grid.nearest(p)->second);
  }
  return report;
}

CoverageReport coverage(std::span<const std::complex<double>> period_points, const LaurentMap& map, double epsilon,
                        std::size_t sample_count, const SampleOptions& options) {
  const auto samples = sample_image(map, sample_count, options);
  CoverageReport report = coverage_against(period_points, samples, epsilon);
  report.d = map.d();
  report.strategy = options.strategy;
  report.seed = options.seed;
  return report;
}

CoverageReport coverage(const PeriodSet& set, const LaurentMap& map, double epsilon, std::size_t sample_count,
                        const SampleOptions& options) {
  const auto values = values_of(set.orbits);
  return coverage(values, map, epsilon, sample_count, options);
}

}  // namespace gp
