#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gperiods/numtheory.hpp"
#include "gperiods/periods.hpp"

namespace gp {

/// g(z_1..z_phi(d)) = sum_k prod_j z_{j+1}^{b_{k,j}} on the phi(d)-torus.
class LaurentMap {
 public:
  explicit LaurentMap(std::uint64_t d);

  std::uint64_t d() const noexcept { return matrix_.d(); }
  std::uint64_t arity() const noexcept { return matrix_.phi_d(); }
  const ExponentMatrix& matrix() const noexcept { return matrix_; }

 private:
  ExponentMatrix matrix_;
};

/// Evaluates g at z_j = e^{i angles[j]}, as sum_k exp(i <row_k, angles>).
/// Throws Error{Errc::arity_mismatch} when angles.size() != arity.
std::complex<double> laurent_eval(const LaurentMap& map, std::span<const double> angles);

enum class SampleStrategy { grid, random };

inline constexpr std::uint64_t kDefaultSampleSeed = 0x6a09e667f3bcc909ULL;

struct SampleOptions {
  SampleStrategy strategy = SampleStrategy::grid;
  std::uint64_t seed = kDefaultSampleSeed;
  unsigned threads = 0;
};

/// Grid: ceil(count^(1/phi(d))) equispaced angles per axis, full tensor
/// product (so the result may hold more than `count` points).
/// Random: exactly `count` uniform torus points from a seeded generator.
std::vector<std::complex<double>> sample_image(std::uint64_t d, std::size_t count, const SampleOptions& options = {});
std::vector<std::complex<double>> sample_image(const LaurentMap& map, std::size_t count,
                                               const SampleOptions& options = {});

/// Points per axis used by the grid strategy.
std::uint64_t grid_points_per_axis(std::size_t count, std::uint64_t arity);

struct Applicability {
  bool is_prime_power = false;  ///< q = p^a with p an odd prime, a >= 1
  std::uint64_t p = 0;
  unsigned a = 0;
  std::uint64_t d = 1;          ///< ord_q(omega)
  bool d_divides_p_minus_1 = false;

  bool applicable() const noexcept { return is_prime_power && d_divides_p_minus_1; }
};

/// Reports whether G(q, omega) falls under the fill-out containment theorem.
/// Throws Error{Errc::not_coprime}.
Applicability applicability_check(std::uint64_t q, std::int64_t omega);

/// Torus angles theta_j = 2 pi k omega^j / q (j < phi(d)) at which g equals
/// eta_{q,omega,k} exactly when the theorem applies.
std::vector<double> preimage_angles(std::uint64_t q, std::int64_t omega, std::uint64_t k);

struct CoverageReport {
  std::uint64_t d = 1;
  double epsilon = 0.0;
  double fraction_covered = 0.0;
  double max_point_distance = 0.0;
  std::size_t sample_count = 0;
  std::size_t point_count = 0;
  SampleStrategy strategy = SampleStrategy::grid;
  std::uint64_t seed = kDefaultSampleSeed;
};

/// fraction_covered: share of image samples within epsilon of a period point.
/// max_point_distance: largest distance from a period point to its nearest
/// image sample.
CoverageReport coverage(std::span<const std::complex<double>> period_points, const LaurentMap& map, double epsilon,
                        std::size_t sample_count, const SampleOptions& options = {});
CoverageReport coverage(const PeriodSet& set, const LaurentMap& map, double epsilon, std::size_t sample_count,
                        const SampleOptions& options = {});
/// Same, against a caller-supplied sample cloud (e.g. reused across sets).
CoverageReport coverage_against(std::span<const std::complex<double>> period_points,
                                std::span<const std::complex<double>> samples, double epsilon);

}  // namespace gp
