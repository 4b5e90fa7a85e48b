#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gp {

/// e^{2 pi i m / n}, with the argument reduced exactly in integer arithmetic
/// to a quarter turn before any floating point is involved.
std::complex<double> unit_root(std::uint64_t m, std::uint64_t n) noexcept;

enum class ColorMode { standard, period_squared };

/// Default size cap for n: 2^31, overridable with the GP_MAX_N environment variable.
std::uint64_t default_max_n();

/// Modulus n, generator omega (canonical residue in [0, n)) and d = ord_n(omega).
struct PeriodParams {
  std::uint64_t n = 1;
  std::uint64_t omega = 0;
  std::uint64_t d = 1;

  /// Validates n >= 1 and gcd(omega, n) = 1 and caches the order.
  /// Throws Error with Errc::invalid_argument, not_coprime or too_large.
  static PeriodParams make(std::uint64_t n, std::int64_t omega, std::uint64_t max_n = default_max_n());

  bool operator==(const PeriodParams&) const = default;
};

struct OrbitRecord {
  std::uint64_t rep = 0;  ///< minimal element of the orbit
  std::uint64_t size = 0;
  std::complex<double> value;
  std::uint32_t color_class = 0;
};

/// Orbits of multiplication by omega on Z/nZ with period values, sorted by
/// representative. Colors are not part of it so one table serves any c.
struct OrbitTable {
  PeriodParams params;
  std::vector<OrbitRecord> orbits;

  std::size_t byte_size() const noexcept { return sizeof(*this) + orbits.capacity() * sizeof(OrbitRecord); }
};

/// Partition of Z/cZ into classes. class_of[r] is the class of residue r.
struct ColorClassing {
  std::uint64_t c = 1;
  ColorMode mode = ColorMode::standard;
  std::vector<std::uint32_t> class_of;
  std::uint32_t class_count = 0;
};

struct PeriodSet {
  PeriodParams params;
  std::vector<OrbitRecord> orbits;
  std::uint64_t c = 1;
  ColorMode mode = ColorMode::standard;
  std::uint32_t class_count = 0;
};

struct ComputeOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
  std::uint64_t max_n = default_max_n();
};

/// eta_{n,omega,k}: the definitional sum over j = 0..d-1 in that order,
/// compensated. k is reduced mod n.
std::complex<double> period_value(const PeriodParams& params, std::uint64_t k);

/// Enumerates every orbit once and evaluates its period. O(n) modular
/// products plus n trigonometric evaluations. Output does not depend on the
/// thread count.
OrbitTable compute_orbits(std::uint64_t n, std::int64_t omega, const ComputeOptions& options = {});

/// Classes are the orbits of multiplication by omega on Z/cZ (merged under
/// negation in period_squared mode), numbered by increasing minimal residue.
/// Throws Error{Errc::not_divisor} unless c | n.
ColorClassing color_classes(std::uint64_t n, std::int64_t omega, std::uint64_t c, ColorMode mode);

PeriodSet apply_coloring(const OrbitTable& table, std::uint64_t c, ColorMode mode);

PeriodSet compute_period_set(std::uint64_t n, std::int64_t omega, std::uint64_t c, ColorMode mode,
                             const ComputeOptions& options = {});

struct RescaleCheck {
  std::uint64_t multiplier = 1;  ///< ord_n(omega) / ord_{n/g}(omega), g = gcd(n, k)
  bool holds = false;
  double error = 0.0;
};

/// Checks eta_{n,omega,k} = multiplier * eta_{n/g,omega,k/g}. Requires 0 < k < n.
RescaleCheck rescale_identity_check(std::uint64_t n, std::int64_t omega, std::uint64_t k, double tol = 1e-8);

/// True iff (ord_n(omega)/ord_{n/c}(omega)) * G(n/c, omega) lies inside
/// G(n, omega) within tol, with every matched point drawn from a single color class.
bool subplot_containment_check(std::uint64_t n, std::int64_t omega, std::uint64_t c, double tol = 1e-8);

/// gcd(omega - 1, n): the guaranteed dihedral symmetry order.
std::uint64_t dihedral_order(std::uint64_t n, std::int64_t omega);

struct DihedralReport {
  std::uint64_t fold = 1;
  bool holds = false;
  double max_mismatch = 0.0;
};

/// Checks that the uncolored value multiset is invariant under rotation by
/// 2 pi / fold and under complex conjugation, within tol.
DihedralReport verify_dihedral(const PeriodSet& set, std::uint64_t fold, double tol);
DihedralReport verify_dihedral(std::span<const std::complex<double>> values, std::uint64_t fold, double tol);

std::vector<std::complex<double>> values_of(std::span<const OrbitRecord> orbits);

}  // namespace gp
