#include "gperiods/periods.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "gperiods/compensated_sum.hpp"
#include "gperiods/error.hpp"
#include "gperiods/numtheory.hpp"
#include "gperiods/point_grid.hpp"
#include "parallel.hpp"

namespace gp {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

std::uint64_t next_in_orbit(std::uint64_t x, std::uint64_t omega, std::uint64_t n) noexcept {
  if (n <= (std::uint64_t{1} << 32)) return x * omega % n;
  return mul_mod(x, omega, n);
}

void require_divisor(std::uint64_t n, std::uint64_t c) {
  if (c == 0 || n % c != 0) {
    throw Error(Errc::not_divisor, "c = " + std::to_string(c) + " does not divide n = " + std::to_string(n));
  }
}

}  // namespace

std::complex<double> unit_root(std::uint64_t m, std::uint64_t n) noexcept {
  m %= n;
  const u128 scaled = static_cast<u128>(m) * 4;
  const auto quadrant = static_cast<unsigned>(scaled / n);
  const auto r = static_cast<std::uint64_t>(scaled - static_cast<u128>(quadrant) * n);

  // Angle within the quadrant is (pi/2) * r/n; fold to at most pi/4.
  double c = 1.0;
  double s = 0.0;
  if (r != 0) {
    const bool upper = 2 * static_cast<u128>(r) > n;
    const std::uint64_t num = upper ? n - r : r;
    const double theta = (std::numbers::pi / 2) * (static_cast<double>(num) / static_cast<double>(n));
    c = std::cos(theta);
    s = std::sin(theta);
    if (upper) std::swap(c, s);
  }
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

std::uint64_t default_max_n() {
  constexpr std::uint64_t kDefault = std::uint64_t{1} << 31;
  const char* env = std::getenv("GP_MAX_N");
  if (env == nullptr || *env == '\0') return kDefault;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return kDefault;
  return value;
}

PeriodParams PeriodParams::make(std::uint64_t n, std::int64_t omega, std::uint64_t max_n) {
  if (n == 0) throw Error(Errc::invalid_argument, "n must be a positive integer");
  if (n > max_n) {
    throw Error(Errc::too_large, "n = " + std::to_string(n) + " exceeds the size cap " + std::to_string(max_n));
  }
  PeriodParams p;
  p.n = n;
  p.omega = reduce_mod(omega, n);
  p.d = multiplicative_order(omega, n);
  return p;
}

std::complex<double> period_value(const PeriodParams& params, std::uint64_t k) {
  const std::uint64_t n = params.n;
  CompensatedComplexSum sum;
  std::uint64_t x = k % n;
  for (std::uint64_t j = 0; j < params.d; ++j) {
    sum += unit_root(x, n);
    x = next_in_orbit(x, params.omega, n);
  }
  return sum.value();
}

OrbitTable compute_orbits(std::uint64_t n, std::int64_t omega, const ComputeOptions& options) {
  OrbitTable table;
  table.params = PeriodParams::make(n, omega, options.max_n);
  const std::uint64_t w = table.params.omega;
  const std::uint64_t d = table.params.d;

  // Pass 1: integer-only orbit decomposition with a visited bitmap.
  std::vector<std::uint64_t> visited((n + 63) / 64, 0);
  auto test_and_set = [&](std::uint64_t x) {
    std::uint64_t& word = visited[x >> 6U];
    const std::uint64_t bit = std::uint64_t{1} << (x & 63U);
    const bool was = (word & bit) != 0;
    word |= bit;
    return was;
  };
  auto& orbits = table.orbits;
  for (std::uint64_t r = 0; r < n; ++r) {
    if (test_and_set(r)) continue;
    std::uint64_t size = 1;
    for (std::uint64_t x = next_in_orbit(r, w, n); x != r; x = next_in_orbit(x, w, n)) {
      test_and_set(x);
      ++size;
    }
    orbits.push_back({r, size, {}, 0});
  }
  visited = {};

  // Pass 2: evaluate each orbit sum in traversal order from its minimum.
  // Chunks hold roughly equal numbers of residues.
  // Thread start-up dominates below this size.
  constexpr std::uint64_t kParallelThreshold = std::uint64_t{1} << 16;
  const unsigned threads = n < kParallelThreshold ? 1 : detail::resolve_threads(options.threads);
  const std::size_t target_chunks = std::min<std::size_t>(orbits.size(), std::size_t{threads} * 8);
  std::vector<std::size_t> bounds{0};
  if (target_chunks > 0) {
    const std::uint64_t per_chunk = (n + target_chunks - 1) / target_chunks;
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      acc += orbits[i].size;
      if (acc >= per_chunk) {
        bounds.push_back(i + 1);
        acc = 0;
      }
    }
    if (bounds.back() != orbits.size()) bounds.push_back(orbits.size());
  }

  detail::parallel_chunks(bounds.size() - 1, threads, [&](std::size_t chunk) {
    for (std::size_t i = bounds[chunk]; i < bounds[chunk + 1]; ++i) {
      OrbitRecord& rec = orbits[i];
      CompensatedComplexSum sum;
      std::uint64_t x = rec.rep;
      for (std::uint64_t s = 0; s < rec.size; ++s) {
        sum += unit_root(x, n);
        x = next_in_orbit(x, w, n);
      }
      rec.value = sum.value() * static_cast<double>(d / rec.size);
    }
  });
  return table;
}

ColorClassing color_classes(std::uint64_t n, std::int64_t omega, std::uint64_t c, ColorMode mode) {
  require_divisor(n, c);
  if (gcd(reduce_mod(omega, n), n) != 1) {
    throw Error(Errc::not_coprime,
                "omega " + std::to_string(omega) + " is not coprime to n " + std::to_string(n));
  }
  const std::uint64_t w = reduce_mod(omega, c);

  ColorClassing out;
  out.c = c;
  out.mode = mode;
  out.class_of.assign(c, kUnassigned);
  std::vector<std::uint64_t> stack;
  for (std::uint64_t r = 0; r < c; ++r) {
    if (out.class_of[r] != kUnassigned) continue;
    // r is the least residue not yet covered, so it is this class's minimum.
    const std::uint32_t id = out.class_count++;
    stack.push_back(r);
    while (!stack.empty()) {
      const std::uint64_t x = stack.back();
      stack.pop_back();
      if (out.class_of[x] != kUnassigned) continue;
      out.class_of[x] = id;
      stack.push_back(next_in_orbit(x, w, c));
      if (mode == ColorMode::period_squared) stack.push_back((c - x) % c);
    }
  }
  return out;
}

PeriodSet apply_coloring(const OrbitTable& table, std::uint64_t c, ColorMode mode) {
  const ColorClassing classing =
      color_classes(table.params.n, static_cast<std::int64_t>(table.params.omega), c, mode);
  PeriodSet set;
  set.params = table.params;
  set.c = c;
  set.mode = mode;
  set.class_count = classing.class_count;
  set.orbits = table.orbits;
  for (OrbitRecord& rec : set.orbits) rec.color_class = classing.class_of[rec.rep % c];
  return set;
}

PeriodSet compute_period_set(std::uint64_t n, std::int64_t omega, std::uint64_t c, ColorMode mode,
                             const ComputeOptions& options) {
  if (n != 0) require_divisor(n, c);
  return apply_coloring(compute_orbits(n, omega, options), c, mode);
}

RescaleCheck rescale_identity_check(std::uint64_t n, std::int64_t omega, std::uint64_t k, double tol) {
  if (k == 0 || k >= n) throw Error(Errc::invalid_argument, "rescale_identity_check: need 0 < k < n");
  const PeriodParams full = PeriodParams::make(n, omega, std::numeric_limits<std::uint64_t>::max());
  const std::uint64_t g = gcd(n, k);
  const PeriodParams reduced = PeriodParams::make(n / g, omega, std::numeric_limits<std::uint64_t>::max());

  RescaleCheck out;
  out.multiplier = full.d / reduced.d;
  const std::complex<double> lhs = period_value(full, k);
  const std::complex<double> rhs = static_cast<double>(out.multiplier) * period_value(reduced, k / g);
  out.error = std::abs(lhs - rhs);
  out.holds = out.error < tol;
  return out;
}

bool subplot_containment_check(std::uint64_t n, std::int64_t omega, std::uint64_t c, double tol) {
  require_divisor(n, c);
  const ComputeOptions unlimited{0, std::numeric_limits<std::uint64_t>::max()};
  const PeriodSet full = compute_period_set(n, omega, c, ColorMode::standard, unlimited);
  const OrbitTable sub = compute_orbits(n / c, omega, unlimited);
  const auto multiplier = static_cast<double>(full.params.d / sub.params.d);

  const std::vector<std::complex<double>> values = values_of(full.orbits);
  const PointGrid grid(values, std::max(tol, std::numeric_limits<double>::min()));

  // Classes that could have produced every matched point so far.
  std::set<std::uint32_t> candidates;
  bool first = true;
  for (const OrbitRecord& rec : sub.orbits) {
    std::set<std::uint32_t> matched;
    grid.for_each_within(multiplier * rec.value, tol,
                         [&](std::size_t idx, double) { matched.insert(full.orbits[idx].color_class); });
    if (first) {
      candidates = std::move(matched);
      first = false;
    } else {
      std::erase_if(candidates, [&](std::uint32_t cls) { return !matched.contains(cls); });
    }
    if (candidates.empty()) return false;
  }
  return true;
}

std::uint64_t dihedral_order(std::uint64_t n, std::int64_t omega) {
  const PeriodParams p = PeriodParams::make(n, omega, std::numeric_limits<std::uint64_t>::max());
  // omega - 1 taken mod n; gcd(0, n) = n covers omega = 1.
  return gcd((p.omega + n - 1) % n, n);
}

std::vector<std::complex<double>> values_of(std::span<const OrbitRecord> orbits) {
  std::vector<std::complex<double>> out;
  out.reserve(orbits.size());
  for (const OrbitRecord& rec : orbits) out.push_back(rec.value);
  return out;
}

DihedralReport verify_dihedral(const PeriodSet& set, std::uint64_t fold, double tol) {
  const std::vector<std::complex<double>> values = values_of(set.orbits);
  return verify_dihedral(values, fold, tol);
}

DihedralReport verify_dihedral(std::span<const std::complex<double>> values, std::uint64_t fold, double tol) {
  if (fold == 0) throw Error(Errc::invalid_argument, "verify_dihedral: fold must be positive");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "verify_dihedral: tol must be positive");

  DihedralReport report;
  report.fold = fold;
  report.holds = true;
  if (values.empty()) return report;

  const PointGrid fine(values, 2 * tol);
  std::unique_ptr<PointGrid> coarse;  // only needed to size a mismatch

  auto count_near = [&](std::complex<double> q) {
    std::size_t count = 0;
    fine.for_each_within(q, tol, [&](std::size_t, double) { ++count; });
    return count;
  };
  auto nearest_distance = [&](std::complex<double> q) {
    double best = std::numeric_limits<double>::infinity();
    fine.for_each_within(q, tol, [&](std::size_t, double dist) { best = std::min(best, dist); });
    if (best <= tol) return best;
    if (!coarse) {
      double extent = 0.0;
      for (auto v : values) extent = std::max(extent, std::abs(v));
      const double spacing = 2.0 * std::max(extent, 1.0) / std::sqrt(static_cast<double>(values.size()));
      coarse = std::make_unique<PointGrid>(values, std::max(spacing, 2 * tol));
    }
    return coarse->nearest(q)->second;
  };

  const std::complex<double> rotation = unit_root(1, fold);
  for (const std::complex<double> v : values) {
    const std::size_t here = count_near(v);
    for (const std::complex<double> image : {v * rotation, std::conj(v)}) {
      const double dist = nearest_distance(image);
      report.max_mismatch = std::max(report.max_mismatch, dist);
      if (dist > tol || count_near(image) != here) report.holds = false;
    }
  }
  return report;
}

}  // namespace gp
