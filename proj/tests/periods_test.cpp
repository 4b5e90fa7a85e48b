#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>

#include "gperiods/error.hpp"
#include "gperiods/numtheory.hpp"
#include "gperiods/periods.hpp"
#include "oracles.hpp"

using cd = std::complex<double>;

namespace {

const cd I{0.0, 1.0};

gp::Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const gp::Error& e) {
    return e.code();
  }
  FAIL("expected gp::Error");
  return gp::Errc::invalid_argument;
}

std::vector<std::uint64_t> units(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t w = 0; w < n; ++w)
    if (oracle::gcd(w, n) == 1) out.push_back(w);
  return out;
}

bool near(cd a, cd b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("unit_root agrees with a long double reference") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t n = (rng() % 10000000) + 1;
    const std::uint64_t m = rng() % (3 * n);
    REQUIRE(std::abs(gp::unit_root(m, n) - oracle::root_of_unity(m, n)) < 4e-16);
  }
  CHECK(gp::unit_root(0, 5) == cd(1, 0));
  CHECK(gp::unit_root(1, 4) == cd(0, 1));
  CHECK(gp::unit_root(2, 4) == cd(-1, 0));
  CHECK(gp::unit_root(3, 4) == cd(0, -1));
}

TEST_CASE("PeriodParams canonicalizes omega and caches the order") {
  const auto p = gp::PeriodParams::make(12, -7);
  CHECK(p.omega == 5);
  CHECK(p.d == 2);
  CHECK(error_code([] { (void)gp::PeriodParams::make(12, 4); }) == gp::Errc::not_coprime);
  CHECK(error_code([] { (void)gp::PeriodParams::make(0, 1); }) == gp::Errc::invalid_argument);
  CHECK(error_code([] { (void)gp::PeriodParams::make(1000, 1, 999); }) == gp::Errc::too_large);
}

TEST_CASE("period_value examples") {
  CHECK(near(gp::period_value(gp::PeriodParams::make(12, 5), 3), 2.0 * I, 1e-12));
  CHECK(near(gp::period_value(gp::PeriodParams::make(27, 2), 0), 18.0, 1e-12));
  CHECK(near(gp::period_value(gp::PeriodParams::make(27, 2), 9), -9.0, 1e-12));
  CHECK(near(gp::period_value(gp::PeriodParams::make(4, 5), 1), I, 1e-12));
}

TEST_CASE("compute_period_set (27, 2, c = 9)") {
  const auto set = gp::compute_period_set(27, 2, 9, gp::ColorMode::standard);
  REQUIRE(set.orbits.size() == 4);
  const std::vector<std::uint64_t> reps{0, 1, 3, 9};
  const std::vector<std::uint64_t> sizes{1, 18, 6, 2};
  const std::vector<cd> values{18.0, 0.0, 0.0, -9.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(set.orbits[i].rep == reps[i]);
    CHECK(set.orbits[i].size == sizes[i]);
    CHECK(near(set.orbits[i].value, values[i], 1e-12));
  }
  CHECK(set.orbits[0].color_class == set.orbits[3].color_class);
  CHECK(set.class_count == 3);
}

TEST_CASE("compute_period_set (4, 5, c = 1) is the square") {
  const auto set = gp::compute_period_set(4, 5, 1, gp::ColorMode::standard);
  REQUIRE(set.orbits.size() == 4);
  const std::vector<cd> values{1.0, I, -1.0, -I};
  for (std::size_t i = 0; i < 4; ++i) CHECK(near(set.orbits[i].value, values[i], 1e-12));
  CHECK(set.class_count == 1);
}

TEST_CASE("compute_period_set n = 1") {
  const auto set = gp::compute_period_set(1, 1, 1, gp::ColorMode::standard);
  REQUIRE(set.orbits.size() == 1);
  CHECK(set.orbits[0].rep == 0);
  CHECK(set.orbits[0].size == 1);
  CHECK(near(set.orbits[0].value, 1.0, 0.0));
}

TEST_CASE("compute_period_set (12, 5) orbits match brute force") {
  const auto set = gp::compute_period_set(12, 5, 3, gp::ColorMode::standard);
  const auto expected = oracle::orbits(12, 5);
  REQUIRE(set.orbits.size() == expected.size());
  REQUIRE(set.orbits.size() == 8);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(set.orbits[i].rep == expected[i].first);
    CHECK(set.orbits[i].size == expected[i].second);
  }
}

TEST_CASE("compute_period_set errors") {
  CHECK(error_code([] { (void)gp::compute_period_set(12, 4, 1, gp::ColorMode::standard); }) ==
        gp::Errc::not_coprime);
  CHECK(error_code([] { (void)gp::compute_period_set(12, 5, 5, gp::ColorMode::standard); }) ==
        gp::Errc::not_divisor);
  CHECK(error_code([] { (void)gp::compute_period_set(12, 5, 0, gp::ColorMode::standard); }) ==
        gp::Errc::not_divisor);
  CHECK(error_code([] {
          (void)gp::compute_period_set(1 << 20, 3, 1, gp::ColorMode::standard, {1, 1000});
        }) == gp::Errc::too_large);
}

TEST_CASE("omega = 1 gives the n-th roots of unity") {
  const auto set = gp::compute_period_set(10, 1, 10, gp::ColorMode::standard);
  REQUIRE(set.params.d == 1);
  REQUIRE(set.orbits.size() == 10);
  for (const auto& rec : set.orbits) CHECK(near(rec.value, oracle::root_of_unity(rec.rep, 10), 1e-15));
  CHECK(set.class_count == 10);
}

TEST_CASE("color_classes examples") {
  const auto a = gp::color_classes(27, 2, 9, gp::ColorMode::standard);
  CHECK(a.class_count == 3);
  CHECK(a.class_of == std::vector<std::uint32_t>{0, 1, 1, 2, 1, 1, 2, 1, 1});

  const auto b = gp::color_classes(12, 5, 3, gp::ColorMode::standard);
  CHECK(b.class_count == 2);
  CHECK(b.class_of == std::vector<std::uint32_t>{0, 1, 1});

  const auto c = gp::color_classes(255255, 254, 7, gp::ColorMode::standard);
  CHECK(c.class_count == 3);  // 254 = 2 (mod 7): {0}, {1,2,4}, {3,5,6}

  CHECK(gp::color_classes(97, 5, 1, gp::ColorMode::standard).class_count == 1);
  CHECK(error_code([] { (void)gp::color_classes(12, 5, 5, gp::ColorMode::standard); }) == gp::Errc::not_divisor);
}

TEST_CASE("period_squared classes are closed under negation") {
  // 2 generates a subgroup of (Z/7Z)^x not containing -1.
  const auto plain = gp::color_classes(7, 2, 7, gp::ColorMode::standard);
  const auto squared = gp::color_classes(7, 2, 7, gp::ColorMode::period_squared);
  CHECK(plain.class_count == 3);
  CHECK(squared.class_count == 2);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t n = rng() % 300 + 1;
    const auto us = units(n);
    const std::uint64_t w = us[rng() % us.size()];
    const auto divs = gp::divisors(n);
    const std::uint64_t c = divs[rng() % divs.size()];
    for (auto mode : {gp::ColorMode::standard, gp::ColorMode::period_squared}) {
      const auto cls = gp::color_classes(n, static_cast<std::int64_t>(w), c, mode);
      std::uint32_t highest = 0;
      for (std::uint64_t r = 0; r < c; ++r) {
        REQUIRE(cls.class_of[r] == cls.class_of[r * w % c]);
        if (mode == gp::ColorMode::period_squared) REQUIRE(cls.class_of[r] == cls.class_of[(c - r) % c]);
        // Ids appear in order of their minimal residue.
        REQUIRE(cls.class_of[r] <= highest);
        if (cls.class_of[r] == highest) ++highest;
      }
      REQUIRE(highest == cls.class_count);
    }
  }
}

TEST_CASE("rescale_identity_check examples") {
  const auto a = gp::rescale_identity_check(12, 5, 3);
  CHECK(a.multiplier == 2);
  CHECK(a.holds);
  const auto b = gp::rescale_identity_check(27, 2, 9);
  CHECK(b.multiplier == 9);
  CHECK(b.holds);
  const auto c = gp::rescale_identity_check(101, 3, 7);
  CHECK(c.multiplier == 1);
  CHECK(c.holds);
  CHECK(error_code([] { (void)gp::rescale_identity_check(12, 5, 0); }) == gp::Errc::invalid_argument);
}

TEST_CASE("subplot_containment_check examples") {
  CHECK(gp::subplot_containment_check(12, 5, 3));
  CHECK(gp::subplot_containment_check(12, 5, 1));
  CHECK(gp::subplot_containment_check(27, 2, 9));
  CHECK(error_code([] { (void)gp::subplot_containment_check(12, 5, 5); }) == gp::Errc::not_divisor);
}

TEST_CASE("dihedral_order examples") {
  CHECK(gp::dihedral_order(29070, 1189) == 18);
  CHECK(gp::dihedral_order(255255, 254) == 11);
  CHECK(gp::dihedral_order(70091, 21792) == 7);
  CHECK(gp::dihedral_order(37, 1) == 37);
}

TEST_CASE("verify_dihedral examples") {
  const auto square = gp::compute_period_set(4, 5, 1, gp::ColorMode::standard);
  CHECK(gp::dihedral_order(4, 5) == 4);
  const auto rep = gp::verify_dihedral(square, 4, 1e-12);
  CHECK(rep.holds);
  CHECK(rep.max_mismatch < 1e-12);
  CHECK(gp::verify_dihedral(square, 1, 1e-12).holds);
  // The square is not 8-fold symmetric.
  const auto bad = gp::verify_dihedral(square, 8, 1e-9);
  CHECK_FALSE(bad.holds);
  CHECK(bad.max_mismatch == doctest::Approx(2 * std::sin(std::numbers::pi / 8)).epsilon(1e-9));
}

TEST_CASE("verify_dihedral detects broken multiplicity and conjugation") {
  const std::vector<cd> lopsided{1.0, 1.0, -1.0};
  CHECK_FALSE(gp::verify_dihedral(lopsided, 2, 1e-9).holds);
  const std::vector<cd> tilted{I + 0.5};
  CHECK_FALSE(gp::verify_dihedral(tilted, 1, 1e-9).holds);
  const std::vector<cd> empty;
  CHECK(gp::verify_dihedral(empty, 3, 1e-9).holds);
}

TEST_CASE("orbit table properties against the brute-force oracle, n <= 60") {
  for (std::uint64_t n = 1; n <= 60; ++n) {
    for (std::uint64_t w : units(n)) {
      const auto table = gp::compute_orbits(n, static_cast<std::int64_t>(w));
      const auto expected = oracle::orbits(n, w);
      REQUIRE(table.orbits.size() == expected.size());
      std::uint64_t total = 0;
      for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& rec = table.orbits[i];
        REQUIRE(rec.rep == expected[i].first);
        REQUIRE(rec.size == expected[i].second);
        REQUIRE(table.params.d % rec.size == 0);
        REQUIRE(std::abs(rec.value) <= table.params.d + 1e-9);
        REQUIRE(near(rec.value, oracle::period(n, w, rec.rep), 1e-9));
        total += rec.size;
      }
      REQUIRE(total == n);
    }
  }
}

TEST_CASE("color consistency: sampled orbit elements share their orbit's class") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t n = rng() % 5000 + 1;
    const auto us = units(n);
    const std::uint64_t w = us[rng() % us.size()];
    const auto divs = gp::divisors(n);
    const std::uint64_t c = divs[rng() % divs.size()];
    const auto mode = trial % 2 == 0 ? gp::ColorMode::standard : gp::ColorMode::period_squared;
    const auto set = gp::compute_period_set(n, static_cast<std::int64_t>(w), c, mode);
    const auto cls = gp::color_classes(n, static_cast<std::int64_t>(w), c, mode);
    for (const auto& rec : set.orbits) {
      for (int s = 0; s < 100; ++s) {
        const std::uint64_t j = rng() % rec.size;
        const std::uint64_t elem = gp::mul_mod(rec.rep, gp::pow_mod(w, j, n), n);
        REQUIRE(cls.class_of[elem % c] == rec.color_class);
      }
    }
  }
}

TEST_CASE("conjugation closure and dihedral law, n <= 120") {
  for (std::uint64_t n = 1; n <= 120; ++n) {
    for (std::uint64_t w : units(n)) {
      const auto set = gp::compute_period_set(n, static_cast<std::int64_t>(w), 1, gp::ColorMode::standard);
      const auto fold = gp::dihedral_order(n, static_cast<std::int64_t>(w));
      const auto report = gp::verify_dihedral(set, fold, 1e-8);
      REQUIRE_MESSAGE(report.holds, "n=" << n << " omega=" << w);
      for (const auto& rec : set.orbits) {
        const bool closed = std::any_of(set.orbits.begin(), set.orbits.end(),
                                        [&](const auto& o) { return near(o.value, std::conj(rec.value), 1e-9); });
        REQUIRE(closed);
      }
    }
  }
}

TEST_CASE("subplot containment holds for every n <= 500, unit omega and divisor c") {
  for (std::uint64_t n = 1; n <= 500; ++n) {
    const auto divs = gp::divisors(n);
    for (std::uint64_t w : units(n)) {
      for (std::uint64_t c : divs) {
        REQUIRE_MESSAGE(gp::subplot_containment_check(n, static_cast<std::int64_t>(w), c),
                        "n=" << n << " omega=" << w << " c=" << c);
      }
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto one = gp::compute_orbits(200003, 7, {1, gp::default_max_n()});
  const auto many = gp::compute_orbits(200003, 7, {5, gp::default_max_n()});
  REQUIRE(one.orbits.size() == many.orbits.size());
  for (std::size_t i = 0; i < one.orbits.size(); ++i) {
    REQUIRE(one.orbits[i].rep == many.orbits[i].rep);
    REQUIRE(one.orbits[i].value == many.orbits[i].value);
  }
}
