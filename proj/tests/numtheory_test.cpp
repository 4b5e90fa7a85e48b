#include <doctest.h>

#include <algorithm>
#include <complex>
#include <thread>
#include <random>

#include "gperiods/error.hpp"
#include "gperiods/numtheory.hpp"
#include "oracles.hpp"

using gp::BigInt;

namespace {

std::vector<long long> small_coeffs(const gp::IntPolynomial& p) {
  std::vector<long long> out;
  for (const BigInt& c : p.coeffs()) out.push_back(c.convert_to<long long>());
  return out;
}

}  // namespace

TEST_CASE("gcd") {
  CHECK(gp::gcd(1188, 29070) == 18);
  CHECK(gp::gcd(21791, 70091) == 7);
  CHECK(gp::gcd(0, 7) == 7);
  CHECK(gp::gcd(0, 0) == 0);
}

TEST_CASE("reduce_mod handles negatives") {
  CHECK(gp::reduce_mod(-1, 12) == 11);
  CHECK(gp::reduce_mod(-12, 12) == 0);
  CHECK(gp::reduce_mod(29, 12) == 5);
  CHECK(gp::reduce_mod(INT64_MIN, 7) == 6);  // 2^63 = 1 (mod 7)
}

TEST_CASE("multiplicative_order examples") {
  CHECK(gp::multiplicative_order(5, 12) == 2);
  CHECK(gp::multiplicative_order(5, 4) == 1);
  CHECK(gp::multiplicative_order(2, 27) == oracle::order(2, 27));
  CHECK(gp::multiplicative_order(2, 27) == 18);
  CHECK(gp::multiplicative_order(12345, 1) == 1);
  CHECK(gp::multiplicative_order(-1, 7) == 2);
  CHECK(gp::multiplicative_order(1, 1000003) == 1);
}

TEST_CASE("multiplicative_order rejects non-units") {
  try {
    (void)gp::multiplicative_order(4, 12);
    FAIL("expected not_coprime");
  } catch (const gp::Error& e) {
    CHECK(e.code() == gp::Errc::not_coprime);
  }
  CHECK_THROWS_AS((void)gp::multiplicative_order(0, 5), gp::Error);
}

TEST_CASE("multiplicative_order matches brute force and divides phi for n <= 500") {
  for (std::uint64_t n = 1; n <= 500; ++n) {
    const std::uint64_t phi = gp::euler_totient(n);
    REQUIRE(phi == oracle::totient(n));
    for (std::uint64_t w = 0; w < n; ++w) {
      if (oracle::gcd(w, n) != 1) continue;
      const std::uint64_t d = gp::multiplicative_order(static_cast<std::int64_t>(w), n);
      REQUIRE(d == oracle::order(w, n));
      REQUIRE(phi % d == 0);
    }
  }
}

TEST_CASE("multiplicative_order on large moduli") {
  CHECK(gp::multiplicative_order(3082638, 9114361) == 3);
  CHECK(gp::multiplicative_order(239, 3019) == 3);
  CHECK(gp::multiplicative_order(1347, 13063) == 3);
  // 2^61 - 1 is prime and 3 generates a subgroup whose order must divide 2^61 - 2.
  const std::uint64_t m61 = (std::uint64_t{1} << 61) - 1;
  const std::uint64_t d = gp::multiplicative_order(3, m61);
  CHECK((m61 - 1) % d == 0);
  CHECK(gp::pow_mod(3, d, m61) == 1);
}

TEST_CASE("euler_totient") {
  CHECK(gp::euler_totient(1) == 1);
  CHECK(gp::euler_totient(3) == 2);
  CHECK(gp::euler_totient(27) == 18);
  CHECK(gp::euler_totient(9114361) == 3019 * 3018);
}

TEST_CASE("factorize and primality") {
  CHECK(gp::factorize(1).empty());
  CHECK(gp::factorize(9114361) == std::vector<gp::PrimePower>{{3019, 2}});
  CHECK(gp::factorize(255255) ==
        std::vector<gp::PrimePower>{{3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1}, {17, 1}});
  // Semiprime with two ~32-bit factors needs the rho path.
  const std::uint64_t p = 4294967291ULL, q = 4294967279ULL;
  CHECK(gp::factorize(p * q) == std::vector<gp::PrimePower>{{q, 1}, {p, 1}});
  CHECK(gp::is_prime(3019));
  CHECK(gp::is_prime(13063));
  CHECK_FALSE(gp::is_prime(9114361));
  CHECK_FALSE(gp::is_prime(1));
  CHECK(gp::divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("randomized factorization round-trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = (rng() >> 20) + 1;
    std::uint64_t product = 1;
    for (const auto& [prime, exp] : gp::factorize(n)) {
      REQUIRE(gp::is_prime(prime));
      for (unsigned e = 0; e < exp; ++e) product *= prime;
    }
    REQUIRE(product == n);
  }
}

TEST_CASE("cyclotomic polynomial examples") {
  CHECK(small_coeffs(gp::cyclotomic(1)) == std::vector<long long>{-1, 1});
  CHECK(small_coeffs(gp::cyclotomic(3)) == std::vector<long long>{1, 1, 1});
  CHECK(small_coeffs(gp::cyclotomic(4)) == std::vector<long long>{1, 0, 1});
  CHECK(small_coeffs(gp::cyclotomic(12)) == std::vector<long long>{1, 0, -1, 0, 1});
}

TEST_CASE("cyclotomic: degree phi(d), monic, product over divisors is t^d - 1") {
  for (std::uint64_t d = 1; d <= 100; ++d) {
    const auto& phi = gp::cyclotomic(d);
    REQUIRE(phi.is_monic());
    REQUIRE(static_cast<std::uint64_t>(phi.degree()) == oracle::totient(d));

    std::vector<long long> product{1};
    for (std::uint64_t e = 1; e <= d; ++e) {
      if (d % e == 0) product = oracle::poly_mul(product, small_coeffs(gp::cyclotomic(e)));
    }
    std::vector<long long> expected(d + 1, 0);
    expected[0] = -1;
    expected[d] = 1;
    REQUIRE(product == expected);
  }
}

TEST_CASE("cyclotomic 105 has a coefficient -2") {
  const auto coeffs = small_coeffs(gp::cyclotomic(105));
  CHECK(std::count(coeffs.begin(), coeffs.end(), -2) == 2);
}

TEST_CASE("large cyclotomic coefficients stay exact") {
  // Phi_{3*5*7*11}: max |coefficient| is 3 and -2 appears 48 times (sympy).
  const auto& phi = gp::cyclotomic(1155);
  BigInt max_abs = 0;
  for (const auto& c : phi.coeffs()) max_abs = std::max(max_abs, BigInt(abs(c)));
  CHECK(max_abs == 3);
  CHECK(std::count(phi.coeffs().begin(), phi.coeffs().end(), BigInt(-2)) == 48);
  CHECK(static_cast<std::uint64_t>(phi.degree()) == gp::euler_totient(1155));
}

TEST_CASE("IntPolynomial exact division") {
  const gp::IntPolynomial t3m1 = gp::IntPolynomial::x_pow_minus_one(3);
  const gp::IntPolynomial tm1(std::vector<BigInt>{-1, 1});
  CHECK(t3m1.divide_exact(tm1) == gp::cyclotomic(3));
  const gp::IntPolynomial tp2(std::vector<BigInt>{2, 1});
  CHECK_THROWS_AS((void)t3m1.divide_exact(tp2), std::domain_error);
}

TEST_CASE("exponent_matrix examples") {
  const auto m3 = gp::exponent_matrix(3);
  REQUIRE(m3.rows() == 3);
  REQUIRE(m3.cols() == 2);
  CHECK(std::vector<std::int64_t>(m3.row(0).begin(), m3.row(0).end()) == std::vector<std::int64_t>{1, 0});
  CHECK(std::vector<std::int64_t>(m3.row(1).begin(), m3.row(1).end()) == std::vector<std::int64_t>{0, 1});
  CHECK(std::vector<std::int64_t>(m3.row(2).begin(), m3.row(2).end()) == std::vector<std::int64_t>{-1, -1});

  const auto m1 = gp::exponent_matrix(1);
  CHECK(m1.rows() == 1);
  CHECK(m1.cols() == 1);
  CHECK(m1(0, 0) == 1);

  const auto m4 = gp::exponent_matrix(4);
  const std::vector<std::vector<std::int64_t>> want{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::uint64_t k = 0; k < 4; ++k) {
    CHECK(std::vector<std::int64_t>(m4.row(k).begin(), m4.row(k).end()) == want[k]);
  }
}

TEST_CASE("exponent_matrix rows evaluate to zeta^k at primitive roots, d <= 30") {
  for (std::uint64_t d = 1; d <= 30; ++d) {
    const auto b = gp::exponent_matrix(d);
    REQUIRE(b.row(0)[0] == 1);
    for (std::uint64_t j = 1; j < b.cols(); ++j) REQUIRE(b.row(0)[j] == 0);
    for (std::uint64_t a = 1; a <= d; ++a) {
      if (oracle::gcd(a, d) != 1) continue;
      const std::complex<double> zeta = oracle::root_of_unity(a, d);
      for (std::uint64_t k = 0; k < d; ++k) {
        std::complex<double> acc = 0, power = 1;
        for (std::uint64_t j = 0; j < b.cols(); ++j) {
          acc += static_cast<double>(b(k, j)) * power;
          power *= zeta;
        }
        REQUIRE(std::abs(acc - oracle::root_of_unity(a * k, d)) < 1e-12);
      }
    }
  }
}

TEST_CASE("cyclotomic memo is safe under concurrent first use") {
  std::vector<std::jthread> threads;
  std::vector<long> degrees(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { degrees[t] = gp::cyclotomic(210 + 2 * t).degree(); });
  }
  threads.clear();
  for (int t = 0; t < 8; ++t) CHECK(degrees[t] == static_cast<long>(oracle::totient(210 + 2 * t)));
}
