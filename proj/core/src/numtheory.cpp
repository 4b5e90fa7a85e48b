#include "gperiods/numtheory.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gperiods/error.hpp"

namespace gp {

namespace {

__extension__ typedef unsigned __int128 u128;

// Brent's variant of Pollard rho; returns a nontrivial factor of an odd composite n.
std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t kBlock = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(kBlock, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBlock;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const std::uint64_t f = pollard_brent(n);
  factor_into(f, primes);
  factor_into(n / f, primes);
}

}  // namespace

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept { return std::gcd(a, b); }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t reduce_mod(std::int64_t value, std::uint64_t n) noexcept {
  if (value >= 0) return static_cast<std::uint64_t>(value) % n;
  // -(value + 1) avoids overflow at INT64_MIN.
  const auto mag = static_cast<std::uint64_t>(-(value + 1)) + 1;
  const std::uint64_t r = mag % n;
  return r == 0 ? 0 : n - r;
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "factorize: n must be positive");
  std::vector<std::uint64_t> primes;
  // Trial division clears small factors cheaply; rho handles what remains.
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());

  std::vector<PrimePower> out;
  for (std::uint64_t p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t existing = out.size();
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < existing; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t euler_totient(std::uint64_t n) {
  std::uint64_t phi = n;
  for (const auto& pp : factorize(n)) phi = phi / pp.prime * (pp.prime - 1);
  return phi;
}

std::uint64_t carmichael_lambda(std::uint64_t n) {
  std::uint64_t lambda = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::uint64_t term = 1;
    if (p == 2) {
      term = e == 1 ? 1 : (e == 2 ? 2 : (std::uint64_t{1} << (e - 2)));
    } else {
      term = p - 1;
      for (unsigned i = 1; i < e; ++i) term *= p;
    }
    lambda = std::lcm(lambda, term);
  }
  return lambda;
}

std::uint64_t multiplicative_order(std::int64_t omega, std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "multiplicative_order: n must be positive");
  const std::uint64_t w = reduce_mod(omega, n);
  if (std::gcd(w, n) != 1) {
    throw Error(Errc::not_coprime,
                "omega " + std::to_string(omega) + " is not coprime to n " + std::to_string(n));
  }
  if (n == 1) return 1;
  std::uint64_t order = carmichael_lambda(n);
  for (const auto& pp : factorize(order)) {
    for (unsigned i = 0; i < pp.exponent; ++i) {
      if (pow_mod(w, order / pp.prime, n) != 1) break;
      order /= pp.prime;
    }
  }
  return order;
}

}  // namespace gp
