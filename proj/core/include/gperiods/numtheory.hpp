#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gp {

using BigInt = boost::multiprecision::cpp_int;

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;

/// (a * b) mod m with a 128-bit intermediate. Requires m > 0.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;

/// Canonical residue of a possibly negative integer in [0, n).
std::uint64_t reduce_mod(std::int64_t value, std::uint64_t n) noexcept;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  bool operator==(const PrimePower&) const = default;
};

/// Prime factorization in increasing prime order. factorize(1) is empty.
std::vector<PrimePower> factorize(std::uint64_t n);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n) noexcept;

/// All positive divisors of n in increasing order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t euler_totient(std::uint64_t n);

/// Exponent of the unit group (Z/nZ)^x.
std::uint64_t carmichael_lambda(std::uint64_t n);

/// Smallest d >= 1 with omega^d = 1 (mod n). Omega is reduced mod n first.
/// Throws Error{Errc::not_coprime} when gcd(omega, n) != 1.
///
/// Starts from the Carmichael exponent and strips prime factors while the
/// power stays 1, so the cost is polylogarithmic in n.
std::uint64_t multiplicative_order(std::int64_t omega, std::uint64_t n);

/// Dense integer polynomial, constant term first.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);

  /// t^d - 1
  static IntPolynomial x_pow_minus_one(std::size_t d);

  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }

  const BigInt& operator[](std::size_t i) const { return coeffs_.at(i); }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Exact division by a monic divisor. Throws std::domain_error if the
  /// remainder is nonzero.
  IntPolynomial divide_exact(const IntPolynomial& monic_divisor) const;

  std::complex<double> evaluate(std::complex<double> t) const;

 private:
  void trim();

  std::vector<BigInt> coeffs_;
};

/// The d-th cyclotomic polynomial, memoized process-wide (thread-safe).
const IntPolynomial& cyclotomic(std::uint64_t d);

/// b_{k,j}: row k holds the coefficients of t^k reduced modulo Phi_d,
/// for k = 0..d-1 and j = 0..phi(d)-1.
class ExponentMatrix {
 public:
  ExponentMatrix(std::uint64_t d, std::uint64_t phi_d, std::vector<std::int64_t> entries);

  std::uint64_t d() const noexcept { return d_; }
  std::uint64_t phi_d() const noexcept { return phi_d_; }
  std::uint64_t rows() const noexcept { return d_; }
  std::uint64_t cols() const noexcept { return phi_d_; }

  std::span<const std::int64_t> row(std::uint64_t k) const {
    return {entries_.data() + k * phi_d_, static_cast<std::size_t>(phi_d_)};
  }
  std::int64_t operator()(std::uint64_t k, std::uint64_t j) const { return entries_[k * phi_d_ + j]; }

 private:
  std::uint64_t d_;
  std::uint64_t phi_d_;
  std::vector<std::int64_t> entries_;
};

/// Throws Error{Errc::overflow} if some b_{k,j} leaves the int64 range.
ExponentMatrix exponent_matrix(std::uint64_t d);

}  // namespace gp
