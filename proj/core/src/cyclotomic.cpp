#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "gperiods/error.hpp"
#include "gperiods/numtheory.hpp"

namespace gp {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial IntPolynomial::x_pow_minus_one(std::size_t d) {
  std::vector<BigInt> c(d + 1);
  c[0] = -1;
  c[d] += 1;
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::divide_exact(const IntPolynomial& divisor) const {
  if (!divisor.is_monic()) throw std::invalid_argument("divide_exact: divisor must be monic");
  if (is_zero()) return {};
  const std::size_t dn = divisor.coeffs_.size() - 1;
  if (coeffs_.size() - 1 < dn) throw std::domain_error("divide_exact: nonzero remainder");

  std::vector<BigInt> rem = coeffs_;
  std::vector<BigInt> quot(coeffs_.size() - dn);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const BigInt lead = rem[i + dn];
    quot[i] = lead;
    if (lead == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) rem[i + j] -= lead * divisor.coeffs_[j];
  }
  for (std::size_t i = 0; i < dn; ++i) {
    if (rem[i] != 0) throw std::domain_error("divide_exact: nonzero remainder");
  }
  return IntPolynomial(std::move(quot));
}

std::complex<double> IntPolynomial::evaluate(std::complex<double> t) const {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->convert_to<double>();
  return acc;
}

namespace {

std::mutex& cyclotomic_mutex() {
  static std::mutex m;
  return m;
}

// Entries are never erased, so references into the map stay valid.
std::map<std::uint64_t, std::unique_ptr<const IntPolynomial>>& cyclotomic_table() {
  static std::map<std::uint64_t, std::unique_ptr<const IntPolynomial>> table;
  return table;
}

std::mutex& matrix_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::uint64_t, std::unique_ptr<const ExponentMatrix>>& matrix_table() {
  static std::map<std::uint64_t, std::unique_ptr<const ExponentMatrix>> table;
  return table;
}

}  // namespace

const IntPolynomial& cyclotomic(std::uint64_t d) {
  if (d == 0) throw Error(Errc::invalid_argument, "cyclotomic: d must be positive");
  {
    std::lock_guard lock(cyclotomic_mutex());
    if (auto it = cyclotomic_table().find(d); it != cyclotomic_table().end()) return *it->second;
  }

  // Phi_d = (t^d - 1) / prod_{e | d, e < d} Phi_e. Recursion happens outside the lock.
  IntPolynomial denom(std::vector<BigInt>{1});
  for (std::uint64_t e : divisors(d)) {
    if (e == d) break;
    denom = denom * cyclotomic(e);
  }
  auto phi = std::make_unique<const IntPolynomial>(IntPolynomial::x_pow_minus_one(d).divide_exact(denom));

  std::lock_guard lock(cyclotomic_mutex());
  auto [it, inserted] = cyclotomic_table().emplace(d, std::move(phi));
  return *it->second;
}

ExponentMatrix::ExponentMatrix(std::uint64_t d, std::uint64_t phi_d, std::vector<std::int64_t> entries)
    : d_(d), phi_d_(phi_d), entries_(std::move(entries)) {
  if (entries_.size() != d_ * phi_d_) throw std::invalid_argument("ExponentMatrix: shape mismatch");
}

ExponentMatrix exponent_matrix(std::uint64_t d) {
  if (d == 0) throw Error(Errc::invalid_argument, "exponent_matrix: d must be positive");
  {
    std::lock_guard lock(matrix_mutex());
    if (auto it = matrix_table().find(d); it != matrix_table().end()) return *it->second;
  }

  const IntPolynomial& phi_poly = cyclotomic(d);
  const auto width = static_cast<std::size_t>(phi_poly.degree());
  const auto& phi_coeffs = phi_poly.coeffs();

  const BigInt lo = std::numeric_limits<std::int64_t>::min();
  const BigInt hi = std::numeric_limits<std::int64_t>::max();

  std::vector<std::int64_t> entries;
  entries.reserve(d * width);
  std::vector<BigInt> row(width);
  row[0] = 1;
  for (std::uint64_t k = 0; k < d; ++k) {
    for (const BigInt& v : row) {
      if (v < lo || v > hi) {
        throw Error(Errc::overflow, "exponent_matrix: coefficient of t^" + std::to_string(k) + " mod Phi_" +
                                        std::to_string(d) + " exceeds 64 bits");
      }
      entries.push_back(v.convert_to<std::int64_t>());
    }
    // Multiply by t, then fold the t^width term back using t^width = -(Phi_d - t^width).
    const BigInt top = row[width - 1];
    for (std::size_t j = width - 1; j > 0; --j) row[j] = row[j - 1];
    row[0] = 0;
    if (top != 0) {
      for (std::size_t j = 0; j < width; ++j) row[j] -= top * phi_coeffs[j];
    }
  }

  auto matrix = std::make_unique<const ExponentMatrix>(d, width, std::move(entries));
  std::lock_guard lock(matrix_mutex());
  auto [it, inserted] = matrix_table().emplace(d, std::move(matrix));
  return *it->second;
}

}  // namespace gp
