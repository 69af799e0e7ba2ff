#include "legendre_cs/zpz_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "legendre_cs/summation.hpp"

namespace lcs {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % mod);
}

}  // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t q : kSmall) {
    if (m == q) return true;
    if (m % q == 0) return false;
  }
  std::uint64_t d = m - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // The first twelve primes are a deterministic witness set below 3.3e24.
  for (std::uint64_t a : kSmall) {
    std::uint64_t x = pow_mod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t m) {
  while (!is_prime(m)) ++m;
  return m;
}

int legendre_symbol(std::uint64_t k, std::uint64_t p) {
  if (p < 3 || !is_prime(p)) {
    throw std::invalid_argument("legendre_symbol: modulus " + std::to_string(p) +
                                " is not an odd prime");
  }
  if (k >= p) throw std::invalid_argument("legendre_symbol: residue out of range");
  if (k == 0) return 0;
  return pow_mod(k, (p - 1) / 2, p) == 1 ? 1 : -1;
}

FieldContext::FieldContext(std::uint64_t p, std::uint64_t table_budget) : p_(p) {
  if (p < 3 || !is_prime(p)) {
    throw std::invalid_argument("FieldContext: " + std::to_string(p) + " is not an odd prime");
  }
  if (p > table_budget) {
    throw std::length_error("FieldContext: p = " + std::to_string(p) +
                            " exceeds the table budget of " + std::to_string(table_budget));
  }
  chi_.assign(p, -1);
  chi_[0] = 0;
  for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) chi_[mul_mod(x, x, p)] = 1;

  roots_.resize(p);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  for (std::uint64_t k = 0; k < p; ++k) {
    // Use the symmetric representative so the angle stays in [-pi, pi].
    const double kk = k <= p / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(p);
    const double angle = -step * kk;
    roots_[k] = Complex(std::cos(angle), std::sin(angle));
  }
}

FieldContext build_context(std::uint64_t p, std::uint64_t table_budget) {
  return FieldContext(p, table_budget);
}

GaussSum gauss_sum(const FieldContext& ctx) {
  CompensatedSum<Complex> acc;
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  for (std::size_t k = 1; k < chi.size(); ++k) acc += static_cast<double>(chi[k]) * std::conj(roots[k]);
  const Complex g = acc.value();
  return {g, g / std::sqrt(static_cast<double>(ctx.p()))};
}

}  // namespace lcs
