#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace lcs {

using Complex = std::complex<double>;

/// Deterministic primality test valid for every 64-bit input.
bool is_prime(std::uint64_t m);

/// Smallest prime >= m.
std::uint64_t next_prime(std::uint64_t m);

/// Legendre symbol (k | p) for 0 <= k < p via Euler's criterion.
/// Throws std::invalid_argument if p is not an odd prime or k >= p.
int legendre_symbol(std::uint64_t k, std::uint64_t p);

/// Modular exponentiation with 128-bit intermediates.
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

/// Default ceiling on p for table construction (17 bytes per residue).
inline constexpr std::uint64_t kDefaultTableBudget = 20'000'000;

/// Immutable per-prime tables: the Legendre character and the roots of unity
/// roots[k] = exp(-2 pi i k / p). Shared read-only by every other module.
class FieldContext {
 public:
  FieldContext(std::uint64_t p, std::uint64_t table_budget = kDefaultTableBudget);

  std::uint64_t p() const { return p_; }
  std::span<const std::int8_t> chi() const { return chi_; }
  std::span<const Complex> roots() const { return roots_; }

  /// chi at an arbitrary (possibly negative) integer, reduced mod p.
  int chi_at(std::int64_t k) const { return chi_[reduce(k)]; }
  /// exp(-2 pi i k / p) at an arbitrary integer k.
  const Complex& root_at(std::int64_t k) const { return roots_[reduce(k)]; }

  std::size_t reduce(std::int64_t k) const {
    const std::int64_t p = static_cast<std::int64_t>(p_);
    std::int64_t r = k % p;
    return static_cast<std::size_t>(r < 0 ? r + p : r);
  }

 private:
  std::uint64_t p_;
  std::vector<std::int8_t> chi_;
  std::vector<Complex> roots_;
};

/// Convenience wrapper matching the free-function style of the other modules.
FieldContext build_context(std::uint64_t p, std::uint64_t table_budget = kDefaultTableBudget);

struct GaussSum {
  Complex value;    // sum_k chi[k] exp(+2 pi i k / p)
  Complex epsilon;  // value / sqrt(p); 1 when p = 1 mod 4, i when p = 3 mod 4
};

GaussSum gauss_sum(const FieldContext& ctx);

}  // namespace lcs
