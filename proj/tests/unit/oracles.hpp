#pragma once

// Slow reference implementations shared by the unit tests. Nothing here calls
// into the library except for the Complex alias.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using LComplex = std::complex<long double>;

inline bool trial_division_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

// chi by enumerating the squares mod p.
inline std::vector<int> chi_table(std::uint64_t p) {
  std::vector<int> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t x = 1; x < p; ++x) chi[x * x % p] = 1;
  return chi;
}

inline LComplex expi(long double angle) { return {std::cos(angle), std::sin(angle)}; }

// e^{sign 2 pi i a / p} in long double.
inline LComplex omega(long double sign, std::int64_t a, std::uint64_t p) {
  const std::int64_t r = ((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
  return expi(sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) / static_cast<long double>(p));
}

inline std::uint64_t mod(std::int64_t a, std::uint64_t p) {
  const auto sp = static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(((a % sp) + sp) % sp);
}

// u_{l,j}[k] = c chi[k - l] e^{-2 pi i k j / p}
inline std::vector<LComplex> gabor(std::uint64_t p, std::uint64_t l, std::uint64_t j, bool unit) {
  const auto chi = chi_table(p);
  const long double c = unit ? 1.0L / std::sqrt(static_cast<long double>(p - 1)) : 1.0L / std::sqrt(static_cast<long double>(p));
  std::vector<LComplex> u(p);
  for (std::uint64_t k = 0; k < p; ++k)
    u[k] = c * static_cast<long double>(chi[mod(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(l), p)]) *
           omega(-1.0L, static_cast<std::int64_t>(k * j), p);
  return u;
}

inline LComplex dot(const std::vector<LComplex>& u, const std::vector<LComplex>& v) {
  LComplex s = 0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * std::conj(v[k]);
  return s;
}

inline Complex narrow(LComplex z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// Eigenvalues of a Hermitian matrix from the characteristic polynomial, for n <= 3.
inline std::vector<double> hermitian_eigs_closed_form(const std::vector<std::vector<Complex>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return {a[0][0].real()};
  if (n == 2) {
    const double tr = a[0][0].real() + a[1][1].real();
    const double det = a[0][0].real() * a[1][1].real() - std::norm(a[0][1]);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    return {tr / 2 - disc, tr / 2 + disc};
  }
  // trigonometric solution of the depressed cubic
  const double q = (a[0][0].real() + a[1][1].real() + a[2][2].real()) / 3.0;
  const double p1 = std::norm(a[0][1]) + std::norm(a[0][2]) + std::norm(a[1][2]);
  double p2 = 0;
  for (std::size_t i = 0; i < 3; ++i) p2 += (a[i][i].real() - q) * (a[i][i].real() - q);
  p2 += 2 * p1;
  const double pp = std::sqrt(p2 / 6.0);
  if (pp == 0) return {q, q, q};
  std::vector<std::vector<Complex>> b(3, std::vector<Complex>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / pp;
  const Complex detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb.real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2 * pp * std::cos(phi);
  const double e3 = q + 2 * pp * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3 * q - e1 - e3;
  return {e3, e2, e1};
}

}  // namespace oracle
