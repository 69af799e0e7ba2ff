#include "legendre_cs/char_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "legendre_cs/summation.hpp"

namespace lcs {

BoundCheck BoundCheck::make(double value, double bound) {
  BoundCheck check;
  check.value = value;
  check.bound = bound;
  if (bound > 0.0) {
    check.ratio = value / bound;
  } else {
    check.ratio = value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  check.holds = value <= bound + kBoundSlack * bound;
  return check;
}

BoundCheck weil_product_sum(const FieldContext& ctx, std::span<const std::uint64_t> shifts) {
  const std::uint64_t p = ctx.p();
  if (shifts.empty()) throw std::invalid_argument("weil_product_sum: need at least one shift");
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (shifts[i] == 0 || shifts[i] >= p) {
      throw std::invalid_argument("weil_product_sum: shift " + std::to_string(shifts[i]) +
                                  " outside (0, p)");
    }
    if (i > 0 && shifts[i] <= shifts[i - 1]) {
      throw std::invalid_argument("weil_product_sum: shifts must be strictly increasing");
    }
  }
  const auto chi = ctx.chi();
  std::int64_t total = 0;
  for (std::uint64_t n = 0; n < p; ++n) {
    int prod = 1;
    for (std::uint64_t d : shifts) {
      prod *= chi[(n + d) % p];
      if (prod == 0) break;
    }
    total += prod;
  }
  const double bound = 9.0 * static_cast<double>(shifts.size()) * std::sqrt(static_cast<double>(p));
  return BoundCheck::make(std::abs(static_cast<double>(total)), bound);
}

Complex twisted_autocorrelation_sum(const FieldContext& ctx, std::uint64_t m, std::uint64_t n,
                                    bool reversed) {
  const std::uint64_t p = ctx.p();
  m %= p;
  n %= p;
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  CompensatedSum<Complex> acc;
  auto term = [&](std::uint64_t k) {
    const int prod = chi[k] * chi[(k + m) % p];
    if (prod != 0) acc += prod > 0 ? roots[(k * n) % p] : -roots[(k * n) % p];
  };
  if (reversed) {
    for (std::uint64_t k = p; k-- > 0;) term(k);
  } else {
    for (std::uint64_t k = 0; k < p; ++k) term(k);
  }
  return acc.value();
}

BoundCheck twisted_autocorrelation(const FieldContext& ctx, std::uint64_t m, std::uint64_t n) {
  const std::uint64_t p = ctx.p();
  const double value = std::abs(twisted_autocorrelation_sum(ctx, m, n));
  const bool nontrivial = (m % p) != 0 && (n % p) != 0;
  const double bound = nontrivial ? 2.0 * std::sqrt(static_cast<double>(p)) : static_cast<double>(p - 1);
  return BoundCheck::make(value, bound);
}

// Every interval sum is a difference of two prefix sums P[b] - P[a], a < b,
// so the extreme is max(P) - min(P). A cyclic interval [M, p) + [0, b) sums to
// P[p] - P[M] + P[b] = P[b] - P[M] since P[p] = 0: the same set of differences.
BoundCheck polya_vinogradov_max(const FieldContext& ctx, bool wrapping) {
  (void)wrapping;
  const auto chi = ctx.chi();
  std::int64_t prefix = 0, lo = 0, hi = 0;
  for (std::int8_t v : chi) {
    prefix += v;
    lo = std::min(lo, prefix);
    hi = std::max(hi, prefix);
  }
  const double p = static_cast<double>(ctx.p());
  return BoundCheck::make(static_cast<double>(hi - lo), std::sqrt(p) * std::log(p));
}

namespace {

void check_residue_set(std::span<const std::uint64_t> set, std::uint64_t p, const char* name) {
  if (set.empty()) throw std::invalid_argument(std::string("chung_double_sum: ") + name + " is empty");
  std::vector<bool> seen(p, false);
  for (std::uint64_t a : set) {
    if (a >= p) {
      throw std::invalid_argument(std::string("chung_double_sum: residue out of range in ") + name);
    }
    if (seen[a]) throw std::invalid_argument(std::string("chung_double_sum: duplicate residue in ") + name);
    seen[a] = true;
  }
}

}  // namespace

BoundCheck chung_double_sum(const FieldContext& ctx, std::span<const std::uint64_t> s,
                            std::span<const std::uint64_t> t) {
  const std::uint64_t p = ctx.p();
  check_residue_set(s, p, "S");
  check_residue_set(t, p, "T");
  const auto chi = ctx.chi();
  std::int64_t total = 0;
  for (std::uint64_t a : s) {
    for (std::uint64_t b : t) total += chi[(a + b) % p];
  }
  const double pd = static_cast<double>(p);
  const double ns = static_cast<double>(s.size());
  const double nt = static_cast<double>(t.size());
  const double bound = std::sqrt(pd * ns * nt) * std::sqrt(1.0 - ns / pd) * std::sqrt(1.0 - nt / pd);
  return BoundCheck::make(std::abs(static_cast<double>(total)), bound);
}

}  // namespace lcs
