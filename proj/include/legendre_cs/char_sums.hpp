#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "legendre_cs/zpz_core.hpp"

namespace lcs {

/// Relative slack absorbed by every bound comparison.
inline constexpr double kBoundSlack = 1e-9;

/// A computed |sum| against a published bound.
struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // value / bound; 0 or +inf when bound == 0
  bool holds = true;   // value <= bound * (1 + kBoundSlack)

  static BoundCheck make(double value, double bound);
};

/// |sum_{n=0}^{p-1} chi[n + d_1] ... chi[n + d_k]| against 9 k sqrt(p).
/// Shifts must satisfy 0 < d_1 < ... < d_k < p.
BoundCheck weil_product_sum(const FieldContext& ctx, std::span<const std::uint64_t> shifts);

/// The complex sum sum_k chi[k] chi[k + m] exp(-2 pi i k n / p). `reversed`
/// accumulates from k = p - 1 down to 0.
Complex twisted_autocorrelation_sum(const FieldContext& ctx, std::uint64_t m, std::uint64_t n,
                                    bool reversed = false);

/// |twisted_autocorrelation_sum| against 2 sqrt(p) when m, n != 0, otherwise
/// against the trivial bound p - 1.
BoundCheck twisted_autocorrelation(const FieldContext& ctx, std::uint64_t m, std::uint64_t n);

/// Largest |sum_{M <= k <= M + N} chi[k]| over subintervals of [0, p - 1]
/// (cyclic intervals when `wrapping`), against sqrt(p) ln p. O(p).
BoundCheck polya_vinogradov_max(const FieldContext& ctx, bool wrapping = false);

/// |sum_{a in S} sum_{b in T} chi[a + b]| against
/// sqrt(p |S| |T|) (1 - |S|/p)^{1/2} (1 - |T|/p)^{1/2}.
/// S and T must be nonempty sets of distinct residues.
BoundCheck chung_double_sum(const FieldContext& ctx, std::span<const std::uint64_t> s,
                            std::span<const std::uint64_t> t);

}  // namespace lcs
