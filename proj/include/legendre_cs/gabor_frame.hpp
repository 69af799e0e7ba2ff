#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "legendre_cs/zpz_core.hpp"

namespace lcs {

/// A time-frequency shift (l, j): time shift l, modulation j, both mod p.
struct TimeFreqIndex {
  std::uint32_t l = 0;
  std::uint32_t j = 0;

  auto operator<=>(const TimeFreqIndex&) const = default;

  /// Row-major position in the p x p index grid.
  std::uint64_t flat(std::uint64_t p) const { return static_cast<std::uint64_t>(l) * p + j; }
  static TimeFreqIndex from_flat(std::uint64_t index, std::uint64_t p) {
    return {static_cast<std::uint32_t>(index / p), static_cast<std::uint32_t>(index % p)};
  }
};

/// PaperSqrtP scales every entry by 1/sqrt(p), so column norm^2 = (p-1)/p
/// because chi[0] = 0. UnitNorm scales by 1/sqrt(p-1) for exact unit columns.
enum class NormConvention { PaperSqrtP, UnitNorm };

std::string_view to_string(NormConvention conv);
NormConvention parse_convention(std::string_view text);

/// Entry scale c for the given convention.
double column_scale(const FieldContext& ctx, NormConvention conv);

using GaborVector = std::vector<Complex>;
using HermitianMatrix = Eigen::MatrixXcd;

/// u_{l,j}[k] = c * chi[k - l] * exp(-2 pi i k j / p).
GaborVector gabor_vector(const FieldContext& ctx, TimeFreqIndex idx, NormConvention conv);

/// Accumulates weight * u_{l,j} into `out` (length p) without materializing u.
void add_gabor_vector(const FieldContext& ctx, TimeFreqIndex idx, NormConvention conv,
                      Complex weight, std::span<Complex> out);

/// sum_k u[k] * conj(v[k]) with compensated summation.
Complex inner_product(std::span<const Complex> u, std::span<const Complex> v);

/// <u_a, u_b> through the difference-class reduction, O(p).
Complex gabor_inner_product(const FieldContext& ctx, TimeFreqIndex a, TimeFreqIndex b,
                            NormConvention conv);

enum class CoherenceMode { Brute, ShiftClass };

inline constexpr std::uint64_t kBruteCoherenceLimit = 31;

/// Largest |<u_a, u_b>| over distinct index pairs. Brute mode materializes all
/// p^2 columns and is refused above `brute_limit`; shift-class mode scans the
/// p^2 - 1 nonzero difference classes (dl, dj) once each.
double coherence(const FieldContext& ctx, NormConvention conv, CoherenceMode mode,
                 unsigned workers = 1, std::uint64_t brute_limit = kBruteCoherenceLimit);

/// |<u_{l,j}, u_{l+dl, j-dj}>| for the class (dl, dj), independent of (l, j).
double difference_class_magnitude(const FieldContext& ctx, std::uint64_t dl, std::uint64_t dj,
                                  NormConvention conv);

inline constexpr std::size_t kDefaultGramCap = 256;

/// G[a][b] = <u_a, u_b> over the support. Throws on duplicate or invalid
/// indices, or if the support exceeds `cap`.
HermitianMatrix gram_submatrix(const FieldContext& ctx, std::span<const TimeFreqIndex> support,
                               NormConvention conv, std::size_t cap = kDefaultGramCap);

}  // namespace lcs
