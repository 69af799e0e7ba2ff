#include "legendre_cs/gabor_frame.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "legendre_cs/parallel.hpp"
#include "legendre_cs/summation.hpp"

namespace lcs {

std::string_view to_string(NormConvention conv) {
  return conv == NormConvention::PaperSqrtP ? "paper" : "unit";
}

NormConvention parse_convention(std::string_view text) {
  if (text == "paper") return NormConvention::PaperSqrtP;
  if (text == "unit") return NormConvention::UnitNorm;
  throw std::invalid_argument("unknown convention '" + std::string(text) + "' (expected paper|unit)");
}

double column_scale(const FieldContext& ctx, NormConvention conv) {
  const double p = static_cast<double>(ctx.p());
  return conv == NormConvention::PaperSqrtP ? 1.0 / std::sqrt(p) : 1.0 / std::sqrt(p - 1.0);
}

namespace {

void check_index(const FieldContext& ctx, TimeFreqIndex idx) {
  if (idx.l >= ctx.p() || idx.j >= ctx.p()) {
    throw std::invalid_argument("time-frequency index (" + std::to_string(idx.l) + ", " +
                                std::to_string(idx.j) + ") out of range for p = " +
                                std::to_string(ctx.p()));
  }
}

}  // namespace

void add_gabor_vector(const FieldContext& ctx, TimeFreqIndex idx, NormConvention conv,
                      Complex weight, std::span<Complex> out) {
  check_index(ctx, idx);
  const std::size_t p = ctx.p();
  if (out.size() != p) throw std::invalid_argument("add_gabor_vector: output length != p");
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  const Complex w = weight * column_scale(ctx, conv);
  std::size_t shifted = (p - idx.l) % p;  // k - l
  std::size_t phase = 0;                  // k * j mod p
  for (std::size_t k = 0; k < p; ++k) {
    if (chi[shifted] != 0) out[k] += (chi[shifted] > 0 ? w : -w) * roots[phase];
    if (++shifted == p) shifted = 0;
    phase += idx.j;
    if (phase >= p) phase -= p;
  }
}

GaborVector gabor_vector(const FieldContext& ctx, TimeFreqIndex idx, NormConvention conv) {
  GaborVector u(ctx.p(), Complex(0.0, 0.0));
  add_gabor_vector(ctx, idx, conv, Complex(1.0, 0.0), u);
  return u;
}

Complex inner_product(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("inner_product: length mismatch (" + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()) + ")");
  }
  CompensatedSum<Complex> acc;
  for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * std::conj(v[k]);
  return acc.value();
}

// <u_a, u_b> = c^2 sum_k chi[k - la] chi[k - lb] w^{-k (ja - jb)}; substituting
// k -> k + la gives c^2 w^{-la (ja - jb)} sum_k chi[k] chi[k - (lb - la)] w^{-k (ja - jb)}.
Complex gabor_inner_product(const FieldContext& ctx, TimeFreqIndex a, TimeFreqIndex b,
                            NormConvention conv) {
  check_index(ctx, a);
  check_index(ctx, b);
  const std::int64_t p = static_cast<std::int64_t>(ctx.p());
  const std::size_t dl = ctx.reduce(static_cast<std::int64_t>(b.l) - a.l);
  const std::size_t dj = ctx.reduce(static_cast<std::int64_t>(a.j) - b.j);
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  CompensatedSum<Complex> acc;
  std::size_t shifted = (ctx.p() - dl) % ctx.p();
  std::size_t phase = 0;
  for (std::int64_t k = 0; k < p; ++k) {
    const int prod = chi[k] * chi[shifted];
    if (prod != 0) acc += prod > 0 ? roots[phase] : -roots[phase];
    if (++shifted == ctx.p()) shifted = 0;
    phase += dj;
    if (phase >= ctx.p()) phase -= ctx.p();
  }
  const double c = column_scale(ctx, conv);
  return c * c * ctx.root_at(static_cast<std::int64_t>(a.l) * static_cast<std::int64_t>(dj)) *
         acc.value();
}

double difference_class_magnitude(const FieldContext& ctx, std::uint64_t dl, std::uint64_t dj,
                                  NormConvention conv) {
  return std::abs(gabor_inner_product(
      ctx, TimeFreqIndex{0, static_cast<std::uint32_t>(dj % ctx.p())},
      TimeFreqIndex{static_cast<std::uint32_t>(dl % ctx.p()), 0}, conv));
}

double coherence(const FieldContext& ctx, NormConvention conv, CoherenceMode mode,
                 unsigned workers, std::uint64_t brute_limit) {
  const std::size_t p = ctx.p();
  if (mode == CoherenceMode::Brute) {
    if (p > brute_limit) {
      throw std::length_error("coherence: brute mode refused for p = " + std::to_string(p) +
                              " (limit " + std::to_string(brute_limit) + ")");
    }
    std::vector<GaborVector> columns;
    columns.reserve(p * p);
    for (std::uint64_t f = 0; f < p * p; ++f) {
      columns.push_back(gabor_vector(ctx, TimeFreqIndex::from_flat(f, p), conv));
    }
    std::vector<double> row_max(columns.size(), 0.0);
    parallel_for(columns.size(), workers, [&](std::size_t a) {
      double best = 0.0;
      for (std::size_t b = a + 1; b < columns.size(); ++b) {
        best = std::max(best, std::abs(inner_product(columns[a], columns[b])));
      }
      row_max[a] = best;
    });
    return *std::max_element(row_max.begin(), row_max.end());
  }

  // One pass per time-difference dl; all modulations dj share the product
  // sequence chi[k] chi[k - dl].
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  const double c2 = column_scale(ctx, conv) * column_scale(ctx, conv);
  std::vector<double> class_max(p, 0.0);
  parallel_for(p, workers, [&](std::size_t dl) {
    std::vector<std::int8_t> prod(p);
    for (std::size_t k = 0; k < p; ++k) prod[k] = static_cast<std::int8_t>(chi[k] * chi[(k + p - dl) % p]);
    double best = 0.0;
    for (std::size_t dj = (dl == 0 ? 1 : 0); dj < p; ++dj) {
      CompensatedSum<Complex> acc;
      std::size_t phase = 0;
      for (std::size_t k = 0; k < p; ++k) {
        if (prod[k] != 0) acc += prod[k] > 0 ? roots[phase] : -roots[phase];
        phase += dj;
        if (phase >= p) phase -= p;
      }
      best = std::max(best, std::abs(acc.value()));
    }
    class_max[dl] = c2 * best;
  });
  return *std::max_element(class_max.begin(), class_max.end());
}

HermitianMatrix gram_submatrix(const FieldContext& ctx, std::span<const TimeFreqIndex> support,
                               NormConvention conv, std::size_t cap) {
  if (support.size() > cap) {
    throw std::length_error("gram_submatrix: support size " + std::to_string(support.size()) +
                            " exceeds cap " + std::to_string(cap));
  }
  std::set<TimeFreqIndex> seen;
  for (const auto& idx : support) {
    check_index(ctx, idx);
    if (!seen.insert(idx).second) {
      throw std::invalid_argument("gram_submatrix: duplicate index (" + std::to_string(idx.l) +
                                  ", " + std::to_string(idx.j) + ")");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(support.size());
  std::vector<GaborVector> columns;
  columns.reserve(support.size());
  for (const auto& idx : support) columns.push_back(gabor_vector(ctx, idx, conv));
  HermitianMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    g(a, a) = Complex(std::real(inner_product(columns[a], columns[a])), 0.0);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      g(a, b) = inner_product(columns[a], columns[b]);
      g(b, a) = std::conj(g(a, b));
    }
  }
  return g;
}

}  // namespace lcs
