#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lcs {

/// Default master seed used whenever a caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED0F1E6E7D5EEDULL;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: task seeds depend only on (master, stream,
/// counter), never on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t counter) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + counter);
}

/// Thin wrapper over std::mt19937_64 with platform-stable range mapping
/// (the std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// `count` distinct values from [0, population), in draw order (Floyd).
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population,
                                                        std::size_t count);

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t population,
                                                                  std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  // Partial Fisher-Yates over a lazily materialized permutation.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> swaps;
  auto lookup = [&swaps](std::uint64_t i) {
    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
      if (it->first == i) return it->second;
    }
    return i;
  };
  for (std::size_t t = 0; t < count; ++t) {
    const std::uint64_t r = t + below(population - t);
    const std::uint64_t vr = lookup(r);
    const std::uint64_t vt = lookup(t);
    swaps.emplace_back(r, vt);
    swaps.emplace_back(t, vr);
    out.push_back(vr);
  }
  return out;
}

}  // namespace lcs
