#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "legendre_cs/gabor_frame.hpp"
#include "legendre_cs/random.hpp"

namespace lcs {

/// A finite set of time-frequency indices with its fibers
/// Omega(j) = {l : (l, j) in Omega} and projection pi_2(Omega).
class OmegaSet {
 public:
  OmegaSet() = default;
  explicit OmegaSet(std::vector<TimeFreqIndex> pairs);

  const std::vector<TimeFreqIndex>& pairs() const { return pairs_; }
  const std::map<std::uint32_t, std::vector<std::uint32_t>>& fibers() const { return fibers_; }
  const std::vector<std::uint32_t>& projection() const { return projection_; }

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(TimeFreqIndex idx) const;
  bool disjoint_from(const OmegaSet& other) const;
  /// |Omega| <= sqrt(p), the size regime of the flat-RIP estimates.
  bool within_sqrt_p(std::uint64_t p) const;
  /// Fibers and projection agree with a rebuild from pairs().
  bool consistent() const;

 private:
  std::vector<TimeFreqIndex> pairs_;  // sorted, unique
  std::map<std::uint32_t, std::vector<std::uint32_t>> fibers_;
  std::vector<std::uint32_t> projection_;
};

/// <sum_{Omega1} u, sum_{Omega2} u> by materializing both sum vectors.
Complex pair_sum_inner_product_direct(const FieldContext& ctx, const OmegaSet& omega1,
                                      const OmegaSet& omega2, NormConvention conv);

/// The same inner product through the frequency-domain expansion
///   c^2 sum_{n1, n2} sum_{s} chi[s] chi[s + n] D_{Omega1(n1)}(s) conj(D_{Omega2(n2)}(s + n)),
/// n = n1 - n2, D_M(t) = sum_{m in M} exp(2 pi i m t / p). Fibers may be arbitrary sets.
Complex pair_sum_inner_product_spectral(const FieldContext& ctx, const OmegaSet& omega1,
                                        const OmegaSet& omega2, NormConvention conv);

/// Source of disjoint (Omega1, Omega2) pairs for flat-RIP estimation.
class PairSampler {
 public:
  virtual ~PairSampler() = default;
  /// Pair for the given trial. `rng` is seeded per trial by the caller.
  virtual std::pair<OmegaSet, OmegaSet> draw(std::size_t trial, Rng& rng) const = 0;
  /// Number of trials that enumerate the sampler's whole space, if finite.
  virtual std::optional<std::size_t> exhaustive_trials() const { return std::nullopt; }
  /// Largest set size the sampler produces.
  virtual std::size_t max_set_size() const = 0;
};

/// Each set has a uniformly random size in [1, k] made of fibers that are
/// consecutive blocks (random start, random length) at distinct modulations.
/// Omega2 is redrawn until disjoint from Omega1.
class ConsecutiveFiberSampler final : public PairSampler {
 public:
  ConsecutiveFiberSampler(std::uint64_t p, std::size_t k);
  std::pair<OmegaSet, OmegaSet> draw(std::size_t trial, Rng& rng) const override;
  std::size_t max_set_size() const override { return k_; }

 private:
  OmegaSet draw_set(Rng& rng) const;
  std::uint64_t p_;
  std::size_t k_;
};

/// Enumerates every ordered pair of distinct singletons; trial t maps to one pair.
class SingletonPairSampler final : public PairSampler {
 public:
  explicit SingletonPairSampler(std::uint64_t p) : p_(p) {}
  std::pair<OmegaSet, OmegaSet> draw(std::size_t trial, Rng& rng) const override;
  std::optional<std::size_t> exhaustive_trials() const override;
  std::size_t max_set_size() const override { return 1; }

 private:
  std::uint64_t p_;
};

/// Coherence is reported in RipReport only up to this p (shift-class scan is O(p^3)).
inline constexpr std::uint64_t kCoherenceReportLimit = 401;

/// Sampled estimate of a RIP or flat-RIP constant. Every value is a lower
/// bound on the true constant: sampling cannot overshoot the maximum.
struct RipReport {
  std::size_t order = 0;       // S for RIP, k for flat RIP
  double delta = 0.0;          // max |<sum, sum>| / sqrt(|J1||J2|), or the RIP deviation
  double relaxed_delta = 0.0;  // max |<sum, sum>| / k (flat RIP only)
  double mu = 0.0;             // coherence; NaN when p > kCoherenceReportLimit
  std::size_t trials = 0;
  NormConvention convention = NormConvention::UnitNorm;
  bool sampled_lower_bound = true;
  /// mu <= 1/k, the coherence hypothesis of the flat-RIP to RIP transfer.
  bool coherence_hypothesis_holds = false;
};

struct FlatRipTrial {
  std::size_t size1 = 0;
  std::size_t size2 = 0;
  Complex inner;
};

/// Runs `trials` sampler draws (per-trial seeds derived from `seed`) and
/// returns the direct-path inner product of each pair.
std::vector<FlatRipTrial> flat_rip_trials(const FieldContext& ctx, const PairSampler& sampler,
                                          std::size_t trials, NormConvention conv,
                                          std::uint64_t seed, unsigned workers = 1);

/// Throws std::invalid_argument when k > sqrt(p) in theorem mode, or k == 0.
RipReport flat_rip_delta(const FieldContext& ctx, std::size_t k, const PairSampler& sampler,
                         std::size_t trials, NormConvention conv, std::uint64_t seed = kDefaultSeed,
                         unsigned workers = 1, bool theorem_mode = true);

struct RipOrder {
  std::size_t order = 0;   // 2 s k
  double rip_delta = 0.0;  // 44 s delta ln k
  bool asymptotic_regime = false;  // k >= 2^10
};

/// Flat RIP (k, delta) to RIP (2sk, 44 s delta ln k). Natural log.
RipOrder rip_order_from_flat(std::size_t k, double delta, std::size_t s);

/// Extreme eigenvalues of a Hermitian matrix (dimension <= 256).
std::pair<double, double> hermitian_extreme_eigenvalues(const HermitianMatrix& g);

/// max over `trials` uniformly drawn supports T, |T| = S, of
/// max(lambda_max(G_T) - 1, 1 - lambda_min(G_T)). Trial t's support depends
/// only on (seed, t), so more trials never lowers the estimate.
RipReport rip_delta_sampled(const FieldContext& ctx, std::size_t s, std::size_t trials,
                            NormConvention conv, std::uint64_t seed = kDefaultSeed,
                            unsigned workers = 1, std::size_t cap = kDefaultGramCap);

/// Same as rip_delta_sampled over every support of size S. Refused when the
/// number of supports exceeds `max_supports`.
RipReport rip_delta_exhaustive(const FieldContext& ctx, std::size_t s, NormConvention conv,
                               std::size_t max_supports = 1'000'000);

/// Support drawn by rip_delta_sampled for one trial.
std::vector<TimeFreqIndex> sampled_support(std::uint64_t p, std::size_t s, std::uint64_t seed,
                                           std::size_t trial);

}  // namespace lcs
