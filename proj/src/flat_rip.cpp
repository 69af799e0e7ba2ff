#include "legendre_cs/flat_rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "legendre_cs/parallel.hpp"
#include "legendre_cs/summation.hpp"

namespace lcs {

namespace {

constexpr std::uint64_t kFlatRipStream = 0xF1A7;
constexpr std::uint64_t kRipStream = 0x5A3B;

void rebuild(const std::vector<TimeFreqIndex>& pairs,
             std::map<std::uint32_t, std::vector<std::uint32_t>>& fibers,
             std::vector<std::uint32_t>& projection) {
  fibers.clear();
  projection.clear();
  for (const auto& idx : pairs) fibers[idx.j].push_back(idx.l);
  for (auto& [j, ls] : fibers) {
    std::sort(ls.begin(), ls.end());
    projection.push_back(j);
  }
}

double report_coherence(const FieldContext& ctx, NormConvention conv, unsigned workers) {
  if (ctx.p() > kCoherenceReportLimit) return std::numeric_limits<double>::quiet_NaN();
  return coherence(ctx, conv, CoherenceMode::ShiftClass, workers);
}

}  // namespace

OmegaSet::OmegaSet(std::vector<TimeFreqIndex> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  rebuild(pairs_, fibers_, projection_);
}

bool OmegaSet::contains(TimeFreqIndex idx) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), idx);
}

bool OmegaSet::disjoint_from(const OmegaSet& other) const {
  auto a = pairs_.begin();
  auto b = other.pairs_.begin();
  while (a != pairs_.end() && b != other.pairs_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

bool OmegaSet::within_sqrt_p(std::uint64_t p) const {
  return static_cast<double>(pairs_.size()) <= std::sqrt(static_cast<double>(p));
}

bool OmegaSet::consistent() const {
  std::map<std::uint32_t, std::vector<std::uint32_t>> fibers;
  std::vector<std::uint32_t> projection;
  rebuild(pairs_, fibers, projection);
  return fibers == fibers_ && projection == projection_;
}

namespace {

void require_disjoint(const OmegaSet& a, const OmegaSet& b, const char* who) {
  if (!a.disjoint_from(b)) throw std::invalid_argument(std::string(who) + ": index sets are not disjoint");
}

void require_in_range(const FieldContext& ctx, const OmegaSet& omega) {
  for (const auto& idx : omega.pairs()) {
    if (idx.l >= ctx.p() || idx.j >= ctx.p()) {
      throw std::invalid_argument("index set contains an index outside Z/pZ x Z/pZ");
    }
  }
}

}  // namespace

Complex pair_sum_inner_product_direct(const FieldContext& ctx, const OmegaSet& omega1,
                                      const OmegaSet& omega2, NormConvention conv) {
  require_disjoint(omega1, omega2, "pair_sum_inner_product_direct");
  if (omega1.empty() || omega2.empty()) return {0.0, 0.0};
  std::vector<Complex> sum1(ctx.p()), sum2(ctx.p());
  for (const auto& idx : omega1.pairs()) add_gabor_vector(ctx, idx, conv, 1.0, sum1);
  for (const auto& idx : omega2.pairs()) add_gabor_vector(ctx, idx, conv, 1.0, sum2);
  return inner_product(sum1, sum2);
}

// Expanding chi[k - m1] through its Fourier transform introduces 1/G (G the
// Gauss sum); the remaining sum over k returns G chi[s + n]. The two Gauss
// constants cancel, so no unimodular factor survives in the complex value.
Complex pair_sum_inner_product_spectral(const FieldContext& ctx, const OmegaSet& omega1,
                                        const OmegaSet& omega2, NormConvention conv) {
  require_disjoint(omega1, omega2, "pair_sum_inner_product_spectral");
  require_in_range(ctx, omega1);
  require_in_range(ctx, omega2);
  if (omega1.empty() || omega2.empty()) return {0.0, 0.0};
  const std::size_t p = ctx.p();
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();

  // kernels[t] = D_M(t) = sum_{m in M} conj(roots[m t]).
  auto kernel_table = [&](const std::vector<std::uint32_t>& fiber) {
    std::vector<Complex> table(p);
    for (std::size_t t = 0; t < p; ++t) {
      CompensatedSum<Complex> acc;
      for (std::uint32_t m : fiber) acc += std::conj(roots[(static_cast<std::uint64_t>(m) * t) % p]);
      table[t] = acc.value();
    }
    return table;
  };
  std::vector<std::vector<Complex>> kernels1, kernels2;
  for (const auto& [j, fiber] : omega1.fibers()) kernels1.push_back(kernel_table(fiber));
  for (const auto& [j, fiber] : omega2.fibers()) kernels2.push_back(kernel_table(fiber));

  CompensatedSum<Complex> total;
  const auto& proj1 = omega1.projection();
  const auto& proj2 = omega2.projection();
  for (std::size_t a = 0; a < proj1.size(); ++a) {
    for (std::size_t b = 0; b < proj2.size(); ++b) {
      const std::size_t n = ctx.reduce(static_cast<std::int64_t>(proj1[a]) - proj2[b]);
      const auto& d1 = kernels1[a];
      const auto& d2 = kernels2[b];
      CompensatedSum<Complex> acc;
      std::size_t shifted = n;  // s + n
      for (std::size_t s = 0; s < p; ++s) {
        const int prod = chi[s] * chi[shifted];
        if (prod != 0) {
          const Complex term = d1[s] * std::conj(d2[shifted]);
          acc += prod > 0 ? term : -term;
        }
        if (++shifted == p) shifted = 0;
      }
      total += acc.value();
    }
  }
  const double c = column_scale(ctx, conv);
  return c * c * total.value();
}

ConsecutiveFiberSampler::ConsecutiveFiberSampler(std::uint64_t p, std::size_t k) : p_(p), k_(k) {
  if (k == 0) throw std::invalid_argument("ConsecutiveFiberSampler: k must be positive");
  if (k >= p) throw std::invalid_argument("ConsecutiveFiberSampler: k must be below p");
}

OmegaSet ConsecutiveFiberSampler::draw_set(Rng& rng) const {
  const std::size_t target = 1 + rng.below(k_);
  std::vector<TimeFreqIndex> pairs;
  std::set<std::uint32_t> used_j;
  std::size_t remaining = target;
  while (remaining > 0) {
    std::uint32_t j;
    do {
      j = static_cast<std::uint32_t>(rng.below(p_));
    } while (used_j.count(j) != 0);
    used_j.insert(j);
    const std::size_t length = 1 + rng.below(remaining);
    const std::uint64_t start = rng.below(p_);
    for (std::size_t t = 0; t < length; ++t) {
      pairs.push_back({static_cast<std::uint32_t>((start + t) % p_), j});
    }
    remaining -= length;
  }
  return OmegaSet(std::move(pairs));
}

std::pair<OmegaSet, OmegaSet> ConsecutiveFiberSampler::draw(std::size_t, Rng& rng) const {
  OmegaSet first = draw_set(rng);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    OmegaSet second = draw_set(rng);
    if (first.disjoint_from(second)) return {std::move(first), std::move(second)};
  }
  throw std::runtime_error("ConsecutiveFiberSampler: could not draw a disjoint pair");
}

std::pair<OmegaSet, OmegaSet> SingletonPairSampler::draw(std::size_t trial, Rng&) const {
  const std::uint64_t count = p_ * p_;
  const std::uint64_t t = trial % (count * (count - 1));
  const std::uint64_t a = t / (count - 1);
  std::uint64_t b = t % (count - 1);
  if (b >= a) ++b;
  return {OmegaSet({TimeFreqIndex::from_flat(a, p_)}), OmegaSet({TimeFreqIndex::from_flat(b, p_)})};
}

std::optional<std::size_t> SingletonPairSampler::exhaustive_trials() const {
  const std::uint64_t count = p_ * p_;
  return static_cast<std::size_t>(count * (count - 1));
}

std::vector<FlatRipTrial> flat_rip_trials(const FieldContext& ctx, const PairSampler& sampler,
                                          std::size_t trials, NormConvention conv,
                                          std::uint64_t seed, unsigned workers) {
  std::vector<FlatRipTrial> out(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, kFlatRipStream, t));
    auto [omega1, omega2] = sampler.draw(t, rng);
    out[t] = {omega1.size(), omega2.size(),
              pair_sum_inner_product_direct(ctx, omega1, omega2, conv)};
  });
  return out;
}

RipReport flat_rip_delta(const FieldContext& ctx, std::size_t k, const PairSampler& sampler,
                         std::size_t trials, NormConvention conv, std::uint64_t seed,
                         unsigned workers, bool theorem_mode) {
  if (k == 0) throw std::invalid_argument("flat_rip_delta: k must be positive");
  if (trials == 0) throw std::invalid_argument("flat_rip_delta: trials must be positive");
  if (theorem_mode && static_cast<double>(k) > std::sqrt(static_cast<double>(ctx.p()))) {
    throw std::invalid_argument("flat_rip_delta: k = " + std::to_string(k) +
                                " exceeds sqrt(p) in theorem mode");
  }
  if (sampler.max_set_size() > k) {
    throw std::invalid_argument("flat_rip_delta: sampler produces sets larger than k");
  }
  RipReport report;
  report.order = k;
  report.trials = trials;
  report.convention = conv;
  for (const auto& trial : flat_rip_trials(ctx, sampler, trials, conv, seed, workers)) {
    const double magnitude = std::abs(trial.inner);
    report.delta = std::max(report.delta, magnitude / std::sqrt(static_cast<double>(trial.size1 * trial.size2)));
    report.relaxed_delta = std::max(report.relaxed_delta, magnitude / static_cast<double>(k));
  }
  report.mu = report_coherence(ctx, conv, workers);
  report.coherence_hypothesis_holds = report.mu <= 1.0 / static_cast<double>(k);
  return report;
}

RipOrder rip_order_from_flat(std::size_t k, double delta, std::size_t s) {
  if (k == 0 || s == 0) throw std::invalid_argument("rip_order_from_flat: k and s must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("rip_order_from_flat: delta must be finite and nonnegative");
  }
  RipOrder out;
  out.order = 2 * s * k;
  out.rip_delta = 44.0 * static_cast<double>(s) * delta * std::log(static_cast<double>(k));
  out.asymptotic_regime = k >= 1024;
  return out;
}

std::pair<double, double> hermitian_extreme_eigenvalues(const HermitianMatrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("hermitian_extreme_eigenvalues: matrix not square");
  if (g.rows() == 0) throw std::invalid_argument("hermitian_extreme_eigenvalues: empty matrix");
  if (g.rows() > 256) throw std::length_error("hermitian_extreme_eigenvalues: dimension exceeds 256");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("hermitian_extreme_eigenvalues: matrix is not Hermitian");
  }
  const HermitianMatrix sym = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_extreme_eigenvalues: no convergence");
  const auto& values = solver.eigenvalues();  // ascending
  return {values(0), values(values.size() - 1)};
}

std::vector<TimeFreqIndex> sampled_support(std::uint64_t p, std::size_t s, std::uint64_t seed,
                                           std::size_t trial) {
  Rng rng(derive_seed(seed, kRipStream, trial));
  std::vector<TimeFreqIndex> support;
  support.reserve(s);
  for (std::uint64_t f : rng.sample_without_replacement(p * p, s)) {
    support.push_back(TimeFreqIndex::from_flat(f, p));
  }
  return support;
}

namespace {

double rip_deviation(const FieldContext& ctx, std::span<const TimeFreqIndex> support,
                     NormConvention conv, std::size_t cap) {
  const auto [lo, hi] = hermitian_extreme_eigenvalues(gram_submatrix(ctx, support, conv, cap));
  return std::max(hi - 1.0, 1.0 - lo);
}

}  // namespace

RipReport rip_delta_sampled(const FieldContext& ctx, std::size_t s, std::size_t trials,
                            NormConvention conv, std::uint64_t seed, unsigned workers,
                            std::size_t cap) {
  if (s == 0) throw std::invalid_argument("rip_delta_sampled: S must be positive");
  if (s > cap) throw std::length_error("rip_delta_sampled: S exceeds the Gram cap");
  if (trials == 0) throw std::invalid_argument("rip_delta_sampled: trials must be positive");
  std::vector<double> deviations(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    deviations[t] = rip_deviation(ctx, sampled_support(ctx.p(), s, seed, t), conv, cap);
  });
  RipReport report;
  report.order = s;
  report.trials = trials;
  report.convention = conv;
  report.delta = *std::max_element(deviations.begin(), deviations.end());
  report.mu = report_coherence(ctx, conv, workers);
  return report;
}

RipReport rip_delta_exhaustive(const FieldContext& ctx, std::size_t s, NormConvention conv,
                               std::size_t max_supports) {
  const std::uint64_t n = ctx.p() * ctx.p();
  if (s == 0 || s > n) throw std::invalid_argument("rip_delta_exhaustive: invalid support size");
  double count = 1.0;
  for (std::size_t i = 0; i < s; ++i) count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (count > static_cast<double>(max_supports)) {
    throw std::length_error("rip_delta_exhaustive: too many supports to enumerate");
  }
  std::vector<std::uint64_t> combo(s);
  for (std::size_t i = 0; i < s; ++i) combo[i] = i;
  RipReport report;
  report.order = s;
  report.convention = conv;
  std::vector<TimeFreqIndex> support(s);
  while (true) {
    for (std::size_t i = 0; i < s; ++i) support[i] = TimeFreqIndex::from_flat(combo[i], ctx.p());
    report.delta = std::max(report.delta, rip_deviation(ctx, support, conv, kDefaultGramCap));
    ++report.trials;
    // Advance to the next combination in lexicographic order.
    std::size_t i = s;
    while (i > 0 && combo[i - 1] == n - s + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t r = i; r < s; ++r) combo[r] = combo[r - 1] + 1;
  }
  report.sampled_lower_bound = false;
  report.mu = report_coherence(ctx, conv, 1);
  return report;
}

}  // namespace lcs
