#include "legendre_cs/theorem_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "legendre_cs/summation.hpp"

namespace lcs {

namespace {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

std::int64_t floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

bool is_odd(std::int64_t v) { return (v % 2) != 0; }

// |sin(pi L r / p) / sin(pi r / p)| for 0 <= r < p, both angles reduced
// exactly in integers before the sine is taken.
double kernel_mag(std::uint64_t p, std::uint64_t length, std::uint64_t r) {
  if (r == 0) return static_cast<double>(length);
  std::uint64_t num = static_cast<std::uint64_t>((static_cast<u128>(length) * r) % p);
  num = std::min(num, p - num);
  const std::uint64_t den = std::min(r, p - r);
  const double pd = static_cast<double>(p);
  return std::sin(std::numbers::pi * static_cast<double>(num) / pd) /
         std::sin(std::numbers::pi * static_cast<double>(den) / pd);
}

std::uint64_t reduce(std::int64_t s, std::uint64_t p) {
  const std::int64_t pp = static_cast<std::int64_t>(p);
  std::int64_t r = s % pp;
  return static_cast<std::uint64_t>(r < 0 ? r + pp : r);
}

// Sliding sums of chi over cyclic windows of fixed length.
class ChiWindow {
 public:
  ChiWindow(const FieldContext& ctx, std::uint64_t length) : p_(ctx.p()), length_(length), prefix_(ctx.p() + 1, 0) {
    const auto chi = ctx.chi();
    for (std::size_t k = 0; k < p_; ++k) prefix_[k + 1] = prefix_[k] + chi[k];
  }

  /// sum_{t=0}^{length-1} chi[x + t], x any integer.
  std::int64_t at(std::int64_t x) const {
    const std::uint64_t start = reduce(x, p_);
    const std::uint64_t end = start + length_;
    if (end <= p_) return prefix_[end] - prefix_[start];
    return (prefix_[p_] - prefix_[start]) + prefix_[end - p_];
  }

 private:
  std::uint64_t p_;
  std::uint64_t length_;
  std::vector<std::int64_t> prefix_;
};

void require_blocks(const ThetaParams& params, ConsecutiveBlock b1, ConsecutiveBlock b2) {
  if (b1.length != params.m1len || b2.length != params.m2len) {
    throw std::invalid_argument("block lengths must equal m1len and m2len");
  }
}

}  // namespace

std::uint64_t isqrt(std::uint64_t m) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r;
}

std::int64_t centered(std::int64_t s, std::uint64_t p) {
  const std::uint64_t r = reduce(s, p);
  return r <= (p - 1) / 2 ? static_cast<std::int64_t>(r)
                          : static_cast<std::int64_t>(r) - static_cast<std::int64_t>(p);
}

ThetaParams ThetaParams::realize(std::uint64_t p, double sigma, double delta, double epsilon) {
  ThetaParams out;
  out.p = p;
  out.sigma = sigma;
  out.delta = delta;
  out.epsilon = epsilon;
  out.alpha = alpha_for(sigma, delta);
  const double pd = static_cast<double>(p);
  out.n = std::llround(std::pow(pd, 0.5 + delta));
  if (p > 0 && out.n % static_cast<std::int64_t>(p) == 0) ++out.n;

  const std::uint64_t root = isqrt(p);
  std::uint64_t m1 = 2 * static_cast<std::uint64_t>(std::llround(std::pow(pd, 0.5 - sigma) / 2.0));
  m1 = std::max<std::uint64_t>(m1, 2);
  if (2 * m1 > root) m1 = std::max<std::uint64_t>(2, (root / 2) & ~std::uint64_t{1});
  std::uint64_t multiplier = (root / m1) & ~std::uint64_t{1};
  multiplier = std::max<std::uint64_t>(multiplier, 2);
  out.m1len = m1;
  out.m2len = m1 * multiplier;
  return out;
}

std::vector<std::string> ThetaParams::violations(bool theorem_mode) const {
  std::vector<std::string> out;
  if (p < 3 || !is_prime(p)) {
    out.push_back("p = " + std::to_string(p) + " is not an odd prime");
    return out;
  }
  if (n % static_cast<std::int64_t>(p) == 0) out.push_back("n must be nonzero mod p");
  if (m1len < 1 || m1len > p) out.push_back("m1len must lie in [1, p]");
  if (m2len < 1 || m2len > p) out.push_back("m2len must lie in [1, p]");
  if (!theorem_mode) return out;

  const double pd = static_cast<double>(p);
  if (!(delta > 0.0 && delta < 0.5)) out.push_back("delta must lie in (0, 1/2)");
  if (!(sigma >= 0.0 && sigma < 0.5)) out.push_back("sigma must lie in [0, 1/2)");
  if (!(delta > sigma)) out.push_back("delta must exceed sigma");
  if (!(epsilon > 0.0)) out.push_back("epsilon must be positive");
  if (std::abs(alpha - alpha_for(sigma, delta)) > 1e-12) out.push_back("alpha must equal sigma + (delta - sigma)/2");
  const double n_target = std::pow(pd, 0.5 + delta);
  const double nd = static_cast<double>(n);
  if (!(nd >= n_target / 2.0 && nd <= 2.0 * n_target)) out.push_back("n must lie within a factor 2 of p^{1/2+delta}");
  // The evenness hypotheses force m1len <= floor(sqrt p)/2, so the scale is
  // checked against the attainable target.
  const std::uint64_t root = isqrt(p);
  const double m1_target = std::min(std::pow(pd, 0.5 - sigma), static_cast<double>(root) / 2.0);
  const double m1d = static_cast<double>(m1len);
  if (!(m1d >= m1_target / 2.0 && m1d <= 2.0 * m1_target)) {
    out.push_back("m1len must lie within a factor 2 of p^{1/2-sigma}");
  }
  if (!(m1len <= m2len && m2len <= root)) out.push_back("need m1len <= m2len <= floor(sqrt p)");
  if (m1len % 2 != 0) out.push_back("m1len must be even");
  if (m1len == 0 || m2len % m1len != 0 || (m2len / m1len) % 2 != 0) {
    out.push_back("m2len / m1len must be an even integer");
  }
  return out;
}

void ThetaParams::validate(bool theorem_mode) const {
  const auto errors = violations(theorem_mode);
  if (errors.empty()) return;
  std::ostringstream msg;
  msg << "invalid ThetaParams:";
  for (const auto& e : errors) msg << ' ' << e << ';';
  throw std::invalid_argument(msg.str());
}

double dirichlet_kernel_mag(std::uint64_t p, ConsecutiveBlock block, std::int64_t tshift) {
  if (p < 3) throw std::invalid_argument("dirichlet_kernel_mag: p must be at least 3");
  return kernel_mag(p, block.length, reduce(tshift, p));
}

double sine_sum_exact(const ThetaParams& params) {
  params.validate(false);
  const std::uint64_t p = params.p;
  const std::uint64_t n = reduce(params.n, p);
  const std::uint64_t excluded = (p - n) % p;
  CompensatedSum<double> acc;
  std::uint64_t shifted = (1 + n) % p;
  for (std::uint64_t s = 1; s < p; ++s) {
    if (s != excluded) acc += kernel_mag(p, params.m1len, s) * kernel_mag(p, params.m2len, shifted);
    if (++shifted == p) shifted = 0;
  }
  return acc.value();
}

double trivial_bound(const ThetaParams& params) {
  return static_cast<double>(params.p) *
         std::sqrt(static_cast<double>(params.m1len) * static_cast<double>(params.m2len));
}

// A = sum_k chi[k] w^{kn} sum_{m2} w^{-m2 n} W(k - m2), W(y) = sum_{m1} chi[y + m1],
// w = exp(2 pi i / p); roots[x] = w^{-x}.
Complex gabor_triple_sum(const FieldContext& ctx, const ThetaParams& params,
                         ConsecutiveBlock block1, ConsecutiveBlock block2) {
  params.validate(false);
  if (params.p != ctx.p()) throw std::invalid_argument("gabor_triple_sum: context prime differs from params");
  require_blocks(params, block1, block2);
  const std::uint64_t p = ctx.p();
  const std::int64_t n = static_cast<std::int64_t>(reduce(params.n, p));
  const auto chi = ctx.chi();
  const ChiWindow window(ctx, block1.length);

  std::vector<std::int64_t> m2_values(block2.length);
  std::vector<Complex> m2_phase(block2.length);
  for (std::uint64_t t = 0; t < block2.length; ++t) {
    const std::int64_t m2 = static_cast<std::int64_t>((block2.start + t) % p);
    m2_values[t] = m2;
    m2_phase[t] = ctx.root_at(m2 * n);
  }
  const std::int64_t start1 = static_cast<std::int64_t>(block1.start);
  CompensatedSum<Complex> total;
  for (std::uint64_t k = 1; k < p; ++k) {
    CompensatedSum<Complex> inner;
    for (std::size_t t = 0; t < m2_values.size(); ++t) {
      const std::int64_t w = window.at(static_cast<std::int64_t>(k) - m2_values[t] + start1);
      if (w != 0) inner += static_cast<double>(w) * m2_phase[t];
    }
    total += static_cast<double>(chi[k]) * std::conj(ctx.root_at(static_cast<std::int64_t>(k) * n)) * inner.value();
  }
  return total.value();
}

FixedKSum fixed_k_double_sum(const FieldContext& ctx, const ThetaParams& params, std::uint64_t k,
                             ConsecutiveBlock block1, ConsecutiveBlock block2) {
  params.validate(false);
  if (params.p != ctx.p()) throw std::invalid_argument("fixed_k_double_sum: context prime differs from params");
  require_blocks(params, block1, block2);
  const std::uint64_t p = ctx.p();
  const std::int64_t n = static_cast<std::int64_t>(reduce(params.n, p));
  const ChiWindow window(ctx, block1.length);
  CompensatedSum<Complex> acc;
  for (std::uint64_t t = 0; t < block2.length; ++t) {
    const std::int64_t m2 = static_cast<std::int64_t>((block2.start + t) % p);
    const std::int64_t w = window.at(static_cast<std::int64_t>(k) - m2 + static_cast<std::int64_t>(block1.start));
    if (w != 0) acc += static_cast<double>(w) * std::conj(ctx.root_at(m2 * n));
  }
  return {acc.value(), static_cast<double>(params.m1len) * static_cast<double>(params.m2len)};
}

PiecewiseBound::PiecewiseBound(const ThetaParams& params, double c)
    : p_(params.p),
      n_(params.n),
      m1_(static_cast<std::int64_t>(params.m1len)),
      m2_(static_cast<std::int64_t>(params.m2len)),
      c_(c) {}

double PiecewiseBound::dist_to_int(std::int64_t a, std::uint64_t p) {
  const std::uint64_t r = reduce(a, p);
  return static_cast<double>(std::min(r, p - r)) / static_cast<double>(p);
}

double PiecewiseBound::p1u(std::int64_t s) const {
  return c_ * dist_to_int(static_cast<std::int64_t>(reduce(s, p_)) * m1_, p_);
}
double PiecewiseBound::p1l(std::int64_t s) const { return dist_to_int(s, p_); }
double PiecewiseBound::p2u(std::int64_t s) const {
  return c_ * dist_to_int(static_cast<std::int64_t>(reduce(s + n_, p_)) * m2_, p_);
}
double PiecewiseBound::p2l(std::int64_t s) const { return dist_to_int(s + n_, p_); }

double PiecewiseBound::ratio(std::int64_t s) const {
  return (p1u(s) * p2u(s)) / (p1l(s) * p2l(s));
}

double piecewise_bound_sum(const ThetaParams& params, double c) {
  params.validate(false);
  if (params.m1len < 2 || params.m2len < 2) {
    throw std::invalid_argument("piecewise_bound_sum: m1len and m2len must be at least 2");
  }
  const PiecewiseBound bound(params, c);
  const std::uint64_t excluded = (params.p - reduce(params.n, params.p)) % params.p;
  CompensatedSum<double> acc;
  for (std::uint64_t s = 1; s < params.p; ++s) {
    if (s != excluded) acc += bound.ratio(static_cast<std::int64_t>(s));
  }
  return acc.value();
}

IntervalGrid::IntervalGrid(const ThetaParams& params)
    : p_(static_cast<std::int64_t>(params.p)),
      n_(params.n),
      m1_(static_cast<std::int64_t>(params.m1len)),
      m2_(static_cast<std::int64_t>(params.m2len)) {
  if (m1_ < 1 || m2_ < 1 || p_ < 3) throw std::invalid_argument("IntervalGrid: invalid parameters");
}

RealInterval IntervalGrid::x_interval(std::int64_t i) const {
  const double step = static_cast<double>(p_) / static_cast<double>(m1_);
  return {step * static_cast<double>(i), step * static_cast<double>(i + 1)};
}

RealInterval IntervalGrid::y_interval(std::int64_t j) const { return {ytilde(j), ytilde(j + 1)}; }

double IntervalGrid::ytilde(std::int64_t j) const {
  return static_cast<double>(p_) * static_cast<double>(j) / static_cast<double>(m2_) - static_cast<double>(n_);
}

double IntervalGrid::t() const { return static_cast<double>(n_) * static_cast<double>(m2_) / static_cast<double>(p_); }

// ytilde(j) >= p i / m1  <=>  p m1 j >= p i m2 + n m1 m2.
std::vector<std::int64_t> IntervalGrid::j_set(std::int64_t i) const {
  const i128 offset = static_cast<i128>(n_) * m1_ * m2_;
  const i128 denom = static_cast<i128>(p_) * m1_;
  const std::int64_t lo = ceil_div(static_cast<i128>(p_) * i * m2_ + offset, denom);
  const std::int64_t hi = ceil_div(static_cast<i128>(p_) * (i + 1) * m2_ + offset, denom) - 1;
  std::vector<std::int64_t> out;
  for (std::int64_t j = lo; j <= hi; ++j) out.push_back(j);
  return out;
}

bool IntervalGrid::contained(std::int64_t i, std::int64_t j) const {
  const i128 offset = static_cast<i128>(n_) * m1_ * m2_;
  const i128 pm1 = static_cast<i128>(p_) * m1_;
  return pm1 * j >= static_cast<i128>(p_) * i * m2_ + offset &&
         pm1 * (j + 1) <= static_cast<i128>(p_) * (i + 1) * m2_ + offset;
}

std::int64_t IntervalGrid::x_index(std::int64_t s) const { return floor_div(static_cast<i128>(m1_) * s, p_); }

std::int64_t IntervalGrid::y_index(std::int64_t s) const {
  return floor_div(static_cast<i128>(m2_) * (s + n_), p_);
}

std::int64_t IntervalGrid::i_min() const { return x_index(-(p_ - 1) / 2); }
std::int64_t IntervalGrid::i_max() const { return x_index((p_ - 1) / 2); }

double main_term_residual(const ThetaParams& params, std::int64_t i, std::int64_t j) {
  if (j == 0) throw std::invalid_argument("main_term_residual: j must be nonzero");
  const std::int64_t p = static_cast<std::int64_t>(params.p);
  const std::int64_t n = params.n;
  const std::int64_t m1 = static_cast<std::int64_t>(params.m1len);
  const std::int64_t m2 = static_cast<std::int64_t>(params.m2len);
  const i128 ytilde_num = static_cast<i128>(p) * j - static_cast<i128>(n) * m2;  // ytilde_j * m2
  if (ytilde_num == 0) throw std::invalid_argument("main_term_residual: ytilde_j vanishes");

  const double pd = static_cast<double>(p);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double scale = 4.0 * pd * pd / pi2;
  const std::int64_t s_lo = ceil_div(ytilde_num, m2);
  const std::int64_t s_hi = ceil_div(ytilde_num + p, m2) - 1;
  CompensatedSum<double> acc;
  for (std::int64_t s = s_lo; s <= s_hi; ++s) {
    if (s == 0 || s + n == 0) continue;
    const double x = static_cast<double>(m1) * static_cast<double>(s) / pd - static_cast<double>(i);
    const double y = static_cast<double>(m2) * static_cast<double>(s + n) / pd - static_cast<double>(j);
    acc += scale * x * y / (static_cast<double>(s) * static_cast<double>(s + n));
  }
  const double yt = static_cast<double>(ytilde_num) / static_cast<double>(m2);
  const double id = static_cast<double>(i);
  const double jd = static_cast<double>(j);
  // The middle term carries 1/pi^2 like its neighbours; it comes from splitting -2 p^2 i / (pi^2 ytilde j).
  const double main = -2.0 * pd * pd * pd * id / (pi2 * static_cast<double>(m2) * yt * yt) +
                      2.0 * static_cast<double>(n) * pd * pd * id / (pi2 * yt * yt * jd) +
                      2.0 * pd * static_cast<double>(m1) / (pi2 * jd);
  return acc.value() - main;
}

SumDecomposition sum_split_decompose(const ThetaParams& params, double bound_constant) {
  params.validate(true);
  if (!(params.epsilon > 0.0 && params.epsilon < params.delta - params.sigma)) {
    throw std::invalid_argument("sum_split_decompose: epsilon must lie in (0, delta - sigma)");
  }
  const std::int64_t p = static_cast<std::int64_t>(params.p);
  const std::int64_t n = params.n;
  const double pd = static_cast<double>(p);
  const double m1 = static_cast<double>(params.m1len);
  const double m2 = static_cast<double>(params.m2len);
  const double scale = 4.0 * pd * pd / (std::numbers::pi * std::numbers::pi);
  const double cutoff = std::pow(pd, params.epsilon);
  const IntervalGrid grid(params);
  const PiecewiseBound bound(params, bound_constant);

  SumDecomposition out;
  out.bound_constant = bound_constant;
  CompensatedSum<double> e1, s_main, e2, e3, total;
  for (std::int64_t s = -(p - 1) / 2; s <= (p - 1) / 2; ++s) {
    if (s == 0 || reduce(s + n, params.p) == 0) continue;
    const double ratio = bound.ratio(s);
    total += ratio;
    const std::int64_t i = grid.x_index(s);
    if (static_cast<double>(std::llabs(i)) < cutoff) {
      e1 += ratio;
      out.e1_indices.push_back(s);
      continue;
    }
    const std::int64_t j = grid.y_index(s);
    const double sd = static_cast<double>(s);
    const double denom = sd * static_cast<double>(s + n);
    const double x = m1 * sd / pd - static_cast<double>(i);
    const double y = m2 * static_cast<double>(s + n) / pd - static_cast<double>(j);
    const double sign_ij = is_odd(i + j) ? -1.0 : 1.0;
    s_main += sign_ij * scale * x * y / denom;
    out.main_indices.push_back(s);
    if (is_odd(j)) {
      e2 += (is_odd(i) ? -1.0 : 1.0) * scale * x / denom;
      out.e2_indices.push_back(s);
      if (!is_odd(i)) {
        e3 += scale / denom;
        out.e3_indices.push_back(s);
      }
    }
  }
  out.e1 = e1.value();
  out.s_main = s_main.value();
  out.e2 = e2.value();
  out.e3 = e3.value();
  out.total_bound = total.value();
  out.discrepancy = out.total_bound - (out.e1 + out.s_main + out.e2 + out.e3);

  CompensatedSum<double> abs_sum;
  for (std::int64_t i = grid.i_min(); i <= grid.i_max(); ++i) {
    if (static_cast<double>(std::llabs(i)) < cutoff) continue;
    for (std::int64_t j : grid.j_set(i)) {
      if (j == 0 || static_cast<i128>(p) * j == static_cast<i128>(n) * params.m2len) continue;
      const double value = main_term_residual(params, i, j);
      out.residuals.push_back({i, j, value});
      abs_sum += std::abs(value);
    }
  }
  out.residual_abs_sum = abs_sum.value();
  return out;
}

SingularSums singular_region_sums(const ThetaParams& params, std::int64_t k) {
  params.validate(true);
  if (k < 1) throw std::invalid_argument("singular_region_sums: k must be positive");
  const std::uint64_t p = params.p;
  const std::int64_t half = static_cast<std::int64_t>((p - 1) / 2);
  const std::uint64_t n = reduce(params.n, p);
  auto product = [&](std::uint64_t s) {
    return kernel_mag(p, params.m1len, s) * kernel_mag(p, params.m2len, (s + n) % p);
  };

  SingularSums out;
  const double pd = static_cast<double>(p);
  const std::int64_t zero_radius = std::min<std::int64_t>(
      half, static_cast<std::int64_t>(std::floor(std::pow(pd, 0.5 + params.epsilon + params.sigma))));
  CompensatedSum<double> near_zero;
  for (std::int64_t s = -zero_radius; s <= zero_radius; ++s) {
    const std::uint64_t r = reduce(s, p);
    if (r == 0 || (r + n) % p == 0) continue;
    near_zero += product(r);
  }
  out.near_zero = near_zero.value();

  const std::int64_t neg_radius = std::min<std::int64_t>(
      half, floor_div(static_cast<i128>(k) * static_cast<std::int64_t>(p), static_cast<std::int64_t>(params.m2len)));
  CompensatedSum<double> near_neg;
  for (std::int64_t v = -neg_radius; v <= neg_radius; ++v) {
    if (v == 0) continue;
    const std::uint64_t r = reduce(v - static_cast<std::int64_t>(n), p);  // s with s + n = v
    if (r == 0) continue;
    near_neg += product(r);
  }
  out.near_neg_n = near_neg.value();
  return out;
}

ScalingFit scaling_fit(std::vector<std::pair<double, double>> points) {
  if (points.size() < 5) throw std::invalid_argument("scaling_fit: need at least 5 points");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
      throw std::invalid_argument("scaling_fit: p and values must be positive");
    }
    if (i > 0 && points[i].first == points[i - 1].first) {
      throw std::invalid_argument("scaling_fit: duplicate p");
    }
  }
  const double count = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [p, v] : points) {
    mx += std::log(p);
    my += std::log(v);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [p, v] : points) {
    const double dx = std::log(p) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.log_k = my - fit.exponent * mx;
  double sse = 0.0;
  for (const auto& [p, v] : points) {
    const double resid = std::log(v) - (fit.log_k + fit.exponent * std::log(p));
    sse += resid * resid;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.points = std::move(points);
  return fit;
}

std::vector<std::uint64_t> log_spaced_primes(std::uint64_t lo, std::uint64_t hi, std::size_t count) {
  if (lo < 3 || hi < lo || count == 0) throw std::invalid_argument("log_spaced_primes: invalid range");
  std::vector<std::uint64_t> out;
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (std::size_t t = 0; t < count; ++t) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(count - 1);
    std::uint64_t q = next_prime(static_cast<std::uint64_t>(std::llround(static_cast<double>(lo) * std::pow(ratio, frac))));
    if (!out.empty() && q <= out.back()) q = next_prime(out.back() + 1);
    if (q > hi) {
      // fall back to the largest prime <= hi not yet taken
      q = hi;
      while (q > lo && !is_prime(q)) --q;
      if (!is_prime(q) || (!out.empty() && q <= out.back())) break;
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace lcs
