#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "legendre_cs/zpz_core.hpp"

namespace lcs {

/// Residues {start, start + 1, ..., start + length - 1} mod p.
struct ConsecutiveBlock {
  std::uint64_t start = 0;
  std::uint64_t length = 1;
};

/// Scaling parameters of the sine-ratio estimate: modulation n ~ p^{1/2 + delta},
/// block sizes |M1| ~ p^{1/2 - sigma} <= |M2| <= sqrt(p), alpha = sigma + (delta - sigma)/2.
struct ThetaParams {
  std::uint64_t p = 0;
  std::int64_t n = 0;
  double delta = 0.3;
  double sigma = 0.1;
  double epsilon = 0.1;
  double alpha = 0.2;
  std::uint64_t m1len = 1;
  std::uint64_t m2len = 1;

  static double alpha_for(double sigma, double delta) { return sigma + (delta - sigma) / 2.0; }

  /// Concrete parameters for prime p: n is the nearest integer to p^{1/2+delta}
  /// with n != 0 mod p; m1len the nearest even integer to p^{1/2-sigma}, lowered
  /// when needed so that an even multiple fits under floor(sqrt p); m2len is
  /// m1len times the largest even multiplier with m2len <= floor(sqrt p).
  static ThetaParams realize(std::uint64_t p, double sigma, double delta, double epsilon);

  /// Every violated constraint. The basic checks (prime p, n != 0 mod p,
  /// 1 <= lengths <= p) always apply; theorem mode adds the scaling hypotheses.
  std::vector<std::string> violations(bool theorem_mode) const;
  /// Throws std::invalid_argument listing all violations.
  void validate(bool theorem_mode) const;
};

/// floor(sqrt(m)) computed exactly.
std::uint64_t isqrt(std::uint64_t m);

/// |sin(pi L t / p) / sin(pi t / p)|, the modulus of a length-L Dirichlet
/// kernel; equals L when t = 0 mod p. Independent of the block start.
double dirichlet_kernel_mag(std::uint64_t p, ConsecutiveBlock block, std::int64_t tshift);

/// sum over s in 1..p-1, s != -n mod p, of K_{m1}(s) K_{m2}(s + n). O(p).
double sine_sum_exact(const ThetaParams& params);

/// p sqrt(m1len m2len), the Hoelder/Parseval bound on sine_sum_exact.
double trivial_bound(const ThetaParams& params);

/// sum_k sum_{m1 in M1} sum_{m2 in M2} chi[k + m1 - m2] chi[k] e^{2 pi i k n/p} e^{-2 pi i m2 n/p}
/// in O(p (m1len + m2len)) through sliding character windows.
Complex gabor_triple_sum(const FieldContext& ctx, const ThetaParams& params,
                         ConsecutiveBlock block1, ConsecutiveBlock block2);

struct FixedKSum {
  Complex value;
  double trivial_bound = 0.0;  // m1len * m2len
};

/// sum_{m1 in M1} sum_{m2 in M2} chi[k + m1 - m2] e^{2 pi i m2 n / p}.
FixedKSum fixed_k_double_sum(const FieldContext& ctx, const ThetaParams& params, std::uint64_t k,
                             ConsecutiveBlock block1, ConsecutiveBlock block2);

/// Piecewise-linear majorants of the sine ratios:
///   p1u(s) = c ||m1 s / p||, p1l(s) = ||s / p||,
///   p2u(s) = c ||m2 (s + n) / p||, p2l(s) = ||(s + n) / p||,
/// with ||t|| the distance to the nearest integer.
class PiecewiseBound {
 public:
  PiecewiseBound(const ThetaParams& params, double c);

  double p1u(std::int64_t s) const;
  double p1l(std::int64_t s) const;
  double p2u(std::int64_t s) const;
  double p2l(std::int64_t s) const;
  /// p1u p2u / (p1l p2l); s must avoid 0 and -n mod p.
  double ratio(std::int64_t s) const;

  /// ||a / p|| for an integer a.
  static double dist_to_int(std::int64_t a, std::uint64_t p);

 private:
  std::uint64_t p_;
  std::int64_t n_;
  std::int64_t m1_;
  std::int64_t m2_;
  double c_;
};

/// sum over s != 0, -n of p1u p2u / (p1l p2l). Requires m1len, m2len >= 2.
double piecewise_bound_sum(const ThetaParams& params, double c);

struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The x_i / y_j grid: x-interval i = [p i / m1, p (i + 1) / m1],
/// y-interval j = [p j / m2 - n, p (j + 1) / m2 - n].
class IntervalGrid {
 public:
  explicit IntervalGrid(const ThetaParams& params);

  RealInterval x_interval(std::int64_t i) const;
  RealInterval y_interval(std::int64_t j) const;
  double ytilde(std::int64_t j) const;
  /// t = n m2 / p.
  double t() const;

  /// The y-indices assigned to x-interval i: those j whose y-interval starts in
  /// [x_i, x_{i+1}). Every j belongs to exactly one i and
  /// |J(i)| is floor or ceil of m2 / m1.
  std::vector<std::int64_t> j_set(std::int64_t i) const;
  /// y-interval j lies entirely inside x-interval i.
  bool contained(std::int64_t i, std::int64_t j) const;

  /// floor(m1 s / p) and floor(m2 (s + n) / p).
  std::int64_t x_index(std::int64_t s) const;
  std::int64_t y_index(std::int64_t s) const;

  /// x-indices met by the centered representatives -(p-1)/2..(p-1)/2.
  std::int64_t i_min() const;
  std::int64_t i_max() const;

 private:
  std::int64_t p_;
  std::int64_t n_;
  std::int64_t m1_;
  std::int64_t m2_;
};

/// Centered representative of s mod p in [-(p-1)/2, (p-1)/2].
std::int64_t centered(std::int64_t s, std::uint64_t p);

struct ResidualEntry {
  std::int64_t i = 0;
  std::int64_t j = 0;
  double value = 0.0;
};

/// Region values of the decomposition of the piecewise bound sum. Summation
/// runs over centered s; i = floor(m1 s / p), j = floor(m2 (s + n) / p).
struct SumDecomposition {
  double e1 = 0.0;      // bound-function sum over |i| < p^eps
  double s_main = 0.0;  // signed smoothed main term over |i| >= p^eps
  double e2 = 0.0;      // odd-j correction over |i| >= p^eps
  double e3 = 0.0;      // even-i, odd-j correction over |i| >= p^eps
  double total_bound = 0.0;  // sum over all s != 0, -n of p1u p2u / (p1l p2l)
  double discrepancy = 0.0;  // total_bound - (e1 + s_main + e2 + e3)
  double bound_constant = 2.0;

  /// e1_indices and main_indices partition {s : s != 0, -n}; e2_indices is the
  /// odd-j part of main_indices and e3_indices the even-i part of e2_indices.
  std::vector<std::int64_t> e1_indices;
  std::vector<std::int64_t> main_indices;
  std::vector<std::int64_t> e2_indices;
  std::vector<std::int64_t> e3_indices;

  std::vector<ResidualEntry> residuals;
  double residual_abs_sum = 0.0;
};

/// Requires theorem-mode params and 0 < epsilon < delta - sigma.
SumDecomposition sum_split_decompose(const ThetaParams& params, double bound_constant = 2.0);

/// E_y(j): sum over integer s in [ytilde_j, ytilde_{j+1}) of
/// (4p^2/pi^2) (m1 s/p - i)(m2 (s+n)/p - j) / (s (s+n)) minus
/// -2p^3 i/(pi^2 m2 ytilde_j^2) + 2 n p^2 i/(pi^2 ytilde_j^2 j) + 2 p m1/(pi^2 j).
/// Throws for j == 0 or ytilde_j == 0.
double main_term_residual(const ThetaParams& params, std::int64_t i, std::int64_t j);

struct SingularSums {
  double near_zero = 0.0;   // 0 < |s| <= p^{1/2 + eps + sigma}
  double near_neg_n = 0.0;  // 0 < |s + n| <= k p / m2 (2k y-intervals)
};

/// Sine-ratio sum restricted to the neighbourhoods of the singular points.
SingularSums singular_region_sums(const ThetaParams& params, std::int64_t k = 1);

struct ScalingFit {
  std::vector<std::pair<double, double>> points;  // (p, value)
  double exponent = 0.0;
  double log_k = 0.0;
  double r2 = 0.0;
};

/// Least squares of ln(value) against ln(p). Needs >= 5 points with positive
/// values and distinct p.
ScalingFit scaling_fit(std::vector<std::pair<double, double>> points);

/// `count` primes roughly log-spaced in [lo, hi], ascending and distinct.
std::vector<std::uint64_t> log_spaced_primes(std::uint64_t lo, std::uint64_t hi, std::size_t count);

}  // namespace lcs
