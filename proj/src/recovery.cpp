#include "legendre_cs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "legendre_cs/parallel.hpp"
#include "legendre_cs/summation.hpp"

namespace lcs {

namespace {

double norm2(std::span<const Complex> v) {
  CompensatedSum<double> acc;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc.value());
}

// Least squares over the given columns through the normal equations.
std::vector<Complex> least_squares(const FieldContext& ctx, std::span<const TimeFreqIndex> support,
                                   std::span<const Complex> b, NormConvention conv, std::size_t cap) {
  // (A^H A)_{ab} = <u_b, u_a>, the transpose of the Gram matrix.
  const HermitianMatrix normal = gram_submatrix(ctx, support, conv, cap).transpose();
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(support.size()));
  for (std::size_t a = 0; a < support.size(); ++a) {
    const GaborVector column = gabor_vector(ctx, support[a], conv);
    rhs(static_cast<Eigen::Index>(a)) = inner_product(b, column);
  }
  const Eigen::VectorXcd x = normal.ldlt().solve(rhs);
  return {x.data(), x.data() + x.size()};
}

std::vector<Complex> residual_of(const FieldContext& ctx, std::span<const TimeFreqIndex> support,
                                 std::span<const Complex> values, std::span<const Complex> b,
                                 NormConvention conv) {
  std::vector<Complex> r(b.begin(), b.end());
  for (std::size_t a = 0; a < support.size(); ++a) add_gabor_vector(ctx, support[a], conv, -values[a], r);
  return r;
}

}  // namespace

void SparseSignal::validate() const {
  if (support.size() != values.size()) throw std::invalid_argument("SparseSignal: support/value size mismatch");
  std::set<TimeFreqIndex> seen;
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (support[a].l >= p || support[a].j >= p) throw std::invalid_argument("SparseSignal: index out of range");
    if (!seen.insert(support[a]).second) throw std::invalid_argument("SparseSignal: duplicate index");
    if (values[a] == Complex(0.0, 0.0)) throw std::invalid_argument("SparseSignal: zero value on support");
  }
}

void score_support(RecoveryResult& result, const SparseSignal& truth) {
  std::vector<TimeFreqIndex> expected = truth.support;
  std::sort(expected.begin(), expected.end());
  std::vector<TimeFreqIndex> got = result.support;
  std::sort(got.begin(), got.end());
  result.exact_support_match = expected == got;
}

std::vector<Complex> measure(const FieldContext& ctx, const SparseSignal& x, NormConvention conv) {
  if (x.p != ctx.p()) throw std::invalid_argument("measure: signal dimension does not match p^2");
  x.validate();
  std::vector<Complex> b(ctx.p());
  for (std::size_t a = 0; a < x.support.size(); ++a) add_gabor_vector(ctx, x.support[a], conv, x.values[a], b);
  return b;
}

std::vector<Complex> frame_adjoint(const FieldContext& ctx, std::span<const Complex> r, NormConvention conv) {
  const std::size_t p = ctx.p();
  if (r.size() != p) throw std::invalid_argument("frame_adjoint: vector length != p");
  const auto chi = ctx.chi();
  const auto roots = ctx.roots();
  const double c = column_scale(ctx, conv);
  std::vector<Complex> out(p * p);
  std::vector<Complex> w(p);
  for (std::size_t l = 0; l < p; ++l) {
    for (std::size_t k = 0; k < p; ++k) w[k] = static_cast<double>(chi[(k + p - l) % p]) * r[k];
    for (std::size_t j = 0; j < p; ++j) {
      Complex acc(0.0, 0.0);
      std::size_t phase = 0;
      for (std::size_t k = 0; k < p; ++k) {
        acc += w[k] * std::conj(roots[phase]);
        phase += j;
        if (phase >= p) phase -= p;
      }
      out[l * p + j] = c * acc;
    }
  }
  return out;
}

std::vector<Complex> frame_apply(const FieldContext& ctx, std::span<const Complex> x, NormConvention conv) {
  const std::size_t p = ctx.p();
  if (x.size() != p * p) throw std::invalid_argument("frame_apply: coefficient length != p^2");
  std::vector<Complex> out(p);
  for (std::size_t f = 0; f < x.size(); ++f) {
    if (x[f] != Complex(0.0, 0.0)) add_gabor_vector(ctx, TimeFreqIndex::from_flat(f, p), conv, x[f], out);
  }
  return out;
}

RecoveryResult omp(const FieldContext& ctx, std::span<const Complex> b, std::size_t k,
                   NormConvention conv, std::size_t cap, double tol) {
  if (conv != NormConvention::UnitNorm) throw std::invalid_argument("omp: requires the UnitNorm convention");
  if (k > cap) throw std::length_error("omp: k exceeds the Gram cap");
  if (b.size() != ctx.p()) throw std::invalid_argument("omp: measurement length != p");
  const std::size_t p = ctx.p();
  const double stop = tol * std::max(1.0, norm2(b));

  RecoveryResult result;
  std::vector<Complex> residual(b.begin(), b.end());
  std::vector<bool> selected(p * p, false);
  result.history.push_back(norm2(residual));
  while (result.support.size() < k && result.history.back() > stop) {
    const std::vector<Complex> corr = frame_adjoint(ctx, residual, conv);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t f = 0; f < corr.size(); ++f) {
      if (selected[f]) continue;
      const double mag = std::abs(corr[f]);
      if (mag > best_mag) {
        best_mag = mag;
        best = f;
      }
    }
    selected[best] = true;
    result.support.push_back(TimeFreqIndex::from_flat(best, p));
    result.values = least_squares(ctx, result.support, b, conv, cap);
    residual = residual_of(ctx, result.support, result.values, b, conv);
    result.history.push_back(norm2(residual));
    ++result.iterations;
  }
  result.residual_norm = result.history.back();

  std::vector<std::size_t> order(result.support.size());
  for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) { return result.support[a] < result.support[b2]; });
  RecoveryResult sorted = result;
  for (std::size_t a = 0; a < order.size(); ++a) {
    sorted.support[a] = result.support[order[a]];
    sorted.values[a] = result.values[order[a]];
  }
  return sorted;
}

double frame_operator_norm(const FieldContext& ctx, NormConvention conv, std::size_t iterations) {
  const std::size_t p = ctx.p();
  std::vector<Complex> v(p);
  for (std::size_t k = 0; k < p; ++k) v[k] = Complex(1.0 + 0.01 * static_cast<double>(k), 0.5);
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
    std::vector<Complex> next = frame_apply(ctx, frame_adjoint(ctx, v, conv), conv);
    estimate = std::real(inner_product(next, v));
    v = std::move(next);
  }
  return estimate;
}

RecoveryResult ista_l1(const FieldContext& ctx, std::span<const Complex> b, double lambda,
                       std::size_t iterations, NormConvention conv, const IstaOptions& options) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ista_l1: lambda must be positive");
  if (b.size() != ctx.p()) throw std::invalid_argument("ista_l1: measurement length != p");
  if (options.step < 0.0) throw std::invalid_argument("ista_l1: step must be positive");
  const std::size_t p = ctx.p();
  const double lipschitz = frame_operator_norm(ctx, conv, options.power_iterations);
  const double max_step = 1.0 / lipschitz;
  double step = options.step == 0.0 ? max_step : options.step;
  if (step > max_step * (1.0 + 1e-9)) throw std::invalid_argument("ista_l1: step exceeds 1 / |A A*|");

  auto objective = [&](std::span<const Complex> x, std::span<const Complex> ax) {
    CompensatedSum<double> fit, l1;
    for (std::size_t k = 0; k < p; ++k) fit += std::norm(ax[k] - b[k]);
    for (const auto& z : x) l1 += std::abs(z);
    return 0.5 * fit.value() + lambda * l1.value();
  };

  RecoveryResult result;
  std::vector<Complex> x(p * p);
  std::vector<Complex> ax(p);
  double previous = objective(x, ax);
  const double threshold = lambda * step;
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<Complex> diff(p);
    for (std::size_t k = 0; k < p; ++k) diff[k] = ax[k] - b[k];
    const std::vector<Complex> grad = frame_adjoint(ctx, diff, conv);
    for (std::size_t f = 0; f < x.size(); ++f) {
      const Complex z = x[f] - step * grad[f];
      const double mag = std::abs(z);
      x[f] = mag > threshold ? z * ((mag - threshold) / mag) : Complex(0.0, 0.0);
    }
    ax = frame_apply(ctx, x, conv);
    const double current = objective(x, ax);
    if (current > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
      throw std::logic_error("ista_l1: objective increased at iteration " + std::to_string(it));
    }
    previous = current;
    result.history.push_back(current);
    ++result.iterations;
  }

  for (std::size_t f = 0; f < x.size(); ++f) {
    if (x[f] != Complex(0.0, 0.0)) {
      result.support.push_back(TimeFreqIndex::from_flat(f, p));
      result.values.push_back(x[f]);
    }
  }
  if (options.debias && !result.support.empty() && result.support.size() <= std::min<std::size_t>(p, kDefaultGramCap)) {
    result.values = least_squares(ctx, result.support, b, conv, kDefaultGramCap);
  }
  result.residual_norm = norm2(residual_of(ctx, result.support, result.values, b, conv));
  return result;
}

SparseSignal random_sparse_signal(std::uint64_t p, std::size_t k, Rng& rng) {
  SparseSignal x;
  x.p = p;
  for (std::uint64_t f : rng.sample_without_replacement(p * p, k)) {
    x.support.push_back(TimeFreqIndex::from_flat(f, p));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    x.values.push_back(std::polar(1.0, theta));
  }
  return x;
}

std::string_view to_string(RecoveryMethod method) { return method == RecoveryMethod::Omp ? "omp" : "ista"; }

RecoveryMethod parse_method(std::string_view text) {
  if (text == "omp") return RecoveryMethod::Omp;
  if (text == "ista") return RecoveryMethod::Ista;
  throw std::invalid_argument("unknown recovery method '" + std::string(text) + "' (expected omp|ista)");
}

std::vector<RecoveryRow> recovery_experiment(const FieldContext& ctx, std::span<const std::size_t> k_values,
                                             std::size_t trials, std::uint64_t seed, RecoveryMethod method,
                                             const ExperimentOptions& options) {
  std::vector<RecoveryRow> rows;
  for (std::size_t k : k_values) {
    std::vector<char> success(trials, 0);
    parallel_for(trials, options.workers, [&](std::size_t t) {
      Rng rng(derive_seed(seed, k, t));
      const SparseSignal x = random_sparse_signal(ctx.p(), k, rng);
      const std::vector<Complex> b = measure(ctx, x, options.conv);
      RecoveryResult r;
      if (method == RecoveryMethod::Omp) {
        r = omp(ctx, b, k, options.conv);
      } else {
        double peak = 0.0;
        for (const auto& z : frame_adjoint(ctx, b, options.conv)) peak = std::max(peak, std::abs(z));
        const double lambda = peak > 0.0 ? options.ista_lambda_fraction * peak : 1.0;
        r = ista_l1(ctx, b, lambda, options.ista_iterations, options.conv);
      }
      score_support(r, x);
      success[t] = r.exact_support_match ? 1 : 0;
    });
    RecoveryRow row;
    row.k = k;
    row.trials = trials;
    for (char s : success) row.successes += static_cast<std::size_t>(s);
    row.rate = trials == 0 ? 0.0 : static_cast<double>(row.successes) / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lcs
