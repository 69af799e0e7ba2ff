#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "legendre_cs/gabor_frame.hpp"
#include "legendre_cs/random.hpp"

namespace lcs {

/// A sparse vector in C^{p^2}, indexed by time-frequency shifts.
struct SparseSignal {
  std::uint64_t p = 0;
  std::vector<TimeFreqIndex> support;
  std::vector<Complex> values;

  /// Throws unless indices are in range and distinct, sizes match and values are nonzero.
  void validate() const;
};

struct RecoveryResult {
  std::vector<TimeFreqIndex> support;  // ascending
  std::vector<Complex> values;         // aligned with support
  bool exact_support_match = false;    // set by score_support
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  /// OMP: residual norm before each selection and after the last.
  /// ISTA: objective value after each iteration.
  std::vector<double> history;
};

/// Sets exact_support_match by comparing against the true support.
void score_support(RecoveryResult& result, const SparseSignal& truth);

/// b = sum over the support of value * u_{l,j}.
std::vector<Complex> measure(const FieldContext& ctx, const SparseSignal& x, NormConvention conv);

/// Correlations <r, u_{l,j}> for every column, flat index l * p + j. O(p^3).
std::vector<Complex> frame_adjoint(const FieldContext& ctx, std::span<const Complex> r, NormConvention conv);

/// sum over flat indices of x[f] u_f; zero entries are skipped.
std::vector<Complex> frame_apply(const FieldContext& ctx, std::span<const Complex> x, NormConvention conv);

/// Orthogonal matching pursuit with at most k selections. Requires UnitNorm.
/// Stops early once the residual norm drops below tol * max(1, |b|).
/// Ties in the correlation argmax go to the smallest (l, j).
RecoveryResult omp(const FieldContext& ctx, std::span<const Complex> b, std::size_t k,
                   NormConvention conv, std::size_t cap = kDefaultGramCap, double tol = 1e-10);

struct IstaOptions {
  double step = 0.0;        // 0 selects 1 / |A A*| from power iteration
  bool debias = true;       // least squares on the detected support
  std::size_t power_iterations = 60;
};

/// Largest eigenvalue of A A* by power iteration.
double frame_operator_norm(const FieldContext& ctx, NormConvention conv, std::size_t iterations = 60);

/// Iterative soft thresholding on 1/2 |Ax - b|^2 + lambda |x|_1. The objective
/// is checked to be nonincreasing after every iteration (std::logic_error otherwise).
RecoveryResult ista_l1(const FieldContext& ctx, std::span<const Complex> b, double lambda,
                       std::size_t iterations, NormConvention conv, const IstaOptions& options = {});

/// Random k-sparse signal: uniform support, unit-modulus coefficients with uniform phase.
SparseSignal random_sparse_signal(std::uint64_t p, std::size_t k, Rng& rng);

enum class RecoveryMethod { Omp, Ista };

std::string_view to_string(RecoveryMethod method);
RecoveryMethod parse_method(std::string_view text);

struct RecoveryRow {
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
};

struct ExperimentOptions {
  NormConvention conv = NormConvention::UnitNorm;
  unsigned workers = 1;
  double ista_lambda_fraction = 0.1;  // lambda = fraction * |A* b|_inf
  std::size_t ista_iterations = 300;
};

/// Exact-support success rate per k; fully determined by `seed`.
std::vector<RecoveryRow> recovery_experiment(const FieldContext& ctx, std::span<const std::size_t> k_values,
                                             std::size_t trials, std::uint64_t seed, RecoveryMethod method,
                                             const ExperimentOptions& options = {});

}  // namespace lcs
