#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "legendre_cs/gabor_frame.hpp"
#include "legendre_cs/random.hpp"

namespace lcs {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { Verify, Coherence, SineSum, Scaling, FlatRip, Decompose, CharSums, Recover };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

struct PrimeRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

struct ExperimentConfig {
  Command command = Command::Verify;
  std::optional<std::uint64_t> p;
  std::optional<PrimeRange> p_range;
  std::size_t points = 20;       // primes drawn log-spaced from p_range (scaling)
  double sigma = 0.1;
  double delta = 0.3;
  double epsilon = 0.1;
  double alpha = 0.2;            // derived, never read from input
  std::uint64_t m1len = 0;       // 0 = derived from sigma
  std::uint64_t m2len = 0;
  std::size_t k = 3;
  std::size_t k_lo = 1;
  std::size_t k_hi = 8;
  std::size_t trials = 100;
  std::uint64_t seed = kDefaultSeed;
  std::optional<NormConvention> convention;  // per-command default when unset
  bool theorem_mode = true;
  std::string method = "omp";
  unsigned workers = 1;
  std::string out;               // empty = stdout

  /// Convention actually used: unit for recover, paper otherwise, unless set.
  NormConvention effective_convention() const;
  /// Canonical key=value text of every field that affects results (workers and out excluded).
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;
};

struct ConfigError {
  std::string where;  // "line N" or "--flag"
  std::string message;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
};

/// key=value lines ('#' comments; later keys win) followed by overrides, which
/// win over the file. Returns every problem found, not only the first.
ParseOutcome parse_config(std::string_view text,
                          const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Text of the config schema, used by --help.
std::string config_schema();

/// Runs the suite and writes CSV to config.out (or `fallback` when out is empty).
/// Returns 0 when every asserted bound held, 1 on a violation, 2 on usage or I/O errors.
int run(const ExperimentConfig& config, std::ostream& fallback, std::ostream& diagnostics);

}  // namespace lcs
