#include "legendre_cs/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "legendre_cs/char_sums.hpp"
#include "legendre_cs/flat_rip.hpp"
#include "legendre_cs/parallel.hpp"
#include "legendre_cs/recovery.hpp"
#include "legendre_cs/theorem_sums.hpp"

namespace lcs {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::Verify, "verify"},     {Command::Coherence, "coherence"}, {Command::SineSum, "sine-sum"},
    {Command::Scaling, "scaling"},   {Command::FlatRip, "flat-rip"},    {Command::Decompose, "decompose"},
    {Command::CharSums, "char-sums"}, {Command::Recover, "recover"},
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
  int base = 10;
  std::string_view body = text;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
    base = 16;
    body.remove_prefix(2);
  }
  if (body.empty()) return false;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out, base);
  return ec == std::errc() && ptr == body.data() + body.size();
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  return parse_u64(text.substr(0, colon), lo) && parse_u64(text.substr(colon + 1), hi);
}

struct Entry {
  std::string value;
  std::string where;
};

const std::vector<std::string_view> kKeys = {"command", "p",     "p_range", "points", "sigma",  "delta",
                                             "epsilon", "m1len", "m2len",   "k",      "k_range", "trials",
                                             "seed",    "convention", "mode", "method", "workers", "out"};

struct Defaults {
  std::optional<std::uint64_t> p;
  std::optional<PrimeRange> range;
};

Defaults command_defaults(Command c) {
  switch (c) {
    case Command::Verify: return {std::nullopt, PrimeRange{5, 61}};
    case Command::Coherence: return {std::nullopt, PrimeRange{5, 101}};
    case Command::SineSum: return {1009, std::nullopt};
    case Command::Scaling: return {std::nullopt, PrimeRange{1000, 300000}};
    case Command::FlatRip: return {101, std::nullopt};
    case Command::Decompose: return {10007, std::nullopt};
    case Command::CharSums: return {199, std::nullopt};
    case Command::Recover: return {97, std::nullopt};
  }
  return {};
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(lo, 3); q <= hi; ++q) {
    if (is_prime(q)) out.push_back(q);
  }
  return out;
}

std::vector<std::uint64_t> prime_list(const ExperimentConfig& cfg) {
  if (cfg.p) return {*cfg.p};
  if (cfg.command == Command::Scaling) return log_spaced_primes(cfg.p_range->lo, cfg.p_range->hi, cfg.points);
  return primes_in(cfg.p_range->lo, cfg.p_range->hi);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("Table: column count mismatch");
    rows_.push_back(std::move(cells));
  }
  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }

  std::string render(const ExperimentConfig& cfg) const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx", static_cast<unsigned long long>(cfg.hash()));
    os << "# config_hash=" << hash << '\n';
    os << "# seed=" << cfg.seed << '\n';
    os << "# version=" << kToolVersion << '\n';
    for (const auto& [k, v] : notes_) os << "# " << k << '=' << v << '\n';
    return os.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

const char* yes_no(bool b) { return b ? "1" : "0"; }

ThetaParams params_for(const ExperimentConfig& cfg, std::uint64_t p) {
  ThetaParams tp = ThetaParams::realize(p, cfg.sigma, cfg.delta, cfg.epsilon);
  if (cfg.m1len) tp.m1len = cfg.m1len;
  if (cfg.m2len) tp.m2len = cfg.m2len;
  tp.validate(cfg.theorem_mode);
  return tp;
}

struct Check {
  std::string name;
  std::uint64_t p;
  double value;
  double bound;
};

// Invariant suite behind the verify command.
std::vector<Check> verify_prime(std::uint64_t p, std::uint64_t seed) {
  const FieldContext ctx(p);
  std::vector<Check> checks;
  const auto chi = ctx.chi();

  checks.push_back({"gauss_modulus", p, std::abs(std::abs(gauss_sum(ctx).value) - std::sqrt(double(p))), 1e-9});

  double mult_failures = 0;
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      if (chi[a * b % p] != chi[a] * chi[b]) ++mult_failures;
  checks.push_back({"chi_multiplicative", p, mult_failures, 0.0});

  {
    Rng rng(derive_seed(seed, 0x7E57, p));
    std::vector<Complex> v(p);
    for (auto& z : v) z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    double vn = 0;
    for (const auto& z : v) vn += std::norm(z);
    const double c = column_scale(ctx, NormConvention::PaperSqrtP);
    double energy = 0;
    for (const auto& z : frame_adjoint(ctx, v, NormConvention::PaperSqrtP)) energy += std::norm(z);
    const double frame_bound = c * c * double(p) * double(p - 1);
    checks.push_back({"frame_tightness", p, std::abs(energy / (frame_bound * vn) - 1.0), 1e-9});
  }

  const double mu = coherence(ctx, NormConvention::PaperSqrtP, CoherenceMode::ShiftClass);
  if (p <= kBruteCoherenceLimit) {
    const double brute = coherence(ctx, NormConvention::PaperSqrtP, CoherenceMode::Brute);
    checks.push_back({"coherence_paths", p, std::abs(mu - brute), 1e-10});
  }
  checks.push_back({"coherence_bound", p, mu, 2.0 / std::sqrt(double(p)) + 1e-12});

  double weil_max = 0;
  for (std::uint64_t m = 1; m < p; ++m)
    for (std::uint64_t n = 1; n < p; ++n) weil_max = std::max(weil_max, twisted_autocorrelation(ctx, m, n).value);
  checks.push_back({"twisted_autocorrelation", p, weil_max, 2.0 * std::sqrt(double(p)) + kBoundSlack});

  const BoundCheck pv = polya_vinogradov_max(ctx);
  checks.push_back({"polya_vinogradov", p, pv.value, pv.bound});

  double kernel_err = 0;
  for (std::uint64_t len = 1; len <= p; ++len) {
    for (std::uint64_t t = 0; t < p; ++t) {
      Complex direct(0, 0);
      for (std::uint64_t m = 0; m < len; ++m) direct += std::conj(ctx.root_at(std::int64_t(m * t % p)));
      kernel_err = std::max(kernel_err, std::abs(dirichlet_kernel_mag(p, {0, len}, std::int64_t(t)) - std::abs(direct)) / double(len));
    }
  }
  checks.push_back({"kernel_identity", p, kernel_err, 1e-9});

  ThetaParams flat;
  flat.p = p;
  flat.n = std::int64_t(p / 3 + 1);
  flat.m1len = 1;
  flat.m2len = 1;
  checks.push_back({"sine_sum_degenerate", p, std::abs(sine_sum_exact(flat) - double(p - 2)), 1e-9 * double(p)});
  flat.m1len = 2;
  flat.m2len = std::min<std::uint64_t>(4, p);
  checks.push_back({"trivial_bound", p, sine_sum_exact(flat), trivial_bound(flat) * (1 + 1e-12)});

  const std::size_t k = std::max<std::uint64_t>(1, isqrt(p));
  const ConsecutiveFiberSampler sampler(p, k);
  double path_err = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    Rng rng(derive_seed(seed, 0xD0A1, p * 1000 + t));
    const auto [o1, o2] = sampler.draw(t, rng);
    const Complex a = pair_sum_inner_product_direct(ctx, o1, o2, NormConvention::PaperSqrtP);
    const Complex b = pair_sum_inner_product_spectral(ctx, o1, o2, NormConvention::PaperSqrtP);
    path_err = std::max(path_err, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  checks.push_back({"pair_sum_paths", p, path_err, 1e-8});
  return checks;
}

int run_suite(const ExperimentConfig& cfg, Table& table) {
  const auto primes = prime_list(cfg);
  const NormConvention conv = cfg.effective_convention();
  bool violated = false;

  switch (cfg.command) {
    case Command::Verify: {
      table = Table({"check", "p", "value", "bound", "holds"});
      std::vector<std::vector<Check>> per_prime(primes.size());
      parallel_for(primes.size(), cfg.workers, [&](std::size_t i) { per_prime[i] = verify_prime(primes[i], cfg.seed); });
      for (const auto& checks : per_prime) {
        for (const auto& c : checks) {
          const bool holds = c.value <= c.bound;
          violated |= !holds;
          table.row({c.name, std::to_string(c.p), fmt(c.value), fmt(c.bound), yes_no(holds)});
        }
      }
      break;
    }
    case Command::Coherence: {
      table = Table({"p", "convention", "coherence", "bound", "ratio", "holds"});
      for (std::uint64_t p : primes) {
        const FieldContext ctx(p);
        const double mu = coherence(ctx, conv, CoherenceMode::ShiftClass, cfg.workers);
        const double pd = double(p);
        const double bound = conv == NormConvention::PaperSqrtP ? 2.0 / std::sqrt(pd) : 2.0 * std::sqrt(pd) / (pd - 1.0);
        const BoundCheck bc = BoundCheck::make(mu, bound);
        violated |= !bc.holds;
        table.row({std::to_string(p), std::string(to_string(conv)), fmt(mu), fmt(bound), fmt(bc.ratio), yes_no(bc.holds)});
      }
      break;
    }
    case Command::SineSum:
    case Command::Scaling: {
      table = Table({"p", "n", "m1len", "m2len", "sine_sum", "trivial_bound", "ratio"});
      std::vector<ThetaParams> params;
      for (std::uint64_t p : primes) params.push_back(params_for(cfg, p));
      std::vector<double> sums(params.size());
      parallel_for(params.size(), cfg.workers, [&](std::size_t i) { sums[i] = sine_sum_exact(params[i]); });
      std::vector<std::pair<double, double>> points;
      for (std::size_t i = 0; i < params.size(); ++i) {
        const ThetaParams& tp = params[i];
        const double tb = trivial_bound(tp);
        violated |= sums[i] > tb * (1.0 + 1e-12);
        table.row({std::to_string(tp.p), std::to_string(tp.n), std::to_string(tp.m1len), std::to_string(tp.m2len),
                   fmt(sums[i]), fmt(tb), fmt(sums[i] / tb)});
        points.emplace_back(double(tp.p), sums[i]);
      }
      if (cfg.command == Command::Scaling && points.size() >= 5) {
        const ScalingFit fit = scaling_fit(points);
        table.note("fit_exponent", fmt(fit.exponent));
        table.note("fit_log_k", fmt(fit.log_k));
        table.note("fit_r2", fmt(fit.r2));
        table.note("target_exponent", fmt(1.5 - cfg.alpha));
      }
      break;
    }
    case Command::FlatRip: {
      table = Table({"p", "k", "trials", "convention", "delta", "relaxed_delta", "mu", "coherence_hypothesis_holds",
                     "within_coherence_bound"});
      for (std::uint64_t p : primes) {
        const FieldContext ctx(p);
        const ConsecutiveFiberSampler sampler(p, cfg.k);
        const RipReport r = flat_rip_delta(ctx, cfg.k, sampler, cfg.trials, conv, cfg.seed, cfg.workers, cfg.theorem_mode);
        const bool within = std::isnan(r.mu) || r.delta <= r.mu * double(cfg.k) * (1.0 + 1e-9);
        violated |= !within;
        table.row({std::to_string(p), std::to_string(cfg.k), std::to_string(r.trials), std::string(to_string(conv)),
                   fmt(r.delta), fmt(r.relaxed_delta), fmt(r.mu), yes_no(r.coherence_hypothesis_holds), yes_no(within)});
      }
      break;
    }
    case Command::Decompose: {
      table = Table({"p", "n", "m1len", "m2len", "e1", "s_main", "e2", "e3", "total_bound", "discrepancy",
                     "residual_abs_sum", "sine_sum", "holds"});
      for (std::uint64_t p : primes) {
        const ThetaParams tp = params_for(cfg, p);
        const SumDecomposition d = sum_split_decompose(tp);
        const double s = sine_sum_exact(tp);
        const bool holds = s <= d.total_bound * (1.0 + 1e-12);
        violated |= !holds;
        table.row({std::to_string(p), std::to_string(tp.n), std::to_string(tp.m1len), std::to_string(tp.m2len),
                   fmt(d.e1), fmt(d.s_main), fmt(d.e2), fmt(d.e3), fmt(d.total_bound), fmt(d.discrepancy),
                   fmt(d.residual_abs_sum), fmt(s), yes_no(holds)});
      }
      break;
    }
    case Command::CharSums: {
      table = Table({"p", "m", "n", "value", "bound", "holds"});
      for (std::uint64_t p : primes) {
        const FieldContext ctx(p);
        for (std::uint64_t m = 1; m < p; ++m) {
          for (std::uint64_t n = 1; n < p; ++n) {
            const BoundCheck bc = twisted_autocorrelation(ctx, m, n);
            violated |= !bc.holds;
            table.row({std::to_string(p), std::to_string(m), std::to_string(n), fmt(bc.value), fmt(bc.bound),
                       yes_no(bc.holds)});
          }
        }
      }
      break;
    }
    case Command::Recover: {
      table = Table({"p", "method", "k", "trials", "successes", "rate"});
      const RecoveryMethod method = parse_method(cfg.method);
      std::vector<std::size_t> ks;
      for (std::size_t k = cfg.k_lo; k <= cfg.k_hi; ++k) ks.push_back(k);
      ExperimentOptions opts;
      opts.conv = conv;
      opts.workers = cfg.workers;
      for (std::uint64_t p : primes) {
        const FieldContext ctx(p);
        for (const RecoveryRow& r : recovery_experiment(ctx, ks, cfg.trials, cfg.seed, method, opts)) {
          table.row({std::to_string(p), std::string(to_string(method)), std::to_string(r.k), std::to_string(r.trials),
                     std::to_string(r.successes), fmt(r.rate)});
        }
      }
      break;
    }
  }
  return violated ? 1 : 0;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommandNames)
    if (c == command) return name;
  return "?";
}

std::optional<Command> parse_command(std::string_view text) {
  for (const auto& [c, name] : kCommandNames)
    if (name == text) return c;
  return std::nullopt;
}

NormConvention ExperimentConfig::effective_convention() const {
  if (convention) return *convention;
  return command == Command::Recover ? NormConvention::UnitNorm : NormConvention::PaperSqrtP;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "command=" << to_string(command) << '\n';
  if (p) os << "p=" << *p << '\n';
  if (p_range) os << "p_range=" << p_range->lo << ':' << p_range->hi << '\n';
  os << "points=" << points << "\nsigma=" << fmt(sigma) << "\ndelta=" << fmt(delta) << "\nepsilon=" << fmt(epsilon)
     << "\nm1len=" << m1len << "\nm2len=" << m2len << "\nk=" << k << "\nk_range=" << k_lo << ':' << k_hi
     << "\ntrials=" << trials << "\nseed=" << seed << "\nconvention=" << to_string(effective_convention())
     << "\nmode=" << (theorem_mode ? "theorem" : "free") << "\nmethod=" << method << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ParseOutcome parse_config(std::string_view text, const std::vector<std::pair<std::string, std::string>>& overrides) {
  ParseOutcome outcome;
  auto error = [&](const std::string& where, const std::string& msg) { outcome.errors.push_back({where, msg}); };
  std::map<std::string, Entry> entries;

  auto accept = [&](const std::string& key, const std::string& value, const std::string& where) {
    if (key == "alpha") {
      error(where, "alpha is derived from sigma and delta and cannot be set");
    } else if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      error(where, "unknown key '" + key + "'");
    } else {
      entries[key] = {value, where};
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) {
      error(where, "expected key=value, got '" + body + "'");
      continue;
    }
    accept(trim(body.substr(0, eq)), trim(body.substr(eq + 1)), where);
  }
  for (const auto& [key, value] : overrides) accept(key, value, "--" + key);

  ExperimentConfig cfg;
  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto read_u64 = [&](const char* key, auto& field) {
    if (const Entry* e = get(key)) {
      std::uint64_t v = 0;
      if (!parse_u64(e->value, v)) error(e->where, std::string("malformed integer for ") + key + ": '" + e->value + "'");
      else field = static_cast<std::remove_reference_t<decltype(field)>>(v);
    }
  };
  auto read_double = [&](const char* key, double& field) {
    if (const Entry* e = get(key)) {
      if (!parse_double(e->value, field)) error(e->where, std::string("malformed number for ") + key + ": '" + e->value + "'");
    }
  };

  if (const Entry* e = get("command")) {
    if (auto c = parse_command(e->value)) cfg.command = *c;
    else error(e->where, "unknown command '" + e->value + "'");
  }
  if (const Entry* e = get("p")) {
    std::uint64_t v = 0;
    if (!parse_u64(e->value, v)) error(e->where, "malformed integer for p: '" + e->value + "'");
    else if (v < 3 || !is_prime(v)) error(e->where, "p must be an odd prime, got " + e->value);
    else cfg.p = v;
  }
  if (const Entry* e = get("p_range")) {
    PrimeRange r;
    if (!parse_range(e->value, r.lo, r.hi)) error(e->where, "p_range must be LO:HI, got '" + e->value + "'");
    else if (r.lo > r.hi || r.hi < 3) error(e->where, "p_range must satisfy 3 <= HI and LO <= HI");
    else cfg.p_range = r;
  }
  if (get("p") && get("p_range")) error(get("p_range")->where, "p and p_range are mutually exclusive");
  read_u64("points", cfg.points);
  read_double("sigma", cfg.sigma);
  read_double("delta", cfg.delta);
  read_double("epsilon", cfg.epsilon);
  read_u64("m1len", cfg.m1len);
  read_u64("m2len", cfg.m2len);
  read_u64("k", cfg.k);
  if (const Entry* e = get("k_range")) {
    std::uint64_t lo = 0, hi = 0;
    if (!parse_range(e->value, lo, hi) || lo > hi) error(e->where, "k_range must be LO:HI with LO <= HI");
    else {
      cfg.k_lo = lo;
      cfg.k_hi = hi;
    }
  }
  read_u64("trials", cfg.trials);
  read_u64("seed", cfg.seed);
  std::uint64_t workers = cfg.workers;
  read_u64("workers", workers);
  cfg.workers = static_cast<unsigned>(workers);
  if (const Entry* e = get("workers"); e && workers == 0) error(e->where, "workers must be at least 1");
  if (const Entry* e = get("convention")) {
    try {
      cfg.convention = parse_convention(e->value);
    } catch (const std::invalid_argument&) {
      error(e->where, "convention must be paper or unit, got '" + e->value + "'");
    }
  }
  if (const Entry* e = get("mode")) {
    if (e->value == "theorem") cfg.theorem_mode = true;
    else if (e->value == "free") cfg.theorem_mode = false;
    else error(e->where, "mode must be theorem or free, got '" + e->value + "'");
  }
  if (const Entry* e = get("method")) {
    if (e->value != "omp" && e->value != "ista") error(e->where, "method must be omp or ista, got '" + e->value + "'");
    else cfg.method = e->value;
  }
  if (const Entry* e = get("out")) cfg.out = e->value;
  if (const Entry* e = get("trials"); e && cfg.trials == 0) error(e->where, "trials must be at least 1");
  if (const Entry* e = get("points"); e && cfg.points < 5) error(e->where, "points must be at least 5");

  auto where_of = [&](const char* key) { return get(key) ? get(key)->where : std::string("default"); };
  if (cfg.theorem_mode) {
    if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) error(where_of("delta"), "delta must lie in (0, 1/2)");
    if (!(cfg.sigma >= 0.0 && cfg.sigma < 0.5)) error(where_of("sigma"), "sigma must lie in [0, 1/2)");
    if (!(cfg.delta > cfg.sigma)) error(where_of("delta"), "delta must exceed sigma");
    if (!(cfg.epsilon > 0.0)) error(where_of("epsilon"), "epsilon must be positive");
  }
  cfg.alpha = ThetaParams::alpha_for(cfg.sigma, cfg.delta);

  if (!cfg.p && !cfg.p_range) {
    const Defaults d = command_defaults(cfg.command);
    cfg.p = d.p;
    cfg.p_range = d.range;
  }
  // file lines in order, then command-line flags, then defaults
  auto rank = [](const ConfigError& e) -> std::pair<int, long> {
    if (e.where.rfind("line ", 0) == 0) return {0, std::stol(e.where.substr(5))};
    return {e.where.rfind("--", 0) == 0 ? 1 : 2, 0};
  };
  std::stable_sort(outcome.errors.begin(), outcome.errors.end(),
                   [&](const ConfigError& a, const ConfigError& b) { return rank(a) < rank(b); });
  if (outcome.errors.empty()) outcome.config = cfg;
  return outcome;
}

std::string config_schema() {
  return R"(Config file: UTF-8 key=value lines, '#' starts a comment, later keys override
earlier ones, command-line flags override the file.

  command     verify | coherence | sine-sum | scaling | flat-rip | decompose | char-sums | recover
  p           odd prime (exclusive with p_range)
  p_range     LO:HI; scaling takes `points` log-spaced primes, other commands every prime
  points      number of primes for scaling (>= 5, default 20)
  sigma       block exponent, default 0.1; theorem mode: [0, 1/2)
  delta       modulation exponent, default 0.3; theorem mode: (0, 1/2), delta > sigma
  epsilon     cutoff exponent, default 0.1 (> 0)
  m1len       first block length, 0 = derived from sigma (default)
  m2len       second block length, 0 = derived (default)
  k           flat-RIP order, default 3
  k_range     LO:HI sparsity levels for recover, default 1:8
  trials      trials per case, default 100
  seed        64-bit master seed (decimal or 0x hex), default 0x5EED0F1E6E7D5EED
  convention  paper (1/sqrt p columns) | unit (unit columns); default unit for recover, paper otherwise
  mode        theorem | free; free skips the scaling hypotheses
  method      omp | ista (recover)
  workers     worker threads, default 1; results do not depend on it
  out         CSV path, default stdout
alpha is always derived as sigma + (delta - sigma)/2.

Default primes when neither p nor p_range is given:
  verify 5:61, coherence 5:101, sine-sum 1009, scaling 1000:300000,
  flat-rip 101, decompose 10007, char-sums 199, recover 97.

Exit codes: 0 all checked bounds held, 1 a bound was violated, 2 usage or I/O error.)";
}

int run(const ExperimentConfig& config, std::ostream& fallback, std::ostream& diagnostics) {
  Table table({});
  int status = 0;
  try {
    status = run_suite(config, table);
  } catch (const std::invalid_argument& e) {
    diagnostics << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    diagnostics << "error: " << e.what() << '\n';
    return 2;
  }
  const std::string csv = table.render(config);
  if (config.out.empty()) {
    fallback << csv;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file || !(file << csv) || !file.flush()) {
      diagnostics << "error: cannot write " << config.out << '\n';
      return 2;
    }
  }
  if (status != 0) diagnostics << "bound violation detected\n";
  return status;
}

}  // namespace lcs
