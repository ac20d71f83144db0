#pragma once

// Command-line driver: argument parsing into a CommandSpec and execution.
//
// Exit codes: 0 success, 1 domain error (bound violation, precision still
// insufficient after one retry, bad cache, ...), 2 usage error.

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "millscale/constant_digits.hpp"
#include "millscale/error.hpp"
#include "millscale/io.hpp"
#include "millscale/mills_sequence.hpp"
#include "millscale/prime_search.hpp"

namespace millscale::cli {

enum class Subcommand { Sequence, Constant, Verify, LemmaCheck, Bench };
enum class Format { Text, Json, Bfile };

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct CommandSpec {
  Subcommand subcommand = Subcommand::Sequence;
  unsigned c = 3;
  std::string variant = "ceiling";
  std::string seed = "2";
  std::size_t terms = 7;
  std::size_t digits = 600;
  unsigned mr_rounds = 16;
  Format format = Format::Text;
  std::optional<std::filesystem::path> cache_path;
  std::optional<std::filesystem::path> out_path;
  std::uint64_t rng_seed = 0;
  bool allow_c2 = false;
  // lemma-check
  std::string n_min = "2";
  std::string n_max = "1000";
  // bench: prev_prime(10^(10^k)), the largest prime with 10^k digits
  std::vector<unsigned> bench_k = {1, 2, 3};
};

/// First problem with the flag combination, if any. Runs before any
/// computation.
inline std::optional<std::string> validate(const CommandSpec& spec) {
  if (spec.c < 2) return "--c must be >= 2";
  if (spec.c == 2 && !spec.allow_c2) return "--c 2 is outside the proven range; pass --allow-c2 to explore it";
  if (spec.variant != "ceiling" && spec.variant != "floor") return "--variant must be ceiling or floor";
  try {
    (void)Natural::from_decimal(spec.seed);
  } catch (const Error&) {
    return "--seed must be a decimal integer";
  }
  if (spec.terms == 0) return "--terms must be positive";
  if (spec.format == Format::Bfile && spec.subcommand != Subcommand::Sequence) {
    return "--format bfile is only available for the sequence subcommand";
  }
  if (spec.subcommand == Subcommand::LemmaCheck) {
    if (spec.c < 3) return "lemma-check requires --c >= 3";
    Natural lo, hi;
    try {
      lo = Natural::from_decimal(spec.n_min);
      hi = Natural::from_decimal(spec.n_max);
    } catch (const Error&) {
      return "--n-min/--n-max must be decimal integers";
    }
    if (lo < Natural(2) || lo > hi) return "lemma-check requires 2 <= --n-min <= --n-max";
  }
  if (spec.subcommand == Subcommand::Bench) {
    if (spec.bench_k.empty()) return "--bench-k needs at least one value";
    for (unsigned k : spec.bench_k) {
      if (k < 1 || k > 5) return "--bench-k values must lie in [1, 5]";
    }
  }
  return std::nullopt;
}

struct ParseResult {
  std::optional<CommandSpec> spec;  // empty: exit immediately with exit_code
  int exit_code = kExitOk;
};

/// Parses argv. Help requests print to `out` and exit 0; malformed or
/// inconsistent flags print one diagnostic to `err` and exit 2.
inline ParseResult parse_args(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  CLI::App app{"Generalized Mills prime sequences and certified digits of their constants", "millscale"};
  app.require_subcommand(1, 1);
  CommandSpec spec;
  std::string format = "text";
  std::string cache, out_path;

  struct Sub {
    const char* name;
    const char* help;
    Subcommand kind;
  };
  const Sub subs[] = {
      {"sequence", "Construct the prime sequence", Subcommand::Sequence},
      {"constant", "Certified decimal digits of the constant", Subcommand::Constant},
      {"verify", "Round-trip the constant back to the sequence", Subcommand::Verify},
      {"lemma-check", "Empirical sweep of the prime-in-interval lemma", Subcommand::LemmaCheck},
      {"bench", "Time prev_prime at 10^k-digit sizes", Subcommand::Bench},
  };
  std::vector<std::pair<CLI::App*, Subcommand>> registered;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--c", spec.c, "Exponent c (>= 3; 2 with --allow-c2)");
    sub->add_option("--variant", spec.variant, "ceiling | floor");
    sub->add_option("--seed", spec.seed, "First prime of the sequence");
    sub->add_option("--terms", spec.terms, "Number of sequence terms");
    sub->add_option("--digits", spec.digits, "Requested fractional digits");
    sub->add_option("--mr-rounds", spec.mr_rounds, "Extra random-base strong tests above 2^64");
    sub->add_option("--format", format, "text | json | bfile");
    sub->add_option("--cache", cache, "Resumable sequence cache (JSON); default $MILLSCALE_CACHE");
    sub->add_option("--out", out_path, "Write output to this file");
    sub->add_option("--rng-seed", spec.rng_seed, "Seed for random strong-test bases");
    sub->add_flag("--allow-c2", spec.allow_c2, "Permit the exploratory exponent c = 2");
    if (s.kind == Subcommand::LemmaCheck) {
      sub->add_option("--n-min", spec.n_min, "Smallest N");
      sub->add_option("--n-max", spec.n_max, "Largest N");
    }
    if (s.kind == Subcommand::Bench) {
      sub->add_option("--bench-k", spec.bench_k, "Sizes: 10^k-digit neighbourhoods");
    }
    registered.emplace_back(sub, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {std::nullopt, kExitOk};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {std::nullopt, kExitOk};
  } catch (const CLI::ParseError& e) {
    err << "millscale: " << e.what() << "\n";
    return {std::nullopt, kExitUsage};
  }
  for (const auto& [sub, kind] : registered) {
    if (sub->parsed()) spec.subcommand = kind;
  }
  if (format == "text") spec.format = Format::Text;
  else if (format == "json") spec.format = Format::Json;
  else if (format == "bfile") spec.format = Format::Bfile;
  else {
    err << "millscale: --format must be text, json or bfile\n";
    return {std::nullopt, kExitUsage};
  }
  if (!cache.empty()) spec.cache_path = cache;
  if (!out_path.empty()) spec.out_path = out_path;
  if (auto problem = validate(spec)) {
    err << "millscale: " << *problem << "\n";
    return {std::nullopt, kExitUsage};
  }
  return {spec, kExitOk};
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

inline MillsConfig mills_config(const CommandSpec& spec) {
  MillsConfig cfg;
  cfg.c = spec.c;
  cfg.variant = parse_variant(spec.variant);
  cfg.seed = Natural::from_decimal(spec.seed);
  cfg.terms = spec.terms;
  cfg.allow_c2 = spec.allow_c2;
  cfg.primality.extra_mr_rounds = spec.mr_rounds;
  cfg.primality.rng_seed = spec.rng_seed;
  return cfg;
}

/// --cache wins, then $MILLSCALE_CACHE; otherwise no cache.
inline std::optional<std::filesystem::path> resolve_cache(const CommandSpec& spec) {
  if (spec.cache_path) return spec.cache_path;
  if (const char* env = std::getenv("MILLSCALE_CACHE"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

/// Loads what the cache holds, then searches for the remaining terms and
/// writes the cache back when it grew. Progress notes go to `err`.
inline MillsSequence obtain_sequence(const CommandSpec& spec, const MillsConfig& cfg, std::ostream& err,
                                     const RecordCallback& on_record = {}) {
  const auto cache = resolve_cache(spec);
  MillsSequence seq{cfg.c, cfg.variant, cfg.seed, {}};
  bool writable = cache.has_value();
  std::size_t loaded = 0;
  if (cache && std::filesystem::exists(*cache)) {
    CacheLoad got = load_cache(*cache, cfg);
    if (got.matched) {
      loaded = got.sequence.size();
      seq = got.sequence.prefix(cfg.terms);
    } else {
      err << "millscale: cache '" << cache->string()
          << "' holds a different (c, variant, seed); ignoring it\n";
      writable = false;
    }
  }
  if (on_record) {
    for (const auto& r : seq.records) on_record(r);
  }
  const std::size_t before = seq.size();
  extend_sequence(seq, cfg, on_record);
  const std::size_t searched = seq.size() - std::max<std::size_t>(before, 1);
  if (cache) {
    err << "millscale: loaded " << loaded << " cached terms; searched " << searched << " new terms\n";
  }
  if (writable && seq.size() > loaded) save_cache(*cache, seq);
  return seq;
}

/// Output sink: the --out file when given, else `out`.
class Sink {
 public:
  Sink(const CommandSpec& spec, std::ostream& out) : out_(out) {
    if (spec.out_path) {
      file_.open(*spec.out_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open '" + spec.out_path->string() + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::ostream& out_;
  std::ofstream file_;
};

inline int run_sequence(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  const MillsConfig cfg = mills_config(spec);
  for (const auto& w : config_warnings(cfg)) err << "millscale: warning: " << w << "\n";
  Sink sink(spec, out);
  const bool stream_lines = spec.format != Format::Json;
  RecordCallback on_record;
  if (stream_lines) {
    on_record = [&](const SequenceRecord& r) { sink.stream() << record_line(r) << std::flush; };
  }
  const MillsSequence seq = obtain_sequence(spec, cfg, err, on_record);
  if (spec.format == Format::Json) sink.stream() << dump(to_json(seq, config_warnings(cfg)));
  else if (spec.format == Format::Text) emit_status_comments(seq, sink.stream());
  sink.finish();
  return kExitOk;
}

inline int run_constant(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  const MillsConfig cfg = mills_config(spec);
  for (const auto& w : config_warnings(cfg)) err << "millscale: warning: " << w << "\n";
  const MillsSequence seq = obtain_sequence(spec, cfg, err);
  const ConstantDigits digits = compute_constant(seq, spec.digits);
  if (digits.certified_fraction_digits < spec.digits) {
    err << "millscale: certified " << digits.certified_fraction_digits << " of " << spec.digits
        << " requested digits; more terms are needed for more\n";
  }
  if (spec.out_path) {
    write_digit_files(*spec.out_path, digits, seq);
  }
  if (spec.format == Format::Json) out << dump(to_json(digits, seq));
  else emit_text(digits, seq, out);
  out.flush();
  return kExitOk;
}

inline int run_verify(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  const MillsConfig cfg = mills_config(spec);
  for (const auto& w : config_warnings(cfg)) err << "millscale: warning: " << w << "\n";
  const MillsSequence seq = obtain_sequence(spec, cfg, err);
  // The last index is bracketed by construction but cannot be pinned
  // numerically without the following term; the gate stops before it.
  const std::size_t gate = seq.size() - 1;
  std::size_t t = spec.digits;
  RoundTripReport report = roundtrip(compute_constant(seq, t), seq);
  if (!report.passed_through(gate)) {
    t = std::max<std::size_t>(2 * t, 1);
    err << "millscale: round trip inconclusive; retrying with " << t << " digits\n";
    report = roundtrip(compute_constant(seq, t), seq);
  }
  Sink sink(spec, out);
  if (spec.format == Format::Json) sink.stream() << dump(to_json(report, gate));
  else emit_text(report, gate, sink.stream());
  sink.finish();
  report.require_through(gate);
  return kExitOk;
}

inline int run_lemma(const CommandSpec& spec, std::ostream& out, std::ostream&) {
  PrimalityConfig pcfg;
  pcfg.extra_mr_rounds = spec.mr_rounds;
  pcfg.rng_seed = spec.rng_seed;
  const LemmaReport report =
      check_lemma1(spec.c, Natural::from_decimal(spec.n_min), Natural::from_decimal(spec.n_max), pcfg);
  Sink sink(spec, out);
  if (spec.format == Format::Json) sink.stream() << dump(to_json(report));
  else emit_text(report, sink.stream());
  sink.finish();
  return report.violations.empty() ? kExitOk : kExitDomain;
}

inline int run_bench(const CommandSpec& spec, std::ostream& out, std::ostream&) {
  PrimalityConfig pcfg;
  pcfg.extra_mr_rounds = spec.mr_rounds;
  pcfg.rng_seed = spec.rng_seed;
  json runs = json::array();
  Sink sink(spec, out);
  for (unsigned k : spec.bench_k) {
    unsigned long digits = 1;
    for (unsigned i = 0; i < k; ++i) digits *= 10;
    const Natural x = Natural::pow10(digits);
    const SearchResult r = prev_prime(x, pcfg);
    const Natural gap = x - r.prime;
    if (spec.format == Format::Json) {
      runs.push_back(json{{"k", k}, {"digits", digits}, {"gap_below_10^digits", gap.to_decimal()},
                          {"status", to_json(r.status)}, {"stats", to_json(r.stats)}});
    } else {
      sink.stream() << "digits=" << digits << " gap=" << gap << " candidates=" << r.stats.candidates_examined
                    << " sieve_eliminated=" << r.stats.sieve_eliminated << " mr_tests=" << r.stats.mr_tests_run
                    << " elapsed=" << r.stats.elapsed_seconds << "s\n" << std::flush;
    }
  }
  if (spec.format == Format::Json) sink.stream() << dump(json{{"command", "bench"}, {"runs", std::move(runs)}});
  sink.finish();
  return kExitOk;
}

}  // namespace detail

/// Executes a validated spec. Every library error becomes a one-line
/// diagnostic on `err` and a nonzero exit code.
inline int run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  if (auto problem = validate(spec)) {
    err << "millscale: " << *problem << "\n";
    return kExitUsage;
  }
  try {
    switch (spec.subcommand) {
      case Subcommand::Sequence: return detail::run_sequence(spec, out, err);
      case Subcommand::Constant: return detail::run_constant(spec, out, err);
      case Subcommand::Verify: return detail::run_verify(spec, out, err);
      case Subcommand::LemmaCheck: return detail::run_lemma(spec, out, err);
      case Subcommand::Bench: return detail::run_bench(spec, out, err);
    }
  } catch (const Error& e) {
    err << "millscale: error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace millscale::cli
