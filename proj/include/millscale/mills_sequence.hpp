#pragma once

// Prime sequences behind prime-representing constants.
//
// Ceiling variant: P_{n+1} is the greatest prime below P_n^c, and every step
// must satisfy (P_n - 1)^c + 1 < P_{n+1} < P_n^c.
// Floor variant: P_{n+1} is the least prime above P_n^c, and every step must
// satisfy P_n^c < P_{n+1} and P_{n+1} + 1 <= (P_n + 1)^c.
//
// Bounds are checked with exact integer comparisons on every term; a failed
// bound aborts construction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "millscale/error.hpp"
#include "millscale/natural.hpp"
#include "millscale/primality.hpp"
#include "millscale/prime_search.hpp"

namespace millscale {

enum class Variant { Ceiling, Floor };

inline const char* to_string(Variant v) { return v == Variant::Ceiling ? "ceiling" : "floor"; }

inline Variant parse_variant(std::string_view text) {
  if (text == "ceiling") return Variant::Ceiling;
  if (text == "floor") return Variant::Floor;
  throw InvalidArgument("unknown variant '" + std::string(text) + "' (expected ceiling or floor)");
}

struct MillsConfig {
  unsigned c = 3;
  Variant variant = Variant::Ceiling;
  Natural seed = Natural(2);
  std::size_t terms = 7;
  PrimalityConfig primality;
  bool allow_c2 = false;

  /// Structural checks only; seed primality is checked by build_sequence.
  void validate() const {
    if (c < 2) throw InvalidExponent("exponent c must be >= 2");
    if (c == 2 && !allow_c2) throw InvalidExponent("exponent c = 2 requires allow_c2");
    if (terms == 0) throw InvalidArgument("terms must be positive");
    primality.validate();
  }
};

/// Human-readable caveats attached to a configuration (currently only c = 2).
inline std::vector<std::string> config_warnings(const MillsConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.c == 2) {
    out.emplace_back("c = 2 lies outside the proven range c >= 3; bound checks may fail");
  }
  return out;
}

struct SequenceRecord {
  std::size_t index = 1;  // 1-based
  Natural value;
  PrimalityStatus status;
  bool lower_bound_ok = true;
  bool upper_bound_ok = true;
  std::size_t decimal_digits = 1;
  SearchStats stats;
};

/// Records together with the parameters that produced them.
struct MillsSequence {
  unsigned c = 3;
  Variant variant = Variant::Ceiling;
  Natural seed = Natural(2);
  std::vector<SequenceRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  const SequenceRecord& back() const { return records.back(); }

  /// First k records (k clamped to size()).
  MillsSequence prefix(std::size_t k) const {
    MillsSequence out{c, variant, seed, {}};
    out.records.assign(records.begin(), records.begin() + std::min(k, records.size()));
    return out;
  }

  std::vector<Natural> values() const {
    std::vector<Natural> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.value);
    return out;
  }
};

struct BoundCheck {
  bool lower = true;
  bool upper = true;
};

/// Sandwich bounds of `value` as the successor of `prev`.
inline BoundCheck check_bounds(const Natural& prev, const Natural& value, unsigned c, Variant variant) {
  BoundCheck out;
  if (variant == Variant::Ceiling) {
    out.lower = value > pow(prev - Natural(1), c) + Natural(1);
    out.upper = value < pow(prev, c);
  } else {
    out.lower = value > pow(prev, c);
    out.upper = value + Natural(1) <= pow(prev + Natural(1), c);
  }
  return out;
}

namespace detail {

inline void require_bounds(const SequenceRecord& rec) {
  if (!rec.lower_bound_ok) throw BoundViolation(rec.index, BoundSide::Lower);
  if (!rec.upper_bound_ok) throw BoundViolation(rec.index, BoundSide::Upper);
}

inline SequenceRecord seed_record(const MillsConfig& cfg) {
  PrimalityStatus status = classify(cfg.seed, cfg.primality);
  if (!is_prime_positive(status)) {
    throw SeedNotPrime("seed " + cfg.seed.to_decimal() + " is not prime");
  }
  return SequenceRecord{1, cfg.seed, std::move(status), true, true, cfg.seed.decimal_digits(), {}};
}

}  // namespace detail

using RecordCallback = std::function<void(const SequenceRecord&)>;

/// Appends terms to `seq` until it holds cfg.terms records.
inline void extend_sequence(MillsSequence& seq, const MillsConfig& cfg,
                            const RecordCallback& on_record = {}) {
  cfg.validate();
  if (seq.c != cfg.c || seq.variant != cfg.variant || seq.seed != cfg.seed) {
    throw VariantMismatch("extend_sequence: sequence parameters differ from configuration");
  }
  if (seq.empty()) {
    seq.records.push_back(detail::seed_record(cfg));
    if (on_record) on_record(seq.back());
  }
  while (seq.size() < cfg.terms) {
    const Natural& prev = seq.back().value;
    const Natural target = pow(prev, cfg.c);
    SearchResult found = cfg.variant == Variant::Ceiling ? prev_prime(target, cfg.primality)
                                                         : next_prime(target, cfg.primality);
    const BoundCheck bounds = check_bounds(prev, found.prime, cfg.c, cfg.variant);
    SequenceRecord rec{seq.size() + 1,
                       found.prime,
                       std::move(found.status),
                       bounds.lower,
                       bounds.upper,
                       found.prime.decimal_digits(),
                       found.stats};
    detail::require_bounds(rec);
    seq.records.push_back(std::move(rec));
    if (on_record) on_record(seq.back());
  }
}

inline MillsSequence build_sequence(const MillsConfig& cfg, const RecordCallback& on_record = {}) {
  MillsSequence seq{cfg.c, cfg.variant, cfg.seed, {}};
  extend_sequence(seq, cfg, on_record);
  return seq;
}

/// Rebuilds records from bare values (e.g. a cache), re-classifying every
/// term and re-checking every bound; no prime search is performed, so
/// extremality of cached terms is trusted. The first value must be the seed.
inline MillsSequence verify_values(const MillsConfig& cfg, const std::vector<Natural>& values) {
  cfg.validate();
  MillsSequence seq{cfg.c, cfg.variant, cfg.seed, {}};
  if (values.empty()) return seq;
  if (values.front() != cfg.seed) throw CacheError("first cached term differs from the seed");
  seq.records.push_back(detail::seed_record(cfg));
  for (std::size_t i = 1; i < values.size(); ++i) {
    PrimalityStatus status = classify(values[i], cfg.primality);
    if (!is_prime_positive(status)) {
      throw CacheError("cached term " + std::to_string(i + 1) + " is not prime");
    }
    const BoundCheck bounds = check_bounds(values[i - 1], values[i], cfg.c, cfg.variant);
    SequenceRecord rec{i + 1, values[i], std::move(status), bounds.lower, bounds.upper,
                       values[i].decimal_digits(), {}};
    detail::require_bounds(rec);
    seq.records.push_back(std::move(rec));
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Lemma check
// ---------------------------------------------------------------------------

struct LemmaMargin {
  Natural n;
  Natural prime;
  Natural slack_low;   // prime - ((N-1)^c + 1), 0 for a violation
  Natural slack_high;  // N^c - prime
};

struct LemmaReport {
  unsigned c = 3;
  Natural n_min;
  Natural n_max;
  std::vector<Natural> violations;  // ascending
  std::optional<LemmaMargin> worst_margin;
};

/// For every N in [n_min, n_max], takes p = prev_prime(N^c) as the witness
/// and records N as a violation iff p <= (N-1)^c + 1.
inline LemmaReport check_lemma1(unsigned c, const Natural& n_min, const Natural& n_max,
                                const PrimalityConfig& cfg = {}) {
  if (c < 3) throw InvalidExponent("check_lemma1: c must be >= 3");
  if (n_min < Natural(2) || n_min > n_max) throw InvalidRange("check_lemma1: require 2 <= n_min <= n_max");
  LemmaReport report{c, n_min, n_max, {}, std::nullopt};
  for (Natural n = n_min; n <= n_max; n += Natural(1)) {
    const Natural top = pow(n, c);
    const Natural low = pow(n - Natural(1), c) + Natural(1);
    Natural p = prev_prime(top, cfg).prime;
    const bool ok = p > low;
    if (!ok) report.violations.push_back(n);
    Natural slack_low = ok ? p - low : Natural(0);
    if (!report.worst_margin || slack_low < report.worst_margin->slack_low) {
      Natural slack_high = top - p;
      report.worst_margin = LemmaMargin{n, std::move(p), std::move(slack_low), std::move(slack_high)};
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Kuipers exponents
// ---------------------------------------------------------------------------

struct KuipersParams {
  unsigned long c = 0;
  unsigned long a = 0;  // 3c - 4
  unsigned long b = 0;  // 3c - 1
};

/// a = 3c - 4, b = 3c - 1, re-verifying c*a + 1 = b*(c - 1) and a/b >= 5/8.
inline KuipersParams kuipers_params(unsigned long c) {
  if (c < 3) throw InvalidExponent("kuipers_params: c must be >= 3");
  if (c > (1ul << 40)) throw InvalidExponent("kuipers_params: c too large");
  KuipersParams k{c, 3 * c - 4, 3 * c - 1};
  const Natural nc(c), na(k.a), nb(k.b);
  if (nc * na + Natural(1) != nb * (nc - Natural(1))) {
    throw Error("kuipers_params: identity c*a + 1 = b*(c - 1) failed");
  }
  if (Natural(8) * na < Natural(5) * nb) throw Error("kuipers_params: a/b < 5/8");
  return k;
}

}  // namespace millscale
