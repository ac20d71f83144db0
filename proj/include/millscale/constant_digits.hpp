#pragma once

// Certified digits of the constant attached to a Mills-type sequence.
//
// With k terms and P = P_k, the constant lies in
//   ceiling: [(P - 1)^(c^-k), P^(c^-k)]
//   floor:   [P^(c^-k), (P + 1)^(c^-k)]
// Both ends are computed with directed rounding, and a fractional digit
// count t is certified when floor(lo * 10^t) == floor(hi * 10^t).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "millscale/error.hpp"
#include "millscale/fixed_arith.hpp"
#include "millscale/mills_sequence.hpp"
#include "millscale/natural.hpp"

namespace millscale {

class Interval {
 public:
  Interval(FixedDec lo, FixedDec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.frac_digits() != hi_.frac_digits()) {
      throw InvalidArgument("Interval: bounds must share frac_digits");
    }
    if (hi_ < lo_) throw InvalidArgument("Interval: lo > hi");
  }

  const FixedDec& lo() const noexcept { return lo_; }
  const FixedDec& hi() const noexcept { return hi_; }
  std::size_t frac_digits() const noexcept { return lo_.frac_digits(); }
  Natural width_ulps() const { return hi_.mantissa() - lo_.mantissa(); }

 private:
  FixedDec lo_;
  FixedDec hi_;
};

/// Where a set of digits came from.
struct Provenance {
  unsigned c = 3;
  Variant variant = Variant::Ceiling;
  Natural seed = Natural(2);
  std::size_t terms_used = 0;
};

struct ConstantDigits {
  Provenance provenance;
  std::size_t requested_digits = 0;
  std::size_t certified_fraction_digits = 0;
  std::string digits;  // "1." followed by certified_fraction_digits digits
  Interval interval;
};

/// Directed-rounded enclosure of the constant from the whole sequence, with
/// t fractional digits.
inline Interval constant_interval(const MillsSequence& seq, unsigned c, Variant variant, std::size_t t,
                                  std::optional<std::size_t> guard = std::nullopt) {
  if (seq.empty()) throw EmptySequence("constant_interval: empty sequence");
  if (seq.c != c || seq.variant != variant) {
    throw VariantMismatch("constant_interval: sequence was built with different (c, variant)");
  }
  const auto depth = static_cast<unsigned>(seq.size());
  const Natural& p = seq.back().value;
  if (variant == Variant::Ceiling) {
    return Interval(iter_root(p - Natural(1), c, depth, t, Rounding::Down, guard),
                    iter_root(p, c, depth, t, Rounding::Up, guard));
  }
  return Interval(iter_root(p, c, depth, t, Rounding::Down, guard),
                  iter_root(p + Natural(1), c, depth, t, Rounding::Up, guard));
}

/// Greatest t <= requested_t on which both ends of the interval agree after
/// flooring at t fractional digits.
inline ConstantDigits certify(const Interval& interval, std::size_t requested_t,
                              const Provenance& provenance = {}) {
  auto agree = [&](std::size_t t) {
    return interval.lo().floor_scaled(t) == interval.hi().floor_scaled(t);
  };
  if (!agree(0)) throw NoCommonPrefix("certify: integer parts of the interval differ");
  // agree() is monotone: true up to t*, false beyond.
  std::size_t good = 0, bad = requested_t + 1;
  while (bad - good > 1) {
    const std::size_t mid = good + (bad - good) / 2;
    (agree(mid) ? good : bad) = mid;
  }
  FixedDec value(interval.lo().floor_scaled(good), good);
  return ConstantDigits{provenance, requested_t, good, value.to_string(), interval};
}

/// Default precision: what the last term can support, plus 20.
inline std::size_t default_requested_digits(const MillsSequence& seq) {
  if (seq.empty()) throw EmptySequence("default_requested_digits: empty sequence");
  return seq.back().decimal_digits + 20;
}

/// Fractional digits computed beyond the requested count so that the final
/// directed roundings do not eat into the certified prefix.
inline constexpr std::size_t kIntervalSlackDigits = 10;

/// Interval plus certification, recomputed once from scratch with doubled
/// guard digits when fewer than requested_t digits come out.
inline ConstantDigits compute_constant(const MillsSequence& seq, std::size_t requested_t) {
  const auto depth = static_cast<unsigned>(seq.size());
  const Provenance prov{seq.c, seq.variant, seq.seed, seq.size()};
  const std::size_t t = requested_t + kIntervalSlackDigits;
  std::size_t guard = default_root_guard(seq.c, std::max(depth, 1u));
  ConstantDigits best = certify(constant_interval(seq, seq.c, seq.variant, t, guard), requested_t, prov);
  if (best.certified_fraction_digits < requested_t) {
    guard *= 2;
    ConstantDigits retry = certify(constant_interval(seq, seq.c, seq.variant, t, guard), requested_t, prov);
    if (retry.certified_fraction_digits > best.certified_fraction_digits) best = std::move(retry);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Round trip
// ---------------------------------------------------------------------------

enum class RoundTripOutcome {
  Pass,          // both directed powers map to P_n
  Mismatch,      // both agree, on a different integer
  Insufficient,  // the directed powers straddle an integer
};

inline const char* to_string(RoundTripOutcome o) {
  switch (o) {
    case RoundTripOutcome::Pass: return "pass";
    case RoundTripOutcome::Mismatch: return "mismatch";
    case RoundTripOutcome::Insufficient: return "insufficient";
  }
  return "insufficient";
}

struct RoundTripEntry {
  std::size_t index = 0;
  Natural expected;
  Natural from_lo;  // ceil (or floor) of lo^(c^n), rounded down
  Natural from_hi;  // ceil (or floor) of hi^(c^n), rounded up
  RoundTripOutcome outcome = RoundTripOutcome::Insufficient;
};

struct RoundTripReport {
  Provenance provenance;
  std::size_t frac_digits = 0;
  std::vector<RoundTripEntry> entries;

  /// True when every index in [1, upto] passed.
  bool passed_through(std::size_t upto) const {
    for (const auto& e : entries) {
      if (e.index <= upto && e.outcome != RoundTripOutcome::Pass) return false;
    }
    return true;
  }
  bool all_passed() const { return passed_through(entries.size()); }

  /// Throws for the first failing index in [1, upto]: PrecisionInsufficient
  /// for a straddle, Error for a mismatch.
  void require_through(std::size_t upto) const {
    for (const auto& e : entries) {
      if (e.index > upto) break;
      if (e.outcome == RoundTripOutcome::Insufficient) throw PrecisionInsufficient(e.index);
      if (e.outcome == RoundTripOutcome::Mismatch) {
        throw Error("round trip mismatch at index " + std::to_string(e.index) + ": got " +
                    e.from_lo.to_decimal() + ", expected " + e.expected.to_decimal());
      }
    }
  }
};

/// Raises both ends of the interval to c^n for n = 1..min(terms_used,
/// seq.size()) and maps them back to integers with ceil (ceiling variant) or
/// floor (floor variant).
///
/// At n = terms_used the outcome is always Insufficient: the interval ends
/// are the k-th approximants themselves, so lo^(c^k) <= P_k - 1 (resp. P_k)
/// and hi^(c^k) >= P_k (resp. P_k + 1). Pinning P_k needs digits computed
/// from at least k + 1 terms.
inline RoundTripReport roundtrip(const ConstantDigits& digits, const MillsSequence& seq) {
  const Provenance& prov = digits.provenance;
  if (prov.c != seq.c || prov.variant != seq.variant) {
    throw VariantMismatch("roundtrip: digits and sequence differ in (c, variant)");
  }
  const std::size_t t = digits.interval.frac_digits();
  RoundTripReport report{prov, t, {}};
  Natural exponent(1);
  const std::size_t last = std::min(prov.terms_used, seq.size());
  for (std::size_t n = 1; n <= last; ++n) {
    exponent *= Natural(prov.c);
    const FixedDec lo_pow = pow_fixed(digits.interval.lo(), exponent, t, Rounding::Down);
    const FixedDec hi_pow = pow_fixed(digits.interval.hi(), exponent, t, Rounding::Up);
    RoundTripEntry e;
    e.index = n;
    e.expected = seq.records[n - 1].value;
    e.from_lo = prov.variant == Variant::Ceiling ? lo_pow.ceil() : lo_pow.floor();
    e.from_hi = prov.variant == Variant::Ceiling ? hi_pow.ceil() : hi_pow.floor();
    if (e.from_lo != e.from_hi) {
      e.outcome = RoundTripOutcome::Insufficient;
    } else {
      e.outcome = e.from_lo == e.expected ? RoundTripOutcome::Pass : RoundTripOutcome::Mismatch;
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace millscale
