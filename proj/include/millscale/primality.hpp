#pragma once

/**
 * Layered primality decision for arbitrary-precision integers.
 *
 *   1. trial division by every prime up to `trial_division_bound`; when the
 *      bound passes sqrt(n) this alone is a proof;
 *   2. below `deterministic_threshold`, strong tests to the bases
 *      2, 3, ..., 41, which admit no strong pseudoprime below
 *      3317044064679887385961981;
 *   3. above it, Baillie-PSW (strong base-2 test plus strong Lucas test
 *      with Selfridge parameters) followed by `extra_mr_rounds` strong tests
 *      to bases drawn from a generator seeded with `rng_seed`.
 *
 * Every decision is a pure function of (n, config).
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "millscale/error.hpp"
#include "millscale/natural.hpp"

namespace millscale {

// ---------------------------------------------------------------------------
// Small primes
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::uint32_t> eratosthenes(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  // Odd-only bitmap: index i stands for 2i+1.
  const std::size_t half = static_cast<std::size_t>(limit) / 2 + 1;
  std::vector<bool> composite(half, false);
  primes.push_back(2);
  for (std::size_t i = 1; i < half; ++i) {
    const std::uint64_t p = 2 * i + 1;
    if (p > limit) break;
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= limit; q += 2 * p) composite[q / 2] = true;
  }
  return primes;
}

/// Primes <= bound, computed once per distinct bound and shared afterwards.
inline const std::vector<std::uint32_t>& cached_primes(std::uint32_t bound) {
  static std::mutex mutex;
  static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(bound);
  if (it == cache.end()) it = cache.emplace(bound, eratosthenes(bound)).first;
  return it->second;
}

}  // namespace detail

/// Primes p <= limit in ascending order.
inline std::vector<Natural> small_prime_sieve(const Natural& limit) {
  if (limit < Natural(2)) throw InvalidArgument("small_prime_sieve: limit must be >= 2");
  if (limit > Natural(std::uint64_t{1} << 32)) {
    throw LimitTooLarge("small_prime_sieve: limit exceeds 2^32");
  }
  const std::uint64_t lim = limit.to_u64();
  std::vector<std::uint32_t> raw;
  if (lim == (std::uint64_t{1} << 32)) {
    raw = detail::eratosthenes(0xFFFFFFFFu);
  } else {
    raw = detail::eratosthenes(static_cast<std::uint32_t>(lim));
  }
  std::vector<Natural> out;
  out.reserve(raw.size());
  for (auto p : raw) out.emplace_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and status
// ---------------------------------------------------------------------------

/// Strong tests to the first 13 primes are a proof below this value.
inline const Natural& deterministic_witness_limit() {
  static const Natural limit = Natural::from_decimal("3317044064679887385961981");
  return limit;
}

inline constexpr std::array<unsigned, 13> kDeterministicBases = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

struct PrimalityConfig {
  Natural trial_division_bound = Natural(10000);
  Natural deterministic_threshold = Natural(mpz_class("18446744073709551616"));  // 2^64
  unsigned extra_mr_rounds = 16;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (trial_division_bound < Natural(2)) {
      throw InvalidArgument("trial_division_bound must be >= 2");
    }
    if (trial_division_bound > Natural(std::uint64_t{0xFFFFFFFFu})) {
      throw LimitTooLarge("trial_division_bound exceeds 2^32 - 1");
    }
    if (deterministic_threshold > deterministic_witness_limit()) {
      throw InvalidArgument(
          "deterministic_threshold exceeds the range covered by the fixed witness set");
    }
  }
};

enum class ProofMethod { TrialDivision, DeterministicWitnessSet };

enum class CompositeEvidence {
  None,             // n < 2
  Factor,           // witness is a nontrivial divisor
  MillerRabinBase,  // witness is a base failing the strong test
  Lucas,            // failed the strong Lucas test (no numeric witness)
};

struct Composite {
  std::optional<Natural> witness;
  CompositeEvidence evidence = CompositeEvidence::None;
  friend bool operator==(const Composite&, const Composite&) = default;
};

struct ProvenPrime {
  ProofMethod method = ProofMethod::TrialDivision;
  friend bool operator==(const ProvenPrime&, const ProvenPrime&) = default;
};

struct ProbablePrime {
  bool bpsw = true;
  unsigned extra_rounds = 0;
  std::uint64_t rng_seed = 0;
  friend bool operator==(const ProbablePrime&, const ProbablePrime&) = default;
};

using PrimalityStatus = std::variant<Composite, ProvenPrime, ProbablePrime>;

inline bool is_prime_positive(const PrimalityStatus& s) {
  return !std::holds_alternative<Composite>(s);
}

inline const char* to_string(ProofMethod m) {
  return m == ProofMethod::TrialDivision ? "trial-division" : "deterministic-witness-set";
}

inline const char* to_string(CompositeEvidence e) {
  switch (e) {
    case CompositeEvidence::None: return "none";
    case CompositeEvidence::Factor: return "factor";
    case CompositeEvidence::MillerRabinBase: return "miller-rabin-base";
    case CompositeEvidence::Lucas: return "strong-lucas";
  }
  return "none";
}

/// One-word-ish label used in text output, e.g. "proven(trial-division)".
inline std::string describe(const PrimalityStatus& s) {
  if (const auto* c = std::get_if<Composite>(&s)) {
    std::string out = "composite";
    if (c->witness) out += "(" + std::string(to_string(c->evidence)) + " " + c->witness->to_decimal() + ")";
    return out;
  }
  if (const auto* p = std::get_if<ProvenPrime>(&s)) {
    return std::string("proven(") + to_string(p->method) + ")";
  }
  const auto& q = std::get<ProbablePrime>(s);
  return "probable(bpsw+" + std::to_string(q.extra_rounds) + " rounds, seed " +
         std::to_string(q.rng_seed) + ")";
}

// ---------------------------------------------------------------------------
// Native-word kernels
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Strong probable-prime test of odd n > 2 to base a.
inline bool strong_probable_prime64(std::uint64_t n, std::uint64_t a) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  std::uint64_t x = powmod64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Big-integer tests
// ---------------------------------------------------------------------------

/// Strong probable-prime test of odd n > 2 to base a (a taken mod n; a base
/// congruent to 0 passes vacuously).
inline bool strong_probable_prime(const Natural& n, const Natural& a) {
  const mpz_class& nn = n.mpz();
  mpz_class base = a.mpz() % nn;
  if (base == 0) return true;
  mpz_class nm1 = nn - 1;
  mpz_class d = nm1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), nn.get_mpz_t());
  if (x == 1 || x == nm1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    mpz_mul(x.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), nn.get_mpz_t());
    if (x == nm1) return true;
  }
  return false;
}

/// Strong Lucas probable-prime test, Selfridge method A (P = 1, Q = (1-D)/4
/// with D the first of 5, -7, 9, -11, ... having Jacobi symbol -1).
///
/// Requires odd n > 2 that is not a perfect square.
inline bool strong_lucas_probable_prime(const Natural& n) {
  const mpz_class& nn = n.mpz();
  long d_param = 5;
  for (;;) {
    const int j = mpz_si_kronecker(d_param, nn.get_mpz_t());
    if (j == -1) break;
    if (j == 0) {
      // gcd(D, n) > 1: composite unless n divides |D| itself.
      if (mpz_cmp_ui(nn.get_mpz_t(), static_cast<unsigned long>(std::labs(d_param))) != 0) return false;
    }
    d_param = d_param > 0 ? -(d_param + 2) : -(d_param - 2);
    if (std::labs(d_param) > 1'000'000) {
      throw InvalidArgument("strong_lucas_probable_prime: no Selfridge parameter (perfect square?)");
    }
  }
  const long q_param = (1 - d_param) / 4;

  mpz_class d = nn + 1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  mpz_class dd = d_param;
  mpz_class q = q_param;
  mpz_mod(q.get_mpz_t(), q.get_mpz_t(), nn.get_mpz_t());
  mpz_class u = 1, v = 1, qk = q, tmp;

  auto halve = [&nn](mpz_class& x) {
    if (mpz_odd_p(x.get_mpz_t())) x += nn;
    mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
  };
  auto reduce = [&nn](mpz_class& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), nn.get_mpz_t()); };

  const mp_bitcnt_t bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  for (mp_bitcnt_t i = bits - 1; i-- > 0;) {
    u *= v;
    reduce(u);
    v = v * v - 2 * qk;
    reduce(v);
    qk *= qk;
    reduce(qk);
    if (mpz_tstbit(d.get_mpz_t(), i)) {
      tmp = u + v;  // P = 1
      v = dd * u + v;
      reduce(tmp);
      reduce(v);
      halve(tmp);
      halve(v);
      u = tmp;
      qk *= q;
      reduce(qk);
    }
  }
  if (u == 0 || v == 0) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    v = v * v - 2 * qk;
    reduce(v);
    if (v == 0) return true;
    qk *= qk;
    reduce(qk);
  }
  return false;
}

namespace detail {

inline PrimalityStatus classify_u64(std::uint64_t n, const PrimalityConfig& cfg) {
  const auto bound = static_cast<std::uint32_t>(cfg.trial_division_bound.to_u64());
  for (std::uint32_t p : cached_primes(bound)) {
    if (static_cast<unsigned __int128>(p) * p > n) return ProvenPrime{ProofMethod::TrialDivision};
    if (n % p == 0) {
      if (n == p) return ProvenPrime{ProofMethod::TrialDivision};
      return Composite{Natural(p), CompositeEvidence::Factor};
    }
  }
  for (unsigned a : kDeterministicBases) {
    if (a >= n) break;
    if (!strong_probable_prime64(n, a)) return Composite{Natural(a), CompositeEvidence::MillerRabinBase};
  }
  return ProvenPrime{ProofMethod::DeterministicWitnessSet};
}

/// Uniform-ish base in [2, n-2]; n > 4.
inline Natural random_base(std::mt19937_64& gen, const Natural& n) {
  const std::size_t words = n.bit_length() / 64 + 2;
  mpz_class r = 0;
  for (std::size_t i = 0; i < words; ++i) {
    r <<= 64;
    r += mpz_class(static_cast<unsigned long>(gen()));
  }
  mpz_class span = n.mpz() - 3;
  r %= span;
  r += 2;
  return Natural(std::move(r));
}

}  // namespace detail

inline PrimalityStatus classify(const Natural& n, const PrimalityConfig& cfg = {}) {
  cfg.validate();
  if (n < Natural(2)) return Composite{};
  if (n.fits_u64() && n < cfg.deterministic_threshold) return detail::classify_u64(n.to_u64(), cfg);

  const auto bound = static_cast<std::uint32_t>(cfg.trial_division_bound.to_u64());
  const bool small = n.fits_u64();
  const std::uint64_t n64 = small ? n.to_u64() : 0;
  for (std::uint32_t p : detail::cached_primes(bound)) {
    if (small && static_cast<unsigned __int128>(p) * p > n64) {
      return ProvenPrime{ProofMethod::TrialDivision};
    }
    if (n.mod_u64(p) == 0) {
      if (small && n64 == p) return ProvenPrime{ProofMethod::TrialDivision};
      return Composite{Natural(p), CompositeEvidence::Factor};
    }
  }

  if (n < cfg.deterministic_threshold) {
    for (unsigned a : kDeterministicBases) {
      if (Natural(a) >= n) break;
      if (!strong_probable_prime(n, Natural(a))) {
        return Composite{Natural(a), CompositeEvidence::MillerRabinBase};
      }
    }
    return ProvenPrime{ProofMethod::DeterministicWitnessSet};
  }

  if (!strong_probable_prime(n, Natural(2))) return Composite{Natural(2), CompositeEvidence::MillerRabinBase};
  if (mpz_perfect_square_p(n.raw())) {
    return Composite{Natural(mpz_class(sqrt(n.mpz()))), CompositeEvidence::Factor};
  }
  if (!strong_lucas_probable_prime(n)) return Composite{std::nullopt, CompositeEvidence::Lucas};
  std::mt19937_64 gen(cfg.rng_seed);
  const unsigned rounds = n > Natural(4) ? cfg.extra_mr_rounds : 0;
  for (unsigned round = 0; round < rounds; ++round) {
    Natural a = detail::random_base(gen, n);
    if (!strong_probable_prime(n, a)) return Composite{std::move(a), CompositeEvidence::MillerRabinBase};
  }
  return ProbablePrime{true, cfg.extra_mr_rounds, cfg.rng_seed};
}

inline bool is_prime(const Natural& n, const PrimalityConfig& cfg = {}) {
  return is_prime_positive(classify(n, cfg));
}

/// Re-runs the single check recorded in a Composite status. Returns true when
/// that check alone confirms n is composite.
inline bool witness_confirms(const Natural& n, const Composite& c) {
  switch (c.evidence) {
    case CompositeEvidence::None:
      return n < Natural(2);
    case CompositeEvidence::Factor:
      return c.witness && *c.witness > Natural(1) && *c.witness < n &&
             (n % *c.witness).is_zero();
    case CompositeEvidence::MillerRabinBase:
      return c.witness && n.is_odd() && n > Natural(2) && !strong_probable_prime(n, *c.witness);
    case CompositeEvidence::Lucas:
      return n.is_odd() && n > Natural(2) && !mpz_perfect_square_p(n.raw()) &&
             !strong_lucas_probable_prime(n);
  }
  return false;
}

}  // namespace millscale
