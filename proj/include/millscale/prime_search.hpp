#pragma once

// Extremal prime location around a big integer x: the greatest prime below x
// and the least prime above x.
//
// Candidates are odd integers walked away from x in blocks. Each block is
// sieved by the odd primes up to trial_division_bound (and never beyond
// sqrt of the block edge), and survivors are classified in order, so a
// returned prime is always preceded by candidates proven composite either by
// a small factor or by a failed strong test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "millscale/error.hpp"
#include "millscale/natural.hpp"
#include "millscale/primality.hpp"

namespace millscale {

struct SearchStats {
  std::uint64_t candidates_examined = 0;  // odd candidates dispositioned
  std::uint64_t sieve_eliminated = 0;
  std::uint64_t mr_tests_run = 0;  // calls into classify
  double elapsed_seconds = 0.0;

  SearchStats& operator+=(const SearchStats& o) {
    candidates_examined += o.candidates_examined;
    sieve_eliminated += o.sieve_eliminated;
    mr_tests_run += o.mr_tests_run;
    elapsed_seconds += o.elapsed_seconds;
    return *this;
  }
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SearchResult {
  Natural prime;
  PrimalityStatus status;
  SearchStats stats;
};

namespace detail {

/// Odd candidates per block: max(1024, 4 ln x).
inline std::size_t search_block_size(const Natural& x) {
  const double ln_x = static_cast<double>(x.bit_length()) * std::log(2.0);
  return std::max<std::size_t>(1024, static_cast<std::size_t>(std::ceil(4.0 * ln_x)));
}

enum class Direction { Down, Up };

/// Scans odd candidates start, start -/+ 2, ... (start odd, >= 3) for the
/// first prime-positive one. A downward walk that passes 3 returns nullopt.
inline std::optional<SearchResult> scan_odd(const Natural& start, Direction dir,
                                            const PrimalityConfig& cfg,
                                            SearchStats& stats) {
  const auto bound = static_cast<std::uint32_t>(cfg.trial_division_bound.to_u64());
  const auto& primes = cached_primes(bound);
  const std::size_t block = search_block_size(start);

  Natural base = start;  // first candidate of the current block
  std::vector<bool> eliminated;
  for (;;) {
    std::size_t len = block;
    if (dir == Direction::Down) {
      // Candidates base - 2i must stay >= 3.
      const Natural span = (base - Natural(3)) / Natural(2) + Natural(1);
      if (span < Natural(len)) len = static_cast<std::size_t>(span.to_u64());
      if (len == 0) return std::nullopt;
    }
    // Primes above sqrt(edge) cannot divide a composite in the block. A prime
    // p only rules out multiples other than p itself.
    const Natural edge = dir == Direction::Up ? base + Natural(2 * (len - 1)) : base;
    const bool native = edge.fits_u64();
    std::uint64_t sieve_limit = bound;
    if (native) {
      const auto root = static_cast<std::uint64_t>(mpz_class(sqrt(edge.mpz())).get_ui());
      sieve_limit = std::min<std::uint64_t>(sieve_limit, root);
    }

    eliminated.assign(len, false);
    const std::uint64_t base64 = native ? base.to_u64() : 0;
    for (std::uint32_t p : primes) {
      if (p == 2) continue;
      if (p > sieve_limit) break;
      const std::uint64_t r = base.mod_u64(p);
      const std::uint64_t inv2 = (p + 1) / 2;
      // Down: base - 2i == 0 (mod p)  <=>  i == r / 2.
      // Up:   base + 2i == 0 (mod p)  <=>  i == -r / 2.
      std::uint64_t i0 = dir == Direction::Down ? (r * inv2) % p : ((p - r) % p * inv2) % p;
      for (std::uint64_t i = i0; i < len; i += p) {
        if (native) {
          const std::uint64_t cand = dir == Direction::Down ? base64 - 2 * i : base64 + 2 * i;
          if (cand == p) continue;
        }
        eliminated[i] = true;
      }
    }

    for (std::size_t i = 0; i < len; ++i) {
      ++stats.candidates_examined;
      if (eliminated[i]) {
        ++stats.sieve_eliminated;
        continue;
      }
      const Natural cand = dir == Direction::Down ? base - Natural(2 * i) : base + Natural(2 * i);
      ++stats.mr_tests_run;
      PrimalityStatus status = classify(cand, cfg);
      if (is_prime_positive(status)) return SearchResult{cand, std::move(status), stats};
    }
    base = dir == Direction::Down ? base - Natural(2 * len) : base + Natural(2 * len);
  }
}

}  // namespace detail

/// Greatest prime p < x. Requires x >= 3.
inline SearchResult prev_prime(const Natural& x, const PrimalityConfig& cfg = {}) {
  if (x < Natural(3)) throw InvalidArgument("prev_prime: x must be >= 3");
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SearchStats stats;
  auto finish = [&](SearchResult r) {
    r.stats = stats;
    r.stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  const Natural start = x.is_odd() ? x - Natural(2) : x - Natural(1);
  if (start >= Natural(3)) {
    if (auto hit = detail::scan_odd(start, detail::Direction::Down, cfg, stats)) {
      return finish(std::move(*hit));
    }
  }
  ++stats.candidates_examined;
  ++stats.mr_tests_run;
  return finish(SearchResult{Natural(2), classify(Natural(2), cfg), {}});
}

/// Least prime p > x. Requires x >= 1.
inline SearchResult next_prime(const Natural& x, const PrimalityConfig& cfg = {}) {
  if (x < Natural(1)) throw InvalidArgument("next_prime: x must be >= 1");
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SearchStats stats;
  SearchResult result;
  if (x == Natural(1)) {
    ++stats.candidates_examined;
    ++stats.mr_tests_run;
    result = SearchResult{Natural(2), classify(Natural(2), cfg), {}};
  } else {
    const Natural start = x.is_odd() ? x + Natural(2) : x + Natural(1);
    result = std::move(*detail::scan_odd(start, detail::Direction::Up, cfg, stats));
  }
  result.stats = stats;
  result.stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace millscale
