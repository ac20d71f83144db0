#pragma once

// Exact decimal fixed point with directed rounding.
//
// A FixedDec is mantissa / 10^frac_digits with both parts exact. Operations
// that cannot be exact take a Rounding and return a value on the requested
// side of the true result: Down <= exact <= Up, always. Chains of directed
// operations on nonnegative values stay sound because every step is
// monotone in its inputs.

#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "millscale/error.hpp"
#include "millscale/natural.hpp"

namespace millscale {

enum class Rounding { Down, Up };

class FixedDec {
 public:
  FixedDec() = default;
  FixedDec(Natural mantissa, std::size_t frac_digits)
      : mantissa_(std::move(mantissa)), frac_digits_(frac_digits) {}

  static FixedDec from_integer(Natural n) { return FixedDec(std::move(n), 0); }

  /// Parses "123", "1.25" or ".5"; the number of written fractional digits
  /// becomes frac_digits.
  static FixedDec parse(std::string_view text) {
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) return from_integer(Natural::from_decimal(text));
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (digits.empty()) digits = "0";
    if (frac.empty()) throw InvalidArgument("FixedDec: missing fractional digits");
    return FixedDec(Natural::from_decimal(digits + frac), frac.size());
  }

  const Natural& mantissa() const noexcept { return mantissa_; }
  std::size_t frac_digits() const noexcept { return frac_digits_; }

  /// Decimal rendering with exactly frac_digits digits after the point.
  std::string to_string() const {
    std::string m = mantissa_.to_decimal();
    if (frac_digits_ == 0) return m;
    if (m.size() <= frac_digits_) m.insert(0, frac_digits_ - m.size() + 1, '0');
    m.insert(m.size() - frac_digits_, 1, '.');
    return m;
  }

  /// floor(value * 10^t), exact.
  Natural floor_scaled(std::size_t t) const {
    if (t >= frac_digits_) return mantissa_ * Natural::pow10(t - frac_digits_);
    return mantissa_ / Natural::pow10(frac_digits_ - t);
  }

  Natural floor() const { return floor_scaled(0); }
  Natural ceil() const {
    Natural f = floor();
    return is_integer() ? f : f + Natural(1);
  }
  bool is_integer() const {
    return frac_digits_ == 0 || (mantissa_ % Natural::pow10(frac_digits_)).is_zero();
  }

  /// Same value expressed with t fractional digits, rounded in `mode` when
  /// digits are dropped.
  FixedDec rescaled(std::size_t t, Rounding mode) const {
    if (t >= frac_digits_) return FixedDec(mantissa_ * Natural::pow10(t - frac_digits_), t);
    const Natural div = Natural::pow10(frac_digits_ - t);
    Natural q = mantissa_ / div;
    if (mode == Rounding::Up && !(mantissa_ % div).is_zero()) q += Natural(1);
    return FixedDec(std::move(q), t);
  }

  friend bool operator==(const FixedDec& a, const FixedDec& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const FixedDec& a, const FixedDec& b) {
    if (a.frac_digits_ == b.frac_digits_) return a.mantissa_ <=> b.mantissa_;
    const std::size_t t = std::max(a.frac_digits_, b.frac_digits_);
    return a.rescaled(t, Rounding::Down).mantissa_ <=> b.rescaled(t, Rounding::Down).mantissa_;
  }

 private:
  Natural mantissa_;
  std::size_t frac_digits_ = 0;
};

// ---------------------------------------------------------------------------
// Integer roots
// ---------------------------------------------------------------------------

namespace detail {

inline mpz_class newton_root_step(const mpz_class& x, unsigned r, const mpz_class& y) {
  mpz_class yr1;
  mpz_pow_ui(yr1.get_mpz_t(), y.get_mpz_t(), r - 1);
  mpz_class next = x / yr1;
  next += (r - 1) * y;
  next /= r;
  return next;
}

/// floor(x^(1/r)) for x >= 2. The top half of the root comes from a recursive
/// call on x >> (r*k), so Newton starts with about half the bits correct.
inline mpz_class int_root_impl(const mpz_class& x, unsigned r) {
  const std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  const std::size_t root_bits = (bits + r - 1) / r;
  mpz_class y;
  if (root_bits <= 32) {
    y = 1;
    y <<= root_bits;  // y^r >= 2^bits > x
  } else {
    const std::size_t k = root_bits / 2;
    mpz_class top = x >> static_cast<mp_bitcnt_t>(r * k);
    y = int_root_impl(top, r) << static_cast<mp_bitcnt_t>(k);  // y <= root
  }
  // Any positive start lands at or above floor(root) after one step.
  y = newton_root_step(x, r, y);
  for (;;) {
    mpz_class next = newton_root_step(x, r, y);
    if (next >= y) break;
    y = std::move(next);
  }
  return y;
}

}  // namespace detail

/// floor(x^(1/r)): the unique y with y^r <= x < (y+1)^r.
inline Natural int_root(const Natural& x, unsigned r) {
  if (r < 2) throw InvalidArgument("int_root: r must be >= 2");
  if (x < Natural(2)) return x;
  mpz_class y = detail::int_root_impl(x.mpz(), r);
  // Termination above is by monotone descent; confirm the defining
  // inequality exactly before returning.
  mpz_class p;
  for (;;) {
    mpz_pow_ui(p.get_mpz_t(), y.get_mpz_t(), r);
    if (p > x.mpz()) { --y; continue; }
    mpz_class y1 = y + 1;
    mpz_pow_ui(p.get_mpz_t(), y1.get_mpz_t(), r);
    if (p <= x.mpz()) { y = std::move(y1); continue; }
    break;
  }
  return Natural(std::move(y));
}

/// r-th root of x with t_out fractional digits. Down is the greatest such
/// value y with y^r <= x; Up is Down when that is exact, else Down + 1 ulp.
inline FixedDec root_fixed(const FixedDec& x, unsigned r, std::size_t t_out, Rounding mode) {
  if (r < 2) throw InvalidArgument("root_fixed: r must be >= 2");
  // y = floor((m * 10^(r*t_out - t))^(1/r)); flooring the radicand first
  // does not change the floor of its root.
  const std::size_t scale = r * t_out;
  Natural radicand;
  bool radicand_exact = true;
  if (scale >= x.frac_digits()) {
    radicand = x.mantissa() * Natural::pow10(scale - x.frac_digits());
  } else {
    const Natural div = Natural::pow10(x.frac_digits() - scale);
    radicand = x.mantissa() / div;
    radicand_exact = (x.mantissa() % div).is_zero();
  }
  Natural y = int_root(radicand, r);
  if (mode == Rounding::Up && !(radicand_exact && pow(y, r) == radicand)) y += Natural(1);
  return FixedDec(std::move(y), t_out);
}

/// Guard digits carried by each stage of iter_root: 10 + ceil(log10(n*c)).
inline std::size_t default_root_guard(unsigned c, unsigned depth) {
  const double nc = static_cast<double>(c) * static_cast<double>(depth);
  return 10 + static_cast<std::size_t>(std::ceil(std::log10(std::max(nc, 1.0))));
}

/// x^(c^-depth) by depth successive c-th roots, each directed by `mode` and
/// carried at t_out + guard fractional digits, then rounded to t_out in the
/// same direction.
inline FixedDec iter_root(const FixedDec& x, unsigned c, unsigned depth, std::size_t t_out,
                          Rounding mode, std::optional<std::size_t> guard = std::nullopt) {
  if (c < 2) throw InvalidArgument("iter_root: c must be >= 2");
  if (depth < 1) throw InvalidArgument("iter_root: depth must be >= 1");
  if (x < FixedDec::from_integer(Natural(1))) throw InvalidArgument("iter_root: x must be >= 1");
  const std::size_t work = t_out + guard.value_or(default_root_guard(c, depth));
  FixedDec cur = x;
  for (unsigned stage = 0; stage < depth; ++stage) cur = root_fixed(cur, c, work, mode);
  return cur.rescaled(t_out, mode);
}

inline FixedDec iter_root(const Natural& x, unsigned c, unsigned depth, std::size_t t_out,
                          Rounding mode, std::optional<std::size_t> guard = std::nullopt) {
  return iter_root(FixedDec::from_integer(x), c, depth, t_out, mode, guard);
}

// ---------------------------------------------------------------------------
// Powers
// ---------------------------------------------------------------------------

/// Default ceiling on pow_fixed exponents: 3^40.
inline const Natural& default_max_exponent() {
  static const Natural limit = pow(Natural(3), 40);
  return limit;
}

/// x^e by binary exponentiation. Every product is rounded in `mode` to
/// t_out + guard digits (guard defaults to 10 + digits(e)), and the result
/// to t_out.
inline FixedDec pow_fixed(const FixedDec& x, const Natural& e, std::size_t t_out, Rounding mode,
                          const Natural& max_exponent = default_max_exponent(),
                          std::optional<std::size_t> guard = std::nullopt) {
  if (e > max_exponent) throw ExponentTooLarge("pow_fixed: exponent " + e.to_decimal() + " exceeds ceiling");
  const std::size_t work = t_out + guard.value_or(10 + e.decimal_digits());
  auto mul = [&](const FixedDec& a, const FixedDec& b) {
    return FixedDec(a.mantissa() * b.mantissa(), a.frac_digits() + b.frac_digits())
        .rescaled(work, mode);
  };
  FixedDec result(Natural::pow10(work), work);  // 1
  FixedDec base = x.rescaled(work, mode);
  const std::size_t bits = e.bit_length();
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.raw(), i)) result = mul(result, base);
    if (i + 1 < bits) base = mul(base, base);
  }
  return result.rescaled(t_out, mode);
}

}  // namespace millscale
