#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "millscale/error.hpp"

namespace millscale {

/// Arbitrary-precision nonnegative integer backed by GMP.
///
/// The only way to leave the nonnegative range is subtraction, which throws
/// instead of wrapping. Everything else is exact at any size.
class Natural {
 public:
  Natural() = default;

  template <std::integral T>
  Natural(T v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      if (v < 0) throw InvalidArgument("Natural: negative value");
      value_ = static_cast<long>(v);
    } else {
      value_ = static_cast<unsigned long>(v);
    }
  }

  explicit Natural(mpz_class v) : value_(std::move(v)) {
    if (sgn(value_) < 0) throw InvalidArgument("Natural: negative value");
  }

  /// Parses a string of decimal digits (no sign, no whitespace).
  static Natural from_decimal(std::string_view text) {
    if (text.empty()) throw InvalidArgument("Natural: empty decimal string");
    for (char ch : text) {
      if (ch < '0' || ch > '9') {
        throw InvalidArgument("Natural: invalid decimal string '" +
                              std::string(text) + "'");
      }
    }
    Natural out;
    out.value_.set_str(std::string(text), 10);
    return out;
  }

  /// 10^k.
  static Natural pow10(unsigned long k) {
    Natural out;
    mpz_ui_pow_ui(out.value_.get_mpz_t(), 10, k);
    return out;
  }

  std::string to_decimal() const { return value_.get_str(10); }

  const mpz_class& mpz() const noexcept { return value_; }
  mpz_srcptr raw() const noexcept { return value_.get_mpz_t(); }

  std::size_t decimal_digits() const { return to_decimal().size(); }
  std::size_t bit_length() const {
    return sgn(value_) == 0 ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2);
  }
  bool is_zero() const noexcept { return sgn(value_) == 0; }
  bool is_odd() const noexcept { return mpz_odd_p(value_.get_mpz_t()) != 0; }
  bool fits_u64() const noexcept { return value_.fits_ulong_p(); }
  std::uint64_t to_u64() const {
    if (!fits_u64()) throw InvalidArgument("Natural: value exceeds 64 bits");
    return value_.get_ui();
  }

  /// Remainder modulo a native word, without allocating.
  std::uint64_t mod_u64(std::uint64_t m) const {
    return mpz_fdiv_ui(value_.get_mpz_t(), m);
  }

  friend Natural operator+(const Natural& a, const Natural& b) {
    return Natural(mpz_class(a.value_ + b.value_));
  }
  friend Natural operator-(const Natural& a, const Natural& b) {
    if (a.value_ < b.value_) throw InvalidArgument("Natural: subtraction underflow");
    return Natural(mpz_class(a.value_ - b.value_));
  }
  friend Natural operator*(const Natural& a, const Natural& b) {
    return Natural(mpz_class(a.value_ * b.value_));
  }
  /// Floor division.
  friend Natural operator/(const Natural& a, const Natural& b) {
    if (b.is_zero()) throw InvalidArgument("Natural: division by zero");
    return Natural(mpz_class(a.value_ / b.value_));
  }
  friend Natural operator%(const Natural& a, const Natural& b) {
    if (b.is_zero()) throw InvalidArgument("Natural: division by zero");
    return Natural(mpz_class(a.value_ % b.value_));
  }
  Natural& operator+=(const Natural& b) { value_ += b.value_; return *this; }
  Natural& operator-=(const Natural& b) { return *this = *this - b; }
  Natural& operator*=(const Natural& b) { value_ *= b.value_; return *this; }

  friend bool operator==(const Natural& a, const Natural& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Natural& n) {
    return os << n.to_decimal();
  }

 private:
  mpz_class value_;
};

inline Natural pow(const Natural& base, unsigned long exponent) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.raw(), exponent);
  return Natural(std::move(out));
}

}  // namespace millscale
