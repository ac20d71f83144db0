#include <gtest/gtest.h>

#include <random>

#include "millscale/fixed_arith.hpp"
#include "oracles.hpp"

using namespace millscale;

namespace {

FixedDec fx(const char* s) { return FixedDec::parse(s); }

Natural random_below_pow10(std::mt19937_64& gen, unsigned digits) {
  std::string s;
  for (unsigned i = 0; i < digits; ++i) s.push_back(static_cast<char>('0' + gen() % 10));
  return Natural::from_decimal(s);
}

// x^(c^-n) Down computed as a single c^n-th root of x * 10^(c^n * t).
Natural single_root_scaled(const Natural& x, unsigned c, unsigned n, std::size_t t) {
  unsigned long e = 1;
  for (unsigned i = 0; i < n; ++i) e *= c;
  mpz_class radicand = x.mpz() * mpz_class(Natural::pow10(e * t).mpz());
  return Natural(oracle::gmp_root(radicand, e));
}

}  // namespace

TEST(FixedDec, ParseAndRender) {
  EXPECT_EQ(fx("1.25").to_string(), "1.25");
  EXPECT_EQ(fx("1.25").frac_digits(), 2u);
  EXPECT_EQ(fx(".5").to_string(), "0.5");
  EXPECT_EQ(fx("0.007").to_string(), "0.007");
  EXPECT_EQ(fx("42").to_string(), "42");
  EXPECT_EQ(FixedDec(Natural(5), 3).to_string(), "0.005");
  EXPECT_THROW(fx("1."), InvalidArgument);
  EXPECT_THROW(fx("1.2x"), InvalidArgument);
}

TEST(FixedDec, RescaleIsDirected) {
  const FixedDec x = fx("1.23456");
  EXPECT_EQ(x.rescaled(3, Rounding::Down).to_string(), "1.234");
  EXPECT_EQ(x.rescaled(3, Rounding::Up).to_string(), "1.235");
  EXPECT_EQ(x.rescaled(8, Rounding::Up).to_string(), "1.23456000");
  EXPECT_EQ(fx("1.200").rescaled(1, Rounding::Up).to_string(), "1.2");
  EXPECT_EQ(fx("1.5").floor(), Natural(1));
  EXPECT_EQ(fx("1.5").ceil(), Natural(2));
  EXPECT_EQ(fx("3.000").ceil(), Natural(3));
  EXPECT_TRUE(fx("3.000").is_integer());
  EXPECT_EQ(fx("1.5"), fx("1.50000"));
  EXPECT_LT(fx("1.4999"), fx("1.5"));
  EXPECT_EQ(fx("12.345").floor_scaled(1), Natural(123));
  EXPECT_EQ(fx("12.345").floor_scaled(5), Natural(1234500));
}

TEST(IntRoot, Examples) {
  EXPECT_EQ(int_root(Natural(27), 3), Natural(3));
  EXPECT_EQ(int_root(Natural(26), 3), Natural(2));
  EXPECT_EQ(int_root(Natural(0), 3), Natural(0));
  EXPECT_EQ(int_root(Natural(1), 5), Natural(1));
  EXPECT_EQ(int_root(Natural(2) * Natural::pow10(30), 3), Natural(std::uint64_t{12599210498}));
  const Natural x = Natural(2) * Natural::pow10(36);
  const Natural y = int_root(x, 3);
  EXPECT_EQ(y, Natural(std::uint64_t{1259921049894}));
  EXPECT_LE(y * y * y, x);
  const Natural y1 = y + Natural(1);
  EXPECT_GT(y1 * y1 * y1, x);
  EXPECT_THROW(int_root(Natural(8), 1), InvalidArgument);
  EXPECT_THROW(int_root(Natural(8), 0), InvalidArgument);
}

TEST(IntRoot, DefiningInequalityOnRandomPairs) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 10000; ++i) {
    const unsigned r = 2 + static_cast<unsigned>(gen() % 30);
    const Natural x = random_below_pow10(gen, 1 + static_cast<unsigned>(gen() % 400));
    const Natural y = int_root(x, r);
    ASSERT_LE(pow(y, r), x) << x << " r=" << r;
    ASSERT_GT(pow(y + Natural(1), r), x) << x << " r=" << r;
    ASSERT_EQ(y.mpz(), oracle::gmp_root(x.mpz(), r));
  }
}

TEST(IntRoot, ExactPowersAndNeighbours) {
  std::mt19937_64 gen(81);
  for (int i = 0; i < 500; ++i) {
    const unsigned r = 2 + static_cast<unsigned>(gen() % 9);
    const Natural b = random_below_pow10(gen, 1 + static_cast<unsigned>(gen() % 80)) + Natural(2);
    const Natural p = pow(b, r);
    EXPECT_EQ(int_root(p, r), b);
    EXPECT_EQ(int_root(p - Natural(1), r), b - Natural(1));
    EXPECT_EQ(int_root(p + Natural(1), r), b);
  }
}

TEST(RootFixed, Examples) {
  EXPECT_EQ(root_fixed(fx("8"), 3, 5, Rounding::Down).to_string(), "2.00000");
  EXPECT_EQ(root_fixed(fx("8"), 3, 5, Rounding::Up).to_string(), "2.00000");
  const FixedDec down = root_fixed(fx("2"), 3, 10, Rounding::Down);
  const FixedDec up = root_fixed(fx("2"), 3, 10, Rounding::Up);
  EXPECT_EQ(down.to_string(), "1.2599210498");
  EXPECT_EQ(up.to_string(), "1.2599210499");
  // Derived from the integer root of the scaled radicand.
  EXPECT_EQ(down.mantissa(), int_root(Natural(2) * Natural::pow10(30), 3));
  // A radicand with more fractional digits than r * t_out.
  EXPECT_EQ(root_fixed(fx("0.0100000001"), 2, 2, Rounding::Down).to_string(), "0.10");
  EXPECT_EQ(root_fixed(fx("0.0100000001"), 2, 2, Rounding::Up).to_string(), "0.11");
  EXPECT_EQ(root_fixed(fx("0.01"), 2, 2, Rounding::Up).to_string(), "0.10");
}

TEST(RootFixed, DownIsGreatestAndUpIsNext) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 10000; ++i) {
    const unsigned r = 2 + static_cast<unsigned>(gen() % 4);
    const std::size_t tx = gen() % 13;
    const std::size_t t = gen() % 15;
    const FixedDec x(random_below_pow10(gen, 1 + static_cast<unsigned>(gen() % 20)), tx);
    const FixedDec d = root_fixed(x, r, t, Rounding::Down);
    const FixedDec u = root_fixed(x, r, t, Rounding::Up);
    ASSERT_EQ(d.frac_digits(), t);
    // y^r as an exact FixedDec with r*t fractional digits.
    const FixedDec dr(pow(d.mantissa(), r), r * t);
    const FixedDec dr1(pow(d.mantissa() + Natural(1), r), r * t);
    const FixedDec ur(pow(u.mantissa(), r), r * t);
    ASSERT_LE(dr, x);
    ASSERT_GT(dr1, x);
    ASSERT_GE(ur, x);
    ASSERT_TRUE(u.mantissa() == d.mantissa() || u.mantissa() == d.mantissa() + Natural(1));
    if (u.mantissa() == d.mantissa()) {
      ASSERT_EQ(dr, x);
    }
  }
}

TEST(IterRoot, Examples) {
  EXPECT_EQ(iter_root(Natural(1), 3, 7, 20, Rounding::Down).to_string(), "1.00000000000000000000");
  EXPECT_EQ(iter_root(Natural(1), 3, 7, 20, Rounding::Up).to_string(), "1.00000000000000000000");
  EXPECT_EQ(iter_root(Natural(8), 3, 1, 5, Rounding::Down).to_string(), "2.00000");
  EXPECT_EQ(iter_root(Natural(8), 3, 1, 5, Rounding::Up).to_string(), "2.00000");

  const FixedDec d = iter_root(Natural(336), 3, 3, 12, Rounding::Down);
  const FixedDec u = iter_root(Natural(336), 3, 3, 12, Rounding::Up);
  EXPECT_EQ(d.to_string().substr(0, 4), "1.24");
  EXPECT_EQ(u.to_string().substr(0, 4), "1.24");
  // Single 27th root of 336 * 10^(27*12) is the exact Down answer.
  const Natural exact = single_root_scaled(Natural(336), 3, 3, 12);
  EXPECT_LE(d.mantissa(), exact);
  EXPECT_GE(u.mantissa(), exact);
  EXPECT_LE(u.mantissa() - d.mantissa(), Natural(2));
  EXPECT_THROW(iter_root(Natural(0), 3, 1, 5, Rounding::Down), InvalidArgument);
  EXPECT_THROW(iter_root(Natural(5), 3, 0, 5, Rounding::Down), InvalidArgument);
  EXPECT_THROW(iter_root(Natural(5), 1, 1, 5, Rounding::Down), InvalidArgument);
}

TEST(IterRoot, BracketsSingleRootOracle) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 300; ++i) {
    const unsigned c = 2 + static_cast<unsigned>(gen() % 4);
    const unsigned n = 1 + static_cast<unsigned>(gen() % 4);
    const std::size_t t = gen() % 13;
    const Natural x = Natural(1 + gen() % 1000000);
    const Natural exact = single_root_scaled(x, c, n, t);
    const FixedDec d = iter_root(x, c, n, t, Rounding::Down);
    const FixedDec u = iter_root(x, c, n, t, Rounding::Up);
    ASSERT_LE(d.mantissa(), exact);
    ASSERT_GE(u.mantissa(), exact);
    ASSERT_LE(u.mantissa(), exact + Natural(1));
  }
}

TEST(PowFixed, Examples) {
  EXPECT_EQ(pow_fixed(fx("2.00000"), Natural(3), 5, Rounding::Down).to_string(), "8.00000");
  EXPECT_EQ(pow_fixed(fx("2.00000"), Natural(3), 5, Rounding::Up).to_string(), "8.00000");
  const FixedDec lo = pow_fixed(fx("1.2599210498"), Natural(3), 8, Rounding::Down);
  const FixedDec hi = pow_fixed(fx("1.2599210499"), Natural(3), 8, Rounding::Up);
  EXPECT_LE(lo, fx("2"));
  EXPECT_EQ(lo.to_string().substr(0, 10), "1.99999999");
  EXPECT_GE(hi, fx("2"));
  EXPECT_EQ(pow_fixed(fx("1.5"), Natural(0), 3, Rounding::Down).to_string(), "1.000");
  EXPECT_EQ(pow_fixed(fx("0"), Natural(4), 3, Rounding::Up).to_string(), "0.000");
}

TEST(PowFixed, ExponentCeiling) {
  const Natural limit = pow(Natural(3), 40);
  EXPECT_EQ(default_max_exponent(), limit);
  EXPECT_THROW(pow_fixed(fx("1.0"), limit + Natural(1), 5, Rounding::Down), ExponentTooLarge);
  EXPECT_NO_THROW(pow_fixed(fx("1.0"), limit, 5, Rounding::Down));
  EXPECT_THROW(pow_fixed(fx("1.0"), Natural(100), 5, Rounding::Down, Natural(99)), ExponentTooLarge);
}

TEST(PowFixed, BracketsExactPower) {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t tx = gen() % 13;
    const std::size_t t = gen() % 13;
    const FixedDec x(random_below_pow10(gen, 1 + static_cast<unsigned>(gen() % 14)), tx);
    const unsigned long e = gen() % 60;
    const FixedDec exact(pow(x.mantissa(), e), tx * e);
    ASSERT_LE(pow_fixed(x, Natural(e), t, Rounding::Down), exact);
    ASSERT_GE(pow_fixed(x, Natural(e), t, Rounding::Up), exact);
  }
}

TEST(DirectedRounding, SandwichProperty) {
  std::mt19937_64 gen(2718);
  for (int i = 0; i < 2000; ++i) {
    const unsigned c = 2 + static_cast<unsigned>(gen() % 4);
    const unsigned n = 1 + static_cast<unsigned>(gen() % 4);
    const std::size_t tx = gen() % 13;
    const std::size_t t = gen() % 13;
    // x in [1, 10^6] with tx fractional digits.
    const Natural scale = Natural::pow10(tx);
    const Natural span = Natural(999999) * scale + Natural(1);
    const Natural m = scale + Natural(mpz_class(random_below_pow10(gen, 19 + tx).mpz() % span.mpz()));
    const FixedDec x(m, tx);
    const FixedDec d = iter_root(x, c, n, t, Rounding::Down);
    const FixedDec u = iter_root(x, c, n, t, Rounding::Up);
    ASSERT_LE(d, u);
    const Natural e = pow(Natural(c), n);
    ASSERT_LE(pow_fixed(d, e, t, Rounding::Down), x);
    ASSERT_GE(pow_fixed(u, e, t, Rounding::Up), x);
  }
}

TEST(DirectedRounding, ExtraDigitsNeverWiden) {
  std::mt19937_64 gen(31415);
  for (int i = 0; i < 500; ++i) {
    const unsigned c = 2 + static_cast<unsigned>(gen() % 4);
    const unsigned n = 1 + static_cast<unsigned>(gen() % 4);
    const std::size_t t = gen() % 20;
    const Natural x(1 + gen() % 1000000);
    const FixedDec d0 = iter_root(x, c, n, t, Rounding::Down);
    const FixedDec u0 = iter_root(x, c, n, t, Rounding::Up);
    const FixedDec d1 = iter_root(x, c, n, t + 10, Rounding::Down);
    const FixedDec u1 = iter_root(x, c, n, t + 10, Rounding::Up);
    const Natural w0 = (u0.mantissa() - d0.mantissa()) * Natural::pow10(10);
    const Natural w1 = u1.mantissa() - d1.mantissa();
    ASSERT_LE(w1, w0) << x << " c=" << c << " n=" << n << " t=" << t;
  }
}

TEST(DirectedRounding, Monotone) {
  std::mt19937_64 gen(1618);
  for (int i = 0; i < 1000; ++i) {
    const unsigned c = 2 + static_cast<unsigned>(gen() % 4);
    const unsigned n = 1 + static_cast<unsigned>(gen() % 4);
    const std::size_t t = gen() % 15;
    const std::uint64_t a = 1 + gen() % 1000000;
    const std::uint64_t b = a + gen() % 1000;
    for (Rounding mode : {Rounding::Down, Rounding::Up}) {
      ASSERT_LE(iter_root(Natural(a), c, n, t, mode), iter_root(Natural(b), c, n, t, mode));
    }
  }
}
