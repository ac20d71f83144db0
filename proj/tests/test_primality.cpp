#include <gtest/gtest.h>

#include <random>

#include "millscale/primality.hpp"
#include "oracles.hpp"

using namespace millscale;

namespace {

Natural random_natural(std::mt19937_64& gen, unsigned bits) {
  mpz_class r = 0;
  for (unsigned i = 0; i < bits; i += 64) {
    r <<= 64;
    r += mpz_class(static_cast<unsigned long>(gen()));
  }
  r >>= static_cast<mp_bitcnt_t>((bits + 63) / 64 * 64 - bits);
  mpz_setbit(r.get_mpz_t(), bits - 1);
  return Natural(std::move(r));
}

}  // namespace

TEST(SmallPrimeSieve, Examples) {
  const auto ten = small_prime_sieve(Natural(10));
  ASSERT_EQ(ten.size(), 4u);
  EXPECT_EQ(ten[0], Natural(2));
  EXPECT_EQ(ten[3], Natural(7));

  const auto two = small_prime_sieve(Natural(2));
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0], Natural(2));

  const auto million = small_prime_sieve(Natural(1000000));
  EXPECT_EQ(million.back(), Natural(999983));
  const auto table = oracle::prime_table(1000000);
  std::size_t expected = 0;
  for (auto v : table) expected += v;
  EXPECT_EQ(million.size(), expected);
}

TEST(SmallPrimeSieve, Errors) {
  EXPECT_THROW(small_prime_sieve(Natural(1)), InvalidArgument);
  EXPECT_THROW(small_prime_sieve(Natural((std::uint64_t{1} << 32) + 1)), LimitTooLarge);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(Natural(337)), PrimalityStatus(ProvenPrime{ProofMethod::TrialDivision}));
  EXPECT_EQ(classify(Natural(1)), PrimalityStatus(Composite{}));
  EXPECT_EQ(classify(Natural(0)), PrimalityStatus(Composite{}));

  const auto s341 = std::get<Composite>(classify(Natural(341)));
  EXPECT_EQ(s341.evidence, CompositeEvidence::Factor);
  EXPECT_EQ(*s341.witness, Natural(11));
}

TEST(Classify, Base2PseudoprimeCaughtByStrongTest) {
  // 341 = 11 * 31 satisfies 2^340 = 1 (mod 341) but not the strong test.
  PrimalityConfig cfg;
  cfg.trial_division_bound = Natural(2);
  const auto s = std::get<Composite>(classify(Natural(341), cfg));
  EXPECT_EQ(s.evidence, CompositeEvidence::MillerRabinBase);
  EXPECT_EQ(*s.witness, Natural(2));
  EXPECT_TRUE(witness_confirms(Natural(341), s));
}

TEST(Classify, AgreesWithSieveBelowOneMillion) {
  const auto table = oracle::prime_table(1000000);
  std::size_t mismatches = 0;
  for (std::uint64_t n = 0; n <= 1000000; ++n) {
    if (is_prime(Natural(n)) != static_cast<bool>(table[n])) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Classify, BpswPathAgreesWithSieve) {
  // Force everything past trial division by 2 into the probable-prime layer.
  PrimalityConfig cfg;
  cfg.trial_division_bound = Natural(2);
  cfg.deterministic_threshold = Natural(0);
  cfg.extra_mr_rounds = 2;
  const auto table = oracle::prime_table(200000);
  std::size_t mismatches = 0;
  for (std::uint64_t n = 0; n <= 200000; ++n) {
    const auto status = classify(Natural(n), cfg);
    if (is_prime_positive(status) != static_cast<bool>(table[n])) ++mismatches;
    if (n >= 5 && table[n]) {
      EXPECT_TRUE(std::holds_alternative<ProbablePrime>(status)) << n;
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Classify, NoProbablePrimeBelowThreshold) {
  PrimalityConfig cfg;
  cfg.deterministic_threshold = Natural(1000003);
  cfg.trial_division_bound = Natural(50);
  for (std::uint64_t n = 2; n < 1000003; n += 997) {
    EXPECT_FALSE(std::holds_alternative<ProbablePrime>(classify(Natural(n), cfg))) << n;
  }
  // Past 2^64 with the default threshold, large primes are only probable.
  const Natural m127 = pow(Natural(2), 127) - Natural(1);
  EXPECT_TRUE(std::holds_alternative<ProbablePrime>(classify(m127)));
}

TEST(Classify, DeterministicWitnessSetAboveTrialRange) {
  // 10^12 + 39 is prime and exceeds (10^4)^2, so trial division alone cannot
  // finish the proof.
  EXPECT_EQ(classify(Natural(std::uint64_t{1000000000039})),
            PrimalityStatus(ProvenPrime{ProofMethod::DeterministicWitnessSet}));
  // Beyond 2^64 but below the configured threshold the big-integer path
  // applies the same witness set.
  PrimalityConfig cfg;
  cfg.deterministic_threshold = deterministic_witness_limit();
  const Natural p = Natural::from_decimal("56062005704198360319209");
  EXPECT_EQ(classify(p, cfg), PrimalityStatus(ProvenPrime{ProofMethod::DeterministicWitnessSet}));
}

TEST(Classify, KnownLargeValues) {
  EXPECT_TRUE(is_prime(pow(Natural(2), 521) - Natural(1)));
  EXPECT_FALSE(is_prime(pow(Natural(2), 523) - Natural(1)));
  // Carmichael numbers and strong base-2 pseudoprimes.
  for (std::uint64_t n : {561ull, 1105ull, 1729ull, 2047ull, 3277ull, 4033ull, 3215031751ull}) {
    EXPECT_FALSE(is_prime(Natural(n))) << n;
  }
  // Product of two 100-digit primes located by GMP.
  auto gmp_next = [](const Natural& x) {
    mpz_class out;
    mpz_nextprime(out.get_mpz_t(), x.raw());
    return Natural(std::move(out));
  };
  const Natural a = gmp_next(Natural::pow10(99) + Natural(12345));
  const Natural b = gmp_next(Natural::pow10(99) * Natural(7));
  ASSERT_TRUE(is_prime(a));
  ASSERT_TRUE(is_prime(b));
  const auto s = std::get<Composite>(classify(a * b));
  EXPECT_TRUE(witness_confirms(a * b, s));
  // Perfect square of a prime above the trial range.
  const Natural sq = a * a;
  const auto sqs = std::get<Composite>(classify(sq));
  EXPECT_TRUE(witness_confirms(sq, sqs));
}

TEST(Classify, AgreesWithGmpOnRandomBigIntegers) {
  std::mt19937_64 gen(12345);
  for (unsigned bits : {80u, 200u, 700u}) {
    for (int i = 0; i < 300; ++i) {
      Natural n = random_natural(gen, bits);
      if (!n.is_odd()) n += Natural(1);
      EXPECT_EQ(is_prime(n), mpz_probab_prime_p(n.raw(), 30) != 0) << n;
      // GMP's next prime gives a prime-positive case for every composite one.
      mpz_class q;
      mpz_nextprime(q.get_mpz_t(), n.raw());
      EXPECT_TRUE(is_prime(Natural(q))) << q.get_str();
    }
  }
}

TEST(Classify, Determinism) {
  std::mt19937_64 gen(7);
  PrimalityConfig cfg;
  cfg.rng_seed = 99;
  for (int i = 0; i < 50; ++i) {
    const Natural n = random_natural(gen, 256);
    EXPECT_EQ(classify(n, cfg), classify(n, cfg));
  }
}

TEST(Classify, WitnessSoundness) {
  std::mt19937_64 gen(2024);
  PrimalityConfig bare;  // sends everything straight to the strong tests
  bare.trial_division_bound = Natural(2);
  std::size_t checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const Natural n = random_natural(gen, 8 + static_cast<unsigned>(gen() % 150));
    for (const PrimalityConfig& cfg : {PrimalityConfig{}, bare}) {
      const auto status = classify(n, cfg);
      if (const auto* c = std::get_if<Composite>(&status)) {
        ASSERT_TRUE(witness_confirms(n, *c)) << n << " " << describe(status);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(StrongTests, LucasPseudoprimesFailBase2) {
  // Strong Lucas pseudoprimes (Selfridge parameters).
  for (std::uint64_t n : {5459ull, 5777ull, 10877ull, 16109ull, 18971ull, 22499ull, 24569ull}) {
    EXPECT_TRUE(strong_lucas_probable_prime(Natural(n))) << n;
    EXPECT_FALSE(strong_probable_prime(Natural(n), Natural(2))) << n;
  }
  // Strong base-2 pseudoprimes.
  for (std::uint64_t n : {2047ull, 3277ull, 4033ull, 4681ull, 8321ull, 15841ull}) {
    EXPECT_TRUE(strong_probable_prime(Natural(n), Natural(2))) << n;
    EXPECT_FALSE(strong_lucas_probable_prime(Natural(n))) << n;
  }
}

TEST(StrongTests, NativeKernelMatchesBigInteger) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 3000; ++i) {
    const std::uint64_t n = gen() | 1 | (std::uint64_t{1} << 40);
    const std::uint64_t a = 2 + gen() % 1000;
    EXPECT_EQ(detail::strong_probable_prime64(n, a), strong_probable_prime(Natural(n), Natural(a))) << n;
  }
}

TEST(PrimalityConfig, Validation) {
  PrimalityConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.trial_division_bound = Natural(1);
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.deterministic_threshold = deterministic_witness_limit() + Natural(1);
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_THROW(classify(Natural(5), cfg), InvalidArgument);
}

TEST(Natural, DecimalRoundTripAndArithmetic) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    const Natural n = random_natural(gen, 1 + static_cast<unsigned>(gen() % 2000));
    EXPECT_EQ(Natural::from_decimal(n.to_decimal()), n);
  }
  EXPECT_EQ(Natural::from_decimal("0"), Natural(0));
  EXPECT_THROW(Natural::from_decimal("-3"), InvalidArgument);
  EXPECT_THROW(Natural::from_decimal(""), InvalidArgument);
  EXPECT_THROW(Natural(3) - Natural(4), InvalidArgument);
  EXPECT_THROW(Natural(-1), InvalidArgument);
  EXPECT_EQ(Natural::pow10(3), Natural(1000));
  EXPECT_EQ(pow(Natural(337), 3), Natural(38272753));
  EXPECT_EQ(Natural(38272753).decimal_digits(), 8u);
}
