#include <gtest/gtest.h>

#include <random>

#include "fibgcd/arith.hpp"
#include "oracles.hpp"

using namespace fibgcd;

TEST(Sieve, SmallLimits) {
    EXPECT_EQ(sieve_primes(10), (std::vector<u64>{2, 3, 5, 7}));
    EXPECT_TRUE(sieve_primes(1).empty());
    EXPECT_TRUE(sieve_primes(0).empty());
    EXPECT_EQ(sieve_primes(2), (std::vector<u64>{2}));
}

TEST(Sieve, MatchesTrialDivisionAcrossSegments) {
    // Small segment size forces many segment boundaries.
    const auto primes = sieve_primes(20'000, kDefaultSieveMax, 1000);
    std::vector<u64> expected;
    for (u64 n = 2; n <= 20'000; ++n)
        if (oracle::is_prime(n)) expected.push_back(n);
    EXPECT_EQ(primes, expected);
}

TEST(Sieve, PrimeCountTenToTheSeven) {
    // pi(10^7) = 664,579, cross-checked once with sympy.primepi.
    EXPECT_EQ(sieve_primes(10'000'000).size(), 664'579u);
}

TEST(Sieve, CapacityError) {
    EXPECT_THROW(sieve_primes(1001, 1000), capacity_error);
}

TEST(Primality, AgreesWithTrialDivision) {
    for (u64 n = 0; n < 50'000; ++n) ASSERT_EQ(is_prime(n), oracle::is_prime(n)) << n;
}

TEST(Primality, LargeKnownValues) {
    EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
    EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to bases 2, 3, 5, 7
    EXPECT_FALSE(is_prime(4294967297ULL));           // 641 * 6700417
}

TEST(Factorize, Examples) {
    EXPECT_TRUE(factorize(1).factors.empty());
    EXPECT_EQ(factorize(306).factors, (std::vector<PrimePower>{{2, 1}, {3, 2}, {17, 1}}));
    EXPECT_EQ(factorize(832040).factors,
              (std::vector<PrimePower>{{2, 3}, {5, 1}, {11, 1}, {31, 1}, {61, 1}}));
    EXPECT_THROW(factorize(0), precondition_error);
}

TEST(Factorize, HardSemiprimesAndSquares) {
    const u64 p = 1'000'000'007ULL, q = 998'244'353ULL;
    EXPECT_EQ(factorize(p * q).factors, (std::vector<PrimePower>{{q, 1}, {p, 1}}));
    EXPECT_EQ(factorize(p * p).factors, (std::vector<PrimePower>{{p, 2}}));
    const u64 r = 4'294'967'291ULL;  // largest prime below 2^32
    EXPECT_EQ(factorize(r * r).factors, (std::vector<PrimePower>{{r, 2}}));
}

TEST(Factorize, MatchesTrialDivisionSmall) {
    for (u64 n = 1; n <= 5'000; ++n) {
        const auto f = factorize(n);
        std::map<u64, unsigned> got;
        for (auto [p, e] : f.factors) got[p] = e;
        ASSERT_EQ(got, oracle::factor(n)) << n;
    }
}

TEST(Factorize, RandomRecomposition) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<u64> dist(1, 1'000'000'000'000ULL);
    for (int i = 0; i < 100'000; ++i) {
        const u64 n = dist(rng);
        const auto f = factorize(n);
        ASSERT_EQ(f.value, n);
        ASSERT_EQ(f.recompose(), n);
        for (std::size_t j = 0; j < f.factors.size(); ++j) {
            ASSERT_TRUE(is_prime(f.factors[j].prime));
            if (j) { ASSERT_LT(f.factors[j - 1].prime, f.factors[j].prime); }
        }
    }
}

TEST(Mobius, Examples) {
    EXPECT_EQ(mobius(1), 1);
    EXPECT_EQ(mobius(6), 1);
    EXPECT_EQ(mobius(12), 0);
    EXPECT_EQ(mobius(30), -1);
}

TEST(Mobius, TableMatchesOracle) {
    const auto mu = mobius_table(3'000);
    for (u64 n = 1; n <= 3'000; ++n) ASSERT_EQ(mu[n], oracle::mobius(n)) << n;
}

TEST(Mobius, DivisorSumIsIndicatorOfOne) {
    for (u64 n = 1; n <= 10'000; ++n) {
        long sum = 0;
        for (u64 d : divisors(n)) sum += mobius(d);
        ASSERT_EQ(sum, n == 1 ? 1 : 0) << n;
    }
}

TEST(EulerPhi, Examples) {
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(30), oracle::phi(30));
    EXPECT_EQ(euler_phi(30), 8u);
    EXPECT_EQ(euler_phi(153), 96u);
    EXPECT_EQ(euler_phi(153), oracle::phi(153));
}

TEST(EulerPhi, DivisorSumIsIdentity) {
    for (u64 n = 1; n <= 10'000; ++n) {
        u64 sum = 0;
        for (u64 d : divisors(n)) sum += euler_phi(d);
        ASSERT_EQ(sum, n);
    }
}

TEST(EulerPhi, MultiplicativeOnCoprimePairs) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<u64> dist(1, 1'000'000);
    int checked = 0;
    while (checked < 10'000) {
        const u64 a = dist(rng), b = dist(rng);
        if (std::gcd(a, b) != 1) continue;
        ASSERT_EQ(euler_phi(a * b), euler_phi(a) * euler_phi(b)) << a << ' ' << b;
        ++checked;
    }
}

TEST(Divisors, Examples) {
    EXPECT_EQ(divisors(1), (std::vector<u64>{1}));
    EXPECT_EQ(divisors(12), (std::vector<u64>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(divisors(153), oracle::divisors(153));
    EXPECT_EQ(divisors(153), (std::vector<u64>{1, 3, 9, 17, 51, 153}));
}

TEST(Divisors, CapacityError) {
    EXPECT_THROW(divisors(720720, 100), capacity_error);
}

TEST(Checked, OverflowIsReported) {
    EXPECT_THROW(checked_mul(u64{1} << 40, u64{1} << 30), capacity_error);
    EXPECT_THROW(checked_pow(10, 20), capacity_error);
    EXPECT_EQ(checked_lcm(4, 6), 12u);
}
