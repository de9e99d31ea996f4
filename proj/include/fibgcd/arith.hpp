#pragma once

// Elementary arithmetic: sieving, 64-bit primality, factorization and the
// multiplicative functions used by the density series.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fibgcd/errors.hpp"

namespace fibgcd {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kDefaultSieveMax = 1'000'000'000ULL;
inline constexpr u64 kDefaultTrialBound = 1'000'000ULL;
inline constexpr std::size_t kDefaultMaxDivisors = 1u << 20;

// ---------------------------------------------------------------------------
// Modular and checked arithmetic
// ---------------------------------------------------------------------------

constexpr u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

/// a + b mod m for a, b < m; safe for any m < 2^64.
constexpr u64 add_mod(u64 a, u64 b, u64 m) noexcept {
    return a >= m - b ? a - (m - b) : a + b;
}

/// a - b mod m for a, b < m.
constexpr u64 sub_mod(u64 a, u64 b, u64 m) noexcept {
    return a >= b ? a - b : a + (m - b);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline u64 checked_mul(u64 a, u64 b) {
    u64 out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw capacity_error("product " + std::to_string(a) + " * " + std::to_string(b) +
                             " exceeds 64 bits");
    return out;
}

inline u64 checked_pow(u64 base, unsigned exp) {
    u64 out = 1;
    for (unsigned i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

inline u64 checked_lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / std::gcd(a, b), b);
}

// ---------------------------------------------------------------------------
// Sieving
// ---------------------------------------------------------------------------

namespace detail {

/// Plain Eratosthenes flags for [0, limit]; used for the base primes.
inline std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline u64 isqrt(u64 n) noexcept {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace detail

/// Primes in [lo, hi] by sieving the segment with `base_primes`, which must
/// contain every prime up to sqrt(hi). Memory is O(hi - lo).
inline std::vector<u64> sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base_primes) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<u64>(lo, 2);
    std::vector<char> flags(hi - lo + 1, 1);
    for (u64 p : base_primes) {
        if (p * p > hi) break;
        u64 start = std::max(p * p, (lo + p - 1) / p * p);
        for (u64 j = start; j <= hi; j += p) flags[j - lo] = 0;
    }
    for (u64 i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(lo + i);
    return out;
}

/// Every prime <= limit, ascending. Segmented: memory is O(sqrt(limit) +
/// segment) besides the output.
inline std::vector<u64> sieve_primes(u64 limit, u64 max_limit = kDefaultSieveMax,
                                     u64 segment = 1u << 18) {
    if (limit > max_limit)
        throw capacity_error("sieve limit " + std::to_string(limit) + " exceeds maximum " +
                             std::to_string(max_limit));
    if (limit < 2) return {};
    const auto base = detail::simple_sieve(detail::isqrt(limit));
    std::vector<u64> primes;
    primes.reserve(static_cast<std::size_t>(1.3 * limit / std::max(1.0, std::log(double(limit)))));
    for (u64 lo = 2; lo <= limit; lo += segment) {
        u64 hi = std::min(limit, lo + segment - 1);
        auto seg = sieve_segment(lo, hi, base);
        primes.insert(primes.end(), seg.begin(), seg.end());
        if (hi == limit) break;
    }
    return primes;
}

/// Process-wide table of primes up to kDefaultTrialBound.
inline const std::vector<u64>& small_primes() {
    static const std::vector<u64> table = sieve_primes(kDefaultTrialBound);
    return table;
}

/// Möbius values for 0..limit (index 0 unused) via a linear sieve.
inline std::vector<std::int8_t> mobius_table(u64 limit) {
    std::vector<std::int8_t> mu(limit + 1, 1);
    std::vector<u64> primes;
    std::vector<char> composite(limit + 1, 0);
    mu[0] = 0;
    for (u64 i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            mu[i] = -1;
        }
        for (u64 p : primes) {
            if (i * p > limit) break;
            composite[i * p] = 1;
            if (i % p == 0) {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return mu;
}

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod prime^exponent, primes strictly ascending. value == 1 iff empty.
struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;

    friend bool operator==(const Factorization&, const Factorization&) = default;

    /// Product of the prime powers, with overflow checking.
    [[nodiscard]] u64 recompose() const {
        u64 out = 1;
        for (const auto& f : factors) out = checked_mul(out, checked_pow(f.prime, f.exponent));
        return out;
    }

    [[nodiscard]] bool divisible_by(u64 p) const noexcept {
        return std::any_of(factors.begin(), factors.end(),
                           [p](const PrimePower& f) { return f.prime == p; });
    }

    [[nodiscard]] unsigned exponent_of(u64 p) const noexcept {
        for (const auto& f : factors)
            if (f.prime == p) return f.exponent;
        return 0;
    }

    [[nodiscard]] bool squarefree() const noexcept {
        return std::all_of(factors.begin(), factors.end(),
                           [](const PrimePower& f) { return f.exponent == 1; });
    }
};

namespace detail {

inline u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return add_mod(mul_mod(x, x, n), c % n, n); };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        constexpr u64 block = 128;
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && g == 1; k += block) {
                ys = y;
                for (u64 i = 0; i < std::min(block, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_cofactor(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 r = isqrt(n);
    if (r * r == n) {
        split_cofactor(r, out);
        split_cofactor(r, out);
        return;
    }
    u64 d = pollard_brent(n);
    split_cofactor(d, out);
    split_cofactor(n / d, out);
}

inline Factorization collect(u64 value, std::vector<u64> primes) {
    std::sort(primes.begin(), primes.end());
    Factorization out{value, {}};
    for (u64 p : primes) {
        if (!out.factors.empty() && out.factors.back().prime == p)
            ++out.factors.back().exponent;
        else
            out.factors.push_back({p, 1});
    }
    return out;
}

} // namespace detail

/// Trial division by sieved primes up to `trial_bound`, then Brent-Pollard rho
/// with deterministic Miller-Rabin on the remaining cofactor. Trial division
/// stops early once p^3 exceeds the cofactor, since at most two prime factors
/// can then remain.
inline Factorization factorize(u64 n, u64 trial_bound = kDefaultTrialBound) {
    if (n == 0) throw precondition_error("factorize: n must be >= 1");
    std::vector<u64> primes;
    u64 rest = n;
    const auto& table = small_primes();
    for (u64 p : table) {
        if (p > trial_bound) break;
        if (static_cast<u128>(p) * p * p > rest) break;
        while (rest % p == 0) {
            primes.push_back(p);
            rest /= p;
        }
    }
    detail::split_cofactor(rest, primes);
    return detail::collect(n, std::move(primes));
}

/// Factorization of lcm(a, b) from the factorizations of a and b.
inline Factorization lcm_factorization(const Factorization& a, const Factorization& b) {
    Factorization out;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].prime < b.factors[j].prime))
            out.factors.push_back(a.factors[i++]);
        else if (i == a.factors.size() || b.factors[j].prime < a.factors[i].prime)
            out.factors.push_back(b.factors[j++]);
        else {
            out.factors.push_back({a.factors[i].prime, std::max(a.factors[i].exponent, b.factors[j].exponent)});
            ++i;
            ++j;
        }
    }
    out.value = out.recompose();
    return out;
}

// ---------------------------------------------------------------------------
// Multiplicative functions
// ---------------------------------------------------------------------------

inline int mobius(const Factorization& f) noexcept {
    if (!f.squarefree()) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

inline int mobius(u64 n) { return mobius(factorize(n)); }

inline u64 euler_phi(const Factorization& f) {
    u64 out = 1;
    for (const auto& [p, e] : f.factors) out = checked_mul(out, checked_pow(p, e - 1) * (p - 1));
    return out;
}

inline u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

/// Squarefree kernel: product of the distinct primes.
inline u64 radical(const Factorization& f) noexcept {
    u64 out = 1;
    for (const auto& pp : f.factors) out *= pp.prime;
    return out;
}

inline std::vector<u64> divisors(const Factorization& f, std::size_t max_count = kDefaultMaxDivisors) {
    std::size_t count = 1;
    for (const auto& pp : f.factors) {
        count *= pp.exponent + 1;
        if (count > max_count)
            throw capacity_error("divisor count of " + std::to_string(f.value) + " exceeds " +
                                 std::to_string(max_count));
    }
    std::vector<u64> out{1};
    out.reserve(count);
    for (const auto& [p, e] : f.factors) {
        const std::size_t prev = out.size();
        u64 pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < prev; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<u64> divisors(u64 n, std::size_t max_count = kDefaultMaxDivisors) {
    return divisors(factorize(n), max_count);
}

} // namespace fibgcd
