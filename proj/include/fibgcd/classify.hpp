#pragma once

// Decision procedures for A_k = {n : gcd(n, F_n) = k} being nonempty and for
// the relative density of P_k = {p : gcd(p - 1, F_{p-1}) = k} being positive.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibgcd/arith.hpp"
#include "fibgcd/fib.hpp"
#include "fibgcd/rank.hpp"

namespace fibgcd {

inline constexpr u64 kDefaultClassifyCap = 100'000'000ULL;

/// AkEmpty: no n has gcd(n, F_n) = k, so P_k is empty.
/// Degenerate: A_k is nonempty but P_k is contained in {2}. For k > 1 this
/// means P_k is empty; for k = 1 the prime 2 would belong to P_1, but k = 1
/// is never degenerate.
/// PositiveDensity: P_k has positive relative density, i.e. k is in K.
enum class Verdict { AkEmpty, Degenerate, PositiveDensity };

constexpr std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::AkEmpty: return "AkEmpty";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::PositiveDensity: return "PositiveDensity";
    }
    return "unknown";
}

inline std::optional<Verdict> verdict_from_string(std::string_view s) noexcept {
    for (Verdict v : {Verdict::AkEmpty, Verdict::Degenerate, Verdict::PositiveDensity})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

struct Classification {
    u64 k = 1;
    Verdict verdict = Verdict::PositiveDensity;
    /// Prime p not dividing k with ell(pk) = 2 ell(k); set iff Degenerate.
    std::optional<u64> witness;
    /// gcd(ell(k), F_{ell(k)}); equals k unless AkEmpty.
    u64 gcd_attained = 1;
    u64 ell = 1;

    friend bool operator==(const Classification&, const Classification&) = default;
};

namespace detail {

inline void check_classify_cap(u64 k, u64 cap) {
    if (k == 0) throw precondition_error("k must be >= 1");
    if (k > cap)
        throw capacity_error("k = " + std::to_string(k) + " exceeds cap " + std::to_string(cap));
}

/// ell(pk) == target for a prime p not dividing k, using
/// ell(pk) = lcm(ell(p), ell(k)). Wide arithmetic keeps ell(p) exact even
/// when it would not fit in 64 bits.
inline bool ell_of_pk_equals(u64 p, u64 ell_k, u64 target, EntryPointCache& cache) {
    const u128 zp = z_of_prime(p, cache);
    const u128 ell_p = static_cast<u128>(p) / std::gcd<u64>(p, static_cast<u64>(zp)) * zp;
    if (target % ell_p != 0) return false;
    const u64 ep = static_cast<u64>(ell_p);
    return ep / std::gcd(ep, ell_k) * ell_k == target;
}

} // namespace detail

/// gcd(ell(k), F_{ell(k)}); equal to k exactly when A_k is nonempty.
inline u64 gcd_ell_test(u64 k, EntryPointCache& cache = default_cache(),
                        u64 cap = kDefaultClassifyCap) {
    detail::check_classify_cap(k, cap);
    return gcd_n_fib_n(ell_of(k, cache));
}

/// Sorted elements of {ell(k)} u {p ell(k) : p | k} u {ell(pk) : p prime,
/// p does not divide k, p <= prime_bound}. P_k consists of the primes
/// p = 1 mod ell(k) with p != 1 mod m for the remaining elements m.
inline std::vector<u64> generate_Mk(u64 k, u64 prime_bound, EntryPointCache& cache = default_cache(),
                                    u64 cap = kDefaultClassifyCap) {
    if (prime_bound < 2) throw precondition_error("generate_Mk: prime_bound must be >= 2");
    if (gcd_ell_test(k, cache, cap) != k)
        throw precondition_error("generate_Mk: A_" + std::to_string(k) + " is empty");
    const u64 ell_k = ell_of(k, cache);
    const Factorization fk = factorize(k);
    std::vector<u64> out{ell_k};
    for (const auto& pp : fk.factors) out.push_back(checked_mul(pp.prime, ell_k));
    for (u64 p : sieve_primes(prime_bound)) {
        if (k % p == 0) continue;
        out.push_back(ell_of(checked_mul(p, k), cache));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Candidate witnesses: if ell(pk) = 2 ell(k) with p not dividing k, then
/// ell(p) | 2 ell(k) and p | ell(p), so p divides 2 ell(k).
inline std::vector<u64> witness_candidates(u64 k, u64 ell_k) {
    std::vector<u64> out;
    for (const auto& pp : factorize(checked_mul(2, ell_k)).factors)
        if (k % pp.prime != 0) out.push_back(pp.prime);
    return out;
}

inline Classification classify(u64 k, EntryPointCache& cache = default_cache(),
                               u64 cap = kDefaultClassifyCap) {
    detail::check_classify_cap(k, cap);
    Classification c;
    c.k = k;
    c.ell = ell_of(k, cache);
    c.gcd_attained = gcd_n_fib_n(c.ell);
    if (c.gcd_attained != k) {
        c.verdict = Verdict::AkEmpty;
        return c;
    }
    if (c.ell % 2 == 1) {
        const u64 target = checked_mul(2, c.ell);
        for (u64 p : witness_candidates(k, c.ell)) {
            if (detail::ell_of_pk_equals(p, c.ell, target, cache)) {
                c.verdict = Verdict::Degenerate;
                c.witness = p;
                return c;
            }
        }
    }
    c.verdict = Verdict::PositiveDensity;
    return c;
}

inline bool in_K(u64 k, EntryPointCache& cache = default_cache(), u64 cap = kDefaultClassifyCap) {
    return classify(k, cache, cap).verdict == Verdict::PositiveDensity;
}

} // namespace fibgcd
