#pragma once

// Fibonacci numbers: exact values for small indices, residues by fast
// doubling for any index, and gcd(n, F_n) without materializing F_n.

#include <bit>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibgcd/arith.hpp"

namespace fibgcd {

using bigint = boost::multiprecision::cpp_int;

inline constexpr u64 kDefaultExactCap = 10'000;

/// (F_index, F_{index+1}) reduced modulo `modulus`.
struct FibPairMod {
    u64 index = 0;
    u64 modulus = 1;
    u64 f_n = 0;
    u64 f_n1 = 0;

    /// The pair for index + 1.
    [[nodiscard]] constexpr FibPairMod step() const noexcept {
        return {index + 1, modulus, f_n1, add_mod(f_n, f_n1, modulus)};
    }

    friend bool operator==(const FibPairMod&, const FibPairMod&) = default;
};

/// F_n exactly, with F_0 = 0.
inline bigint fib_exact(u64 n, u64 cap = kDefaultExactCap) {
    if (n > cap)
        throw capacity_error("fib_exact: index " + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap));
    bigint a = 0, b = 1;
    for (u64 i = 0; i < n; ++i) {
        bigint t = a + b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

namespace detail {

template <class MulMod>
constexpr FibPairMod fib_doubling(u64 n, u64 m, MulMod mul) noexcept {
    u64 a = 0;      // F_j
    u64 b = 1 % m;  // F_{j+1}
    for (int bit = std::bit_width(n) - 1; bit >= 0; --bit) {
        u64 c = mul(a, sub_mod(add_mod(b, b, m), a, m));
        u64 d = add_mod(mul(a, a), mul(b, b), m);
        if ((n >> bit) & 1) {
            a = d;
            b = add_mod(c, d, m);
        } else {
            a = c;
            b = d;
        }
    }
    return {n, m, a, b};
}

} // namespace detail

/// Fast doubling: F_{2j} = F_j (2F_{j+1} - F_j), F_{2j+1} = F_j^2 + F_{j+1}^2.
/// O(log n) multiplications; any modulus below 2^64.
constexpr FibPairMod fib_mod(u64 n, u64 m) {
    if (m == 0) throw precondition_error("fib_mod: modulus must be >= 1");
    if (m <= (u64{1} << 32))
        return detail::fib_doubling(n, m, [m](u64 x, u64 y) { return x * y % m; });
    return detail::fib_doubling(n, m, [m](u64 x, u64 y) { return mul_mod(x, y, m); });
}

/// gcd(n, F_n) = gcd(n, F_n mod n).
constexpr u64 gcd_n_fib_n(u64 n) {
    if (n == 0) throw precondition_error("gcd_n_fib_n: n must be >= 1");
    return std::gcd(n, fib_mod(n, n).f_n);
}

} // namespace fibgcd
