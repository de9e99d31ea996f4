#pragma once

// Empirical side: sieve the primes up to x and tabulate
// g(p) = gcd(p - 1, F_{p-1}) for each of them.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fibgcd/arith.hpp"
#include "fibgcd/classify.hpp"
#include "fibgcd/fib.hpp"

namespace fibgcd {

inline constexpr u64 kDefaultScanMax = 100'000'000ULL;
inline constexpr u64 kMinScanChunk = 1'000;

struct ScanReport {
    u64 x = 2;
    u64 prime_count = 0;
    /// k -> #(P_k n [1, x]); keys are the observed gcd values.
    std::map<u64, u64> histogram;
    u64 elapsed_ms = 0;
    u64 chunk_count = 0;

    friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

struct ScanOptions {
    u64 chunk = 1u << 16;
    unsigned threads = 1;
    u64 max_x = kDefaultScanMax;
};

/// gcd(p - 1, F_{p-1}) via residues modulo p - 1.
inline u64 shifted_prime_gcd(u64 p) {
    if (p < 2) throw precondition_error("shifted_prime_gcd: p must be prime");
    return gcd_n_fib_n(p - 1);
}

namespace detail {

inline void check_scan_args(u64 x, const ScanOptions& opts) {
    if (x < 2) throw precondition_error("scan: x must be >= 2");
    if (opts.chunk < kMinScanChunk)
        throw precondition_error("scan: chunk must be >= " + std::to_string(kMinScanChunk));
    if (x > opts.max_x)
        throw capacity_error("scan: x = " + std::to_string(x) + " exceeds maximum " +
                             std::to_string(opts.max_x));
}

/// Calls visit(p, g) for every prime p <= x, chunk by chunk. Chunk c covers
/// [2 + c*chunk, 2 + (c+1)*chunk - 1]; workers claim chunks from a shared
/// counter, and visit receives the worker index as its first argument.
template <class Visit>
u64 for_each_shifted_gcd(u64 x, const ScanOptions& opts, Visit&& visit) {
    const auto base = sieve_primes(isqrt(x));
    const u64 chunks = (x - 1 + opts.chunk - 1) / opts.chunk;
    const unsigned threads = static_cast<unsigned>(std::clamp<u64>(opts.threads, 1, chunks));
    std::atomic<u64> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned t) {
        try {
            for (u64 c = next++; c < chunks; c = next++) {
                const u64 lo = 2 + c * opts.chunk;
                const u64 hi = std::min(x, lo + opts.chunk - 1);
                for (u64 p : sieve_segment(lo, hi, base)) visit(t, p, shifted_prime_gcd(p));
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return chunks;
}

} // namespace detail

/// Histogram of gcd(p - 1, F_{p-1}) over primes p <= x. Per-worker tables
/// are merged key-wise, so the result is independent of chunk size and
/// thread count.
inline ScanReport scan_primes(u64 x, const ScanOptions& opts = {}) {
    detail::check_scan_args(x, opts);
    const auto start = std::chrono::steady_clock::now();
    const unsigned threads = std::max(1u, opts.threads);
    std::vector<std::unordered_map<u64, u64>> local(threads);
    ScanReport report;
    report.x = x;
    report.chunk_count = detail::for_each_shifted_gcd(
        x, opts, [&](unsigned t, u64, u64 g) { ++local[t][g]; });
    for (const auto& table : local)
        for (const auto& [k, n] : table) {
            report.histogram[k] += n;
            report.prime_count += n;
        }
    report.elapsed_ms = static_cast<u64>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                             std::chrono::steady_clock::now() - start)
                                             .count());
    return report;
}

/// The primes p <= x with gcd(p - 1, F_{p-1}) = k, ascending.
inline std::vector<u64> primes_in_Pk(u64 x, u64 k, const ScanOptions& opts = {}) {
    detail::check_scan_args(x, opts);
    std::vector<std::vector<u64>> local(std::max(1u, opts.threads));
    detail::for_each_shifted_gcd(x, opts, [&](unsigned t, u64 p, u64 g) {
        if (g == k) local[t].push_back(p);
    });
    std::vector<u64> out;
    for (const auto& v : local) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// #(P_k n [1, x]) / pi(x); 0 when k was not observed.
inline double empirical_density(const ScanReport& report, u64 k) noexcept {
    if (report.prime_count == 0) return 0.0;
    auto it = report.histogram.find(k);
    if (it == report.histogram.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(report.prime_count);
}

/// True when every prime factor of n divides k.
constexpr bool support_divides(u64 n, u64 k) noexcept {
    if (k == 0) return false;
    for (u64 t = std::gcd(n, k); t > 1; t = std::gcd(n, k)) {
        while (n % t == 0) n /= t;
    }
    return n == 1;
}

/// p in R_k: k | g and every prime factor of g divides k, g = gcd(p-1, F_{p-1}).
inline bool membership_Rk(u64 p, u64 k) {
    if (!is_prime(p)) throw precondition_error("membership_Rk: " + std::to_string(p) + " is not prime");
    if (k == 0) throw precondition_error("membership_Rk: k must be >= 1");
    const u64 g = shifted_prime_gcd(p);
    return g % k == 0 && support_divides(g, k);
}

/// #{k <= x : gcd(ell(k), F_{ell(k)}) = k}, the counting function of the
/// set of values of gcd(n, F_n).
inline u64 count_A(u64 x, EntryPointCache& cache = default_cache()) {
    if (x == 0) throw precondition_error("count_A: x must be >= 1");
    u64 n = 0;
    for (u64 k = 1; k <= x; ++k)
        if (gcd_ell_test(k, cache) == k) ++n;
    return n;
}

/// #{k <= x : r(P_k) > 0}.
inline u64 count_K(u64 x, EntryPointCache& cache = default_cache()) {
    if (x == 0) throw precondition_error("count_K: x must be >= 1");
    u64 n = 0;
    for (u64 k = 1; k <= x; ++k)
        if (in_K(k, cache)) ++n;
    return n;
}

} // namespace fibgcd
