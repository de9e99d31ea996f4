#pragma once

// Self-check suite behind `fibgcd verify`: every module invariant, run at
// the documented ranges (or reduced ones in quick mode) against brute-force
// or exact-integer oracles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fibgcd/arith.hpp"
#include "fibgcd/classify.hpp"
#include "fibgcd/density.hpp"
#include "fibgcd/fib.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/scan.hpp"

namespace fibgcd {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    bool quick = false;
    unsigned threads = 1;
    std::vector<std::string> modules;  // empty: every module
};

namespace verify_detail {

/// Returns "" on success, else a description of the first failure.
using Check = std::function<std::string()>;

/// Least n >= 1 with m | F_n, by stepping the recurrence mod m.
inline u64 first_zero_index(u64 m) {
    FibPairMod s = fib_mod(1, m);
    while (s.f_n != 0) s = s.step();
    return s.index;
}

struct Scale {
    u64 mobius_n, recompose_count, coprime_pairs, fib_n, fib_m, ratio_m;
    u64 minimality_m, item3_m, item3_n, item5_m, item5_n, item6, item7_p, item8_m, item4_p;
    u64 scan_x, degenerate_k, positive_k, k_in_a, kp_p, witness_k, witness_p;
    u64 density_k_small, density_terms_small, zero_k, positive_density_k, density_terms;
    u64 rk_x, count_x_max;
};

constexpr Scale kFull{10'000, 100'000, 10'000, 500, 100, 300,
                      2'000, 500, 500, 200, 2'000, 300, 10'000, 100'000, 100'000,
                      1'000'000, 200, 50, 10'000, 100'000, 200, 1'000,
                      20, 1'000, 100, 50, 10'000,
                      100'000, 100'000};

constexpr Scale kQuick{1'000, 2'000, 1'000, 120, 40, 100,
                       300, 120, 120, 60, 400, 80, 1'000, 5'000, 5'000,
                       20'000, 40, 20, 500, 20'000, 40, 200,
                       6, 200, 20, 20, 1'000,
                       10'000, 10'000};

} // namespace verify_detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opts = {}) {
    using namespace verify_detail;
    const Scale& s = opts.quick ? kQuick : kFull;
    EntryPointCache cache;
    std::vector<std::tuple<std::string, std::string, Check>> checks;
    auto add = [&](std::string module, std::string name, Check c) {
        if (!opts.modules.empty() && std::find(opts.modules.begin(), opts.modules.end(), module) == opts.modules.end())
            return;
        checks.emplace_back(std::move(module), std::move(name), std::move(c));
    };

    // -- arith ---------------------------------------------------------------
    add("arith", "mobius_divisor_sum", [&]() -> std::string {
        for (u64 n = 1; n <= s.mobius_n; ++n) {
            long sum = 0;
            for (u64 d : divisors(n)) sum += mobius(d);
            if (sum != (n == 1 ? 1 : 0)) return "n = " + std::to_string(n);
        }
        return "";
    });
    add("arith", "phi_divisor_sum", [&]() -> std::string {
        for (u64 n = 1; n <= s.mobius_n; ++n) {
            u64 sum = 0;
            for (u64 d : divisors(n)) sum += euler_phi(d);
            if (sum != n) return "n = " + std::to_string(n);
        }
        return "";
    });
    add("arith", "factorize_recomposes", [&]() -> std::string {
        std::mt19937_64 rng(20240601);
        std::uniform_int_distribution<u64> dist(1, 1'000'000'000'000ULL);
        for (u64 i = 0; i < s.recompose_count; ++i) {
            const u64 n = dist(rng);
            const auto f = factorize(n);
            if (f.recompose() != n) return "n = " + std::to_string(n);
            for (std::size_t j = 0; j < f.factors.size(); ++j) {
                if (!is_prime(f.factors[j].prime)) return "non-prime factor of " + std::to_string(n);
                if (j > 0 && f.factors[j - 1].prime >= f.factors[j].prime) return "unsorted " + std::to_string(n);
            }
        }
        return "";
    });
    add("arith", "phi_multiplicative", [&]() -> std::string {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<u64> dist(1, 1'000'000);
        for (u64 i = 0; i < s.coprime_pairs;) {
            const u64 a = dist(rng), b = dist(rng);
            if (std::gcd(a, b) != 1) continue;
            ++i;
            if (euler_phi(a * b) != euler_phi(a) * euler_phi(b))
                return std::to_string(a) + ", " + std::to_string(b);
        }
        return "";
    });

    // -- fib -----------------------------------------------------------------
    add("fib", "fib_mod_matches_exact", [&]() -> std::string {
        for (u64 n = 0; n <= s.fib_n; ++n) {
            const bigint f = fib_exact(n);
            for (u64 m = 2; m <= s.fib_m; ++m)
                if (fib_mod(n, m).f_n != static_cast<u64>(f % m))
                    return "n = " + std::to_string(n) + ", m = " + std::to_string(m);
        }
        return "";
    });
    add("fib", "divisibility_law", [&]() -> std::string {
        std::vector<bigint> f(s.fib_n + 1);
        for (u64 n = 0; n <= s.fib_n; ++n) f[n] = fib_exact(n);
        for (u64 n = 1; n <= s.fib_n; ++n)
            for (u64 m = 1; m <= n; ++m)
                if (n % m == 0 && f[n] % f[m] != 0)
                    return "F_" + std::to_string(m) + " does not divide F_" + std::to_string(n);
        return "";
    });
    add("fib", "gcd_identity", [&]() -> std::string {
        for (u64 n = 1; n <= s.fib_n; ++n) {
            const bigint g = boost::multiprecision::gcd(bigint(n), fib_exact(n));
            if (g != gcd_n_fib_n(n)) return "n = " + std::to_string(n);
        }
        return "";
    });
    add("fib", "ratio_law", [&]() -> std::string {
        std::vector<bigint> f(s.ratio_m + 1);
        for (u64 n = 0; n <= s.ratio_m; ++n) f[n] = fib_exact(n);
        for (u64 m = 1; m <= s.ratio_m; ++m)
            for (u64 n = 1; n <= m; ++n) {
                if (m % n != 0) continue;
                const bigint g = boost::multiprecision::gcd(bigint(f[m] / f[n]), f[n]);
                if ((m / n) % g != 0)
                    return "m = " + std::to_string(m) + ", n = " + std::to_string(n);
            }
        return "";
    });

    // -- rank ----------------------------------------------------------------
    add("rank", "z_minimality", [&]() -> std::string {
        for (u64 m = 1; m <= s.minimality_m; ++m)
            if (z_of(m, cache) != first_zero_index(m)) return "m = " + std::to_string(m);
        return "";
    });
    add("rank", "divisibility_characterization", [&]() -> std::string {
        std::vector<bigint> f(s.item3_n + 1);
        for (u64 n = 0; n <= s.item3_n; ++n) f[n] = fib_exact(n);
        for (u64 m = 1; m <= s.item3_m; ++m) {
            const u64 z = z_of(m, cache);
            for (u64 n = 1; n <= s.item3_n; ++n)
                if ((f[n] % m == 0) != (n % z == 0))
                    return "m = " + std::to_string(m) + ", n = " + std::to_string(n);
        }
        return "";
    });
    add("rank", "gcd_characterization", [&]() -> std::string {
        std::vector<u64> g(s.item5_n + 1);
        for (u64 n = 1; n <= s.item5_n; ++n) g[n] = gcd_n_fib_n(n);
        for (u64 m = 1; m <= s.item5_m; ++m) {
            const u64 l = ell_of(m, cache);
            for (u64 n = 1; n <= s.item5_n; ++n)
                if ((g[n] % m == 0) != (n % l == 0))
                    return "m = " + std::to_string(m) + ", n = " + std::to_string(n);
        }
        return "";
    });
    add("rank", "lcm_morphism", [&]() -> std::string {
        for (u64 m = 1; m <= s.item6; ++m)
            for (u64 n = m; n <= s.item6; ++n)
                if (ell_of(std::lcm(m, n), cache) != std::lcm(ell_of(m, cache), ell_of(n, cache)))
                    return "m = " + std::to_string(m) + ", n = " + std::to_string(n);
        return "";
    });
    add("rank", "ell_of_prime", [&]() -> std::string {
        for (u64 p : sieve_primes(s.item7_p)) {
            const u64 expected = p == 5 ? 5 : z_of(p, cache) * p;
            if (ell_of(p, cache) != expected) return "p = " + std::to_string(p);
        }
        return "";
    });
    add("rank", "upper_bounds", [&]() -> std::string {
        for (u64 m = 1; m <= s.item8_m; ++m) {
            const auto r = entry_point(m, cache);
            if (r.z > 2 * m || r.ell > 2 * m * m) return "m = " + std::to_string(m);
        }
        return "";
    });
    add("rank", "legendre_divisibility", [&]() -> std::string {
        for (u64 p : sieve_primes(s.item4_p)) {
            if (p == 5) continue;
            const u64 n = legendre5(p) == 1 ? p - 1 : p + 1;
            if (n % z_of(p, cache) != 0) return "p = " + std::to_string(p);
        }
        return "";
    });

    // -- classify ------------------------------------------------------------
    ScanOptions scan_opts;
    scan_opts.threads = opts.threads;
    std::vector<u64> scan_gcds;  // g(p) for every prime p <= scan_x, by index
    std::vector<u64> scan_primes_list;
    auto ensure_scan = [&] {
        if (!scan_primes_list.empty()) return;
        scan_primes_list = sieve_primes(s.scan_x);
        scan_gcds.reserve(scan_primes_list.size());
        for (u64 p : scan_primes_list) scan_gcds.push_back(shifted_prime_gcd(p));
    };
    add("classify", "observed_gcds_attain", [&]() -> std::string {
        ensure_scan();
        std::set<u64> seen(scan_gcds.begin(), scan_gcds.end());
        for (u64 g : seen)
            if (classify(g, cache).verdict == Verdict::AkEmpty) return "g = " + std::to_string(g);
        return "";
    });
    add("classify", "degenerate_empirically_empty", [&]() -> std::string {
        ensure_scan();
        std::set<u64> seen;
        for (std::size_t i = 0; i < scan_primes_list.size(); ++i)
            if (scan_primes_list[i] > 2) seen.insert(scan_gcds[i]);
        for (u64 k = 2; k <= s.degenerate_k; ++k)
            if (classify(k, cache).verdict != Verdict::PositiveDensity && seen.count(k))
                return "k = " + std::to_string(k);
        return "";
    });
    add("classify", "positive_empirically_nonempty", [&]() -> std::string {
        ensure_scan();
        std::set<u64> seen(scan_gcds.begin(), scan_gcds.end());
        for (u64 k = 1; k <= s.positive_k; ++k)
            if (in_K(k, cache) && !seen.count(k)) return "k = " + std::to_string(k);
        return "";
    });
    add("classify", "K_subset_of_A", [&]() -> std::string {
        for (u64 k = 1; k <= s.k_in_a; ++k)
            if (in_K(k, cache) && gcd_ell_test(k, cache) != k) return "k = " + std::to_string(k);
        return "";
    });
    add("classify", "kp_in_K_for_p_in_P10", [&]() -> std::string {
        for (u64 p : primes_in_Pk(s.kp_p, 10, scan_opts))
            if (!in_K(10 * p, cache)) return "p = " + std::to_string(p);
        return "";
    });
    add("classify", "witness_search_complete", [&]() -> std::string {
        const auto primes = sieve_primes(s.witness_p);
        for (u64 k = 1; k <= s.witness_k; ++k) {
            const auto c = classify(k, cache);
            if (c.verdict == Verdict::AkEmpty || c.ell % 2 == 0) continue;
            bool brute = false;
            for (u64 p : primes)
                if (k % p != 0 && ell_of(p * k, cache) == 2 * c.ell) brute = true;
            if (brute != (c.verdict == Verdict::Degenerate)) return "k = " + std::to_string(k);
        }
        return "";
    });

    // -- density -------------------------------------------------------------
    SeriesOptions series;
    series.threads = opts.threads;
    add("density", "squarefree_only", [&]() -> std::string {
        for (u64 k = 1; k <= s.density_k_small; ++k) {
            const auto est = density_Pk(k, s.density_terms_small, cache, series);
            double all = 0.0;
            for (u64 d = 1; d <= s.density_terms_small; ++d)
                all += mobius(d) / static_cast<double>(euler_phi(ell_of(d * k, cache)));
            if (std::abs(all - est.value) > 1e-12) return "k = " + std::to_string(k);
        }
        return "";
    });
    add("density", "absolute_convergence_proxy", [&]() -> std::string {
        // Consecutive dyadic blocks of sum 1/phi(ell(d)), squarefree d,
        // shrink by a fixed factor.
        const unsigned first = opts.quick ? 8 : 11, last = opts.quick ? 12 : 16;
        double prev = dyadic_block(u64{1} << first, cache);
        for (unsigned a = first + 1; a <= last; ++a) {
            const double cur = dyadic_block(u64{1} << a, cache);
            if (cur > 0.85 * prev) return "block 2^" + std::to_string(a) + " = " + std::to_string(cur);
            prev = cur;
        }
        return "";
    });
    add("density", "zero_detection", [&]() -> std::string {
        for (u64 k = 1; k <= s.zero_k; ++k) {
            if (in_K(k, cache)) continue;
            const auto est = density_Pk(k, s.density_terms, cache, series);
            if (std::abs(est.value) > est.tail_estimate) return "k = " + std::to_string(k);
        }
        return "";
    });
    add("density", "positivity_detection", [&]() -> std::string {
        for (u64 k = 1; k <= s.positive_density_k; ++k) {
            if (!in_K(k, cache)) continue;
            const auto est = density_Pk(k, s.density_terms, cache, series);
            if (est.value <= est.tail_estimate) return "k = " + std::to_string(k);
        }
        return "";
    });
    add("density", "total_probability", [&]() -> std::string {
        ensure_scan();
        std::set<u64> seen(scan_gcds.begin(), scan_gcds.end());
        double rest = 0.0;
        for (u64 k : seen)
            if (k >= 2 && in_K(k, cache)) rest += density_Pk(k, s.density_terms_small, cache, series).value;
        const double p1 = density_Pk(1, s.density_terms, cache, series).value;
        if (std::abs(p1 - (1.0 - rest)) > 0.02) return "gap " + std::to_string(std::abs(p1 - (1.0 - rest)));
        return "";
    });
    add("density", "estimate_invariants", [&]() -> std::string {
        for (u64 k = 1; k <= s.density_k_small; ++k) {
            const auto e = density_Pk(k, s.density_terms_small, cache, series);
            if (e.value + e.tail_estimate < 0 || e.value - e.tail_estimate > 1) return "k = " + std::to_string(k);
            const auto& ps = e.partial_sums;
            if (ps.size() >= 2 && std::abs(ps.back() - ps[ps.size() - 2]) > e.tail_estimate)
                return "partial sums k = " + std::to_string(k);
        }
        return "";
    });

    // -- scan ----------------------------------------------------------------
    add("scan", "chunk_independence", [&]() -> std::string {
        ScanOptions a = scan_opts, b = scan_opts;
        a.chunk = 1000;
        b.chunk = 77'777;
        auto ra = scan_primes(s.rk_x, a), rb = scan_primes(s.rk_x, b);
        if (ra.histogram != rb.histogram || ra.prime_count != rb.prime_count) return "histograms differ";
        return "";
    });
    add("scan", "partition_of_primes", [&]() -> std::string {
        const auto r = scan_primes(s.scan_x, scan_opts);
        u64 total = 0;
        for (const auto& [k, n] : r.histogram) total += n;
        if (total != r.prime_count || r.prime_count != sieve_primes(s.scan_x).size())
            return "sum " + std::to_string(total) + " vs " + std::to_string(r.prime_count);
        if (!opts.quick && r.prime_count != 78'498) return "pi(10^6) = " + std::to_string(r.prime_count);
        return "";
    });
    add("scan", "histogram_keys_attain", [&]() -> std::string {
        const auto r = scan_primes(s.rk_x, scan_opts);
        for (const auto& [k, n] : r.histogram)
            if (gcd_ell_test(k, cache) != k) return "k = " + std::to_string(k);
        return "";
    });
    add("scan", "Rk_decomposition", [&]() -> std::string {
        const auto r = scan_primes(s.rk_x, scan_opts);
        const auto primes = sieve_primes(s.rk_x);
        for (u64 k : {1, 2, 10}) {
            u64 direct = 0, from_hist = 0;
            for (u64 p : primes) direct += membership_Rk(p, k);
            for (const auto& [j, n] : r.histogram)
                if (j % k == 0 && support_divides(j, k)) from_hist += n;
            if (direct != from_hist) return "k = " + std::to_string(k);
        }
        return "";
    });
    add("scan", "K_growth_floor", [&]() -> std::string {
        for (u64 x = 100; x <= s.count_x_max / 10; x *= 10) {
            const double ratio = count_K(x, cache) * std::log(double(x)) / double(x);
            if (ratio < 0.1) return "x = " + std::to_string(x);
            if (count_K(x, cache) > count_A(x, cache)) return "K exceeds A at x = " + std::to_string(x);
        }
        return "";
    });
    add("scan", "A_density_shrinks", [&]() -> std::string {
        double prev = 2.0;
        for (u64 x = 1000; x <= s.count_x_max; x *= 10) {
            const double ratio = double(count_A(x, cache)) / double(x);
            if (ratio > prev * 1.1) return "x = " + std::to_string(x);
            prev = ratio;
        }
        return "";
    });

    std::vector<CheckResult> results;
    for (auto& [module, name, check] : checks) {
        CheckResult r{module, name, false, "", 0.0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.detail = check();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace fibgcd
