#pragma once

// Relative densities as truncated Möbius series:
//   r(P_k) = sum_{d >= 1}           mu(d) / phi(ell(dk))
//   r(R_k) = sum_{d >= 1, (d,k)=1}  mu(d) / phi(ell(dk))
// together with the divisor-sum identity r(P_k) = sum_{d | k} mu(d) r(R_{dk})
// and the product lower bound for primes in prescribed residue classes.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fibgcd/arith.hpp"
#include "fibgcd/rank.hpp"

namespace fibgcd {

inline constexpr u64 kDefaultMaxTerms = 1'000'000ULL;

enum class DensityMode { PkSeries, RkSeries, QProductBound };

constexpr std::string_view to_string(DensityMode m) noexcept {
    switch (m) {
    case DensityMode::PkSeries: return "Pk-series";
    case DensityMode::RkSeries: return "Rk-series";
    case DensityMode::QProductBound: return "Q-product-bound";
    }
    return "unknown";
}

inline std::optional<DensityMode> density_mode_from_string(std::string_view s) noexcept {
    for (DensityMode m : {DensityMode::PkSeries, DensityMode::RkSeries, DensityMode::QProductBound})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

struct DensityEstimate {
    u64 k = 1;
    double value = 0.0;
    /// Truncation bound D: terms d <= D were summed.
    u64 terms_used = 0;
    /// Partial sums at d = 1, 2, 4, ... <= D, then at D itself.
    std::vector<double> partial_sums;
    /// Twice the absolute mass of the next dyadic block (D, 2D].
    double tail_estimate = 0.0;
    DensityMode mode = DensityMode::PkSeries;

    friend bool operator==(const DensityEstimate&, const DensityEstimate&) = default;
};

struct SeriesOptions {
    u64 max_terms = kDefaultMaxTerms;
    unsigned threads = 1;
};

namespace detail {

/// 1/phi(ell(dk)) for squarefree d in [1, upto] that belong to the index set
/// (every d, or d coprime to k); 0 elsewhere and at index 0. Workers fill disjoint
/// contiguous blocks, so the result does not depend on the thread count.
inline std::vector<double> inverse_phi_ell(u64 k, u64 upto, bool coprime_only,
                                           std::span<const std::int8_t> mu,
                                           EntryPointCache& cache, unsigned threads) {
    std::vector<double> out(upto + 1, 0.0);
    auto work = [&](u64 lo, u64 hi) {
        for (u64 d = lo; d <= hi; ++d) {
            if (coprime_only && std::gcd(d, k) != 1) continue;
            if (mu[d] == 0) continue;
            out[d] = 1.0 / static_cast<double>(phi_of_ell(checked_mul(d, k), cache));
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || upto < 1024) {
        work(1, upto);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        const u64 block = (upto + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const u64 lo = 1 + t * block;
            const u64 hi = std::min(upto, lo + block - 1);
            if (lo > hi) break;
            pool.emplace_back([&, t, lo, hi] {
                try {
                    work(lo, hi);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline DensityEstimate evaluate_series(u64 k, u64 terms, bool coprime_only, DensityMode mode,
                                       EntryPointCache& cache, const SeriesOptions& opts) {
    if (k == 0) throw precondition_error("density: k must be >= 1");
    if (terms == 0) throw precondition_error("density: number of terms must be >= 1");
    if (terms > opts.max_terms)
        throw capacity_error("density: " + std::to_string(terms) + " terms exceed maximum " +
                             std::to_string(opts.max_terms));
    const u64 upto = 2 * terms;
    const auto mu = mobius_table(upto);
    // The tail block is the next dyadic block of the series' own terms, so it
    // also runs over squarefree d only.
    const auto inv = inverse_phi_ell(k, upto, coprime_only, mu, cache, opts.threads);

    DensityEstimate est;
    est.k = k;
    est.terms_used = terms;
    est.mode = mode;
    double sum = 0.0;
    u64 next_sample = 1;
    for (u64 d = 1; d <= terms; ++d) {
        if (mu[d] > 0) sum += inv[d];
        else if (mu[d] < 0) sum -= inv[d];
        if (d == next_sample) {
            est.partial_sums.push_back(sum);
            next_sample *= 2;
        }
    }
    if ((terms & (terms - 1)) != 0) est.partial_sums.push_back(sum);
    est.value = sum;
    double block = 0.0;
    for (u64 d = terms + 1; d <= upto; ++d) block += inv[d];
    est.tail_estimate = 2.0 * block;
    return est;
}

} // namespace detail

/// sum of 1/phi(ell(d)) over squarefree d in (lo, 2 lo].
inline double dyadic_block(u64 lo, EntryPointCache& cache = default_cache()) {
    if (lo == 0) throw precondition_error("dyadic_block: lo must be >= 1");
    const auto mu = mobius_table(2 * lo);
    double sum = 0.0;
    for (u64 d = lo + 1; d <= 2 * lo; ++d)
        if (mu[d] != 0) sum += 1.0 / static_cast<double>(phi_of_ell(d, cache));
    return sum;
}

/// Truncation of r(P_k) = sum_d mu(d)/phi(ell(dk)) at d <= terms.
inline DensityEstimate density_Pk(u64 k, u64 terms, EntryPointCache& cache = default_cache(),
                                  const SeriesOptions& opts = {}) {
    return detail::evaluate_series(k, terms, false, DensityMode::PkSeries, cache, opts);
}

/// Truncation of r(R_k), the series restricted to d coprime to k.
inline DensityEstimate density_Rk(u64 k, u64 terms, EntryPointCache& cache = default_cache(),
                                  const SeriesOptions& opts = {}) {
    return detail::evaluate_series(k, terms, true, DensityMode::RkSeries, cache, opts);
}

/// sum_{d | k} mu(d) r(R_{dk}) with the R-series for dk truncated at
/// floor(terms / d). Every squarefree f <= terms splits uniquely as f = de
/// with d | k and (e, k) = 1, so this sums the same terms as density_Pk.
inline double inclusion_exclusion_Pk(u64 k, u64 terms, EntryPointCache& cache = default_cache(),
                                     const SeriesOptions& opts = {}) {
    if (terms == 0) throw precondition_error("inclusion_exclusion_Pk: terms must be >= 1");
    double total = 0.0;
    for (u64 d : divisors(k)) {
        const u64 sub_terms = terms / d;
        if (sub_terms == 0) break;
        const int m = mobius(d);
        if (m == 0) continue;
        const double r = density_Rk(checked_mul(d, k), sub_terms, cache, opts).value;
        total += m > 0 ? r : -r;
    }
    return total;
}

/// (1/phi(a0)) prod_i (1 - phi(a0)/phi(a_i)): a lower bound for the relative
/// density of primes p = 1 mod a0 with p != 1 mod a_i for every i.
/// Requires a0 | a_i. Non-positive when some phi(a_i) = phi(a0).
inline double q_product_lower_bound(u64 a0, std::span<const u64> moduli) {
    if (a0 == 0) throw precondition_error("q_product_lower_bound: a0 must be >= 1");
    const double phi0 = static_cast<double>(euler_phi(a0));
    double product = 1.0;
    for (u64 a : moduli) {
        if (a == 0 || a % a0 != 0)
            throw precondition_error("q_product_lower_bound: " + std::to_string(a0) +
                                     " does not divide " + std::to_string(a));
        product *= 1.0 - phi0 / static_cast<double>(euler_phi(a));
    }
    return product / phi0;
}

} // namespace fibgcd
