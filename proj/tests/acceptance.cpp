// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "fibgcd/classify.hpp"
#include "fibgcd/density.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/report.hpp"
#include "fibgcd/scan.hpp"
#include "fibgcd/verify.hpp"
#include "oracles.hpp"

using namespace fibgcd;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string cli_output(const std::string& args, int& code) {
    const std::string cmd = std::string(FIBGCD_CLI_PATH) + " " + args;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

// 1. Anchor values, exact, under 1 ms each.
Outcome anchors() {
    // Build the static small-prime table once so it is not charged to the
    // first query; each query then gets a cold entry-point cache.
    (void)small_primes();
    std::ostringstream msg;
    bool ok = true;
    double worst = 0.0;
    auto timed = [&](const char* name, const std::function<bool(EntryPointCache&)>& f) {
        EntryPointCache cache;
        const auto t0 = clock_type::now();
        const bool good = f(cache);
        const double ms = seconds_since(t0) * 1e3;
        worst = std::max(worst, ms);
        if (!good || ms >= 1.0) {
            ok = false;
            msg << name << (good ? " slow " : " wrong ") << ms << "ms; ";
        }
    };
    timed("ell 17", [](auto& c) { return ell_of(17, c) == 153; });
    timed("ell 10", [](auto& c) { return ell_of(10, c) == 30; });
    timed("classify 17", [](auto& c) {
        const auto r = classify(17, c);
        return r.verdict == Verdict::Degenerate && r.witness == u64{2};
    });
    timed("classify 10", [](auto& c) { return classify(10, c).verdict == Verdict::PositiveDensity; });
    timed("gcd_ell_test 10", [](auto& c) { return gcd_ell_test(10, c) == 10; });
    msg << "worst " << worst << " ms";
    return {ok, msg.str()};
}

// 2. Lemma suite for the fib and rank modules at full scale, under 60 s.
Outcome lemma_suite() {
    VerifyOptions opts;
    opts.threads = worker_count();
    opts.modules = {"fib", "rank"};
    const auto t0 = clock_type::now();
    const auto results = run_verification(opts);
    const double secs = seconds_since(t0);
    std::ostringstream msg;
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed;
        if (!r.passed) msg << r.module << '/' << r.name << ": " << r.detail << "; ";
    }
    msg << passed << '/' << results.size() << " checks in " << secs << " s";
    return {passed == results.size() && !results.empty() && secs < 60.0, msg.str()};
}

// 3. z(m) against a first-zero scan of the Fibonacci recurrence, m <= 2000.
Outcome entry_point_oracle() {
    EntryPointCache cache;
    u64 mismatches = 0, first = 0;
    for (u64 m = 1; m <= 2'000; ++m)
        if (z_of(m, cache) != oracle::z(m) && mismatches++ == 0) first = m;
    std::ostringstream msg;
    msg << mismatches << " mismatches over m <= 2000";
    if (mismatches) msg << ", first m = " << first;
    return {mismatches == 0, msg.str()};
}

// 4. Sign of the truncated series at D = 10^4 agrees with classify, k <= 100.
Outcome dichotomy() {
    SeriesOptions opts;
    opts.threads = worker_count();
    u64 disagreements = 0;
    std::ostringstream msg;
    for (u64 k = 1; k <= 100; ++k) {
        const auto est = density_Pk(k, 10'000, default_cache(), opts);
        const bool positive = est.value > est.tail_estimate;
        const bool zero = std::abs(est.value) <= est.tail_estimate;
        const bool expect_positive = classify(k).verdict == Verdict::PositiveDensity;
        if ((expect_positive && !positive) || (!expect_positive && !zero)) {
            ++disagreements;
            msg << "k=" << k << " value=" << est.value << " tail=" << est.tail_estimate << "; ";
        }
    }
    msg << disagreements << " disagreements over k <= 100";
    return {disagreements == 0, msg.str()};
}

// 5. Series value against the empirical frequency at x = 10^7.
Outcome series_vs_scan(const ScanReport& big) {
    SeriesOptions sopts;
    sopts.threads = worker_count();
    const double noise = 3.0 / std::sqrt(static_cast<double>(big.prime_count));
    u64 compared = 0, failures = 0;
    double worst_ratio = 0.0;
    std::ostringstream msg;
    for (const auto& [k, n] : big.histogram) {
        if (n < 500 || classify(k).verdict != Verdict::PositiveDensity) continue;
        ++compared;
        const auto est = density_Pk(k, 10'000, default_cache(), sopts);
        const double emp = empirical_density(big, k);
        const double tol = std::max(0.005, 3 * est.tail_estimate + noise);
        const double err = std::abs(emp - est.value);
        worst_ratio = std::max(worst_ratio, err / tol);
        if (err > tol) {
            ++failures;
            msg << "k=" << k << " empirical=" << emp << " series=" << est.value << " tol=" << tol << "; ";
        }
    }
    msg << compared << " classes compared, worst error/tolerance " << worst_ratio;
    return {failures == 0 && compared > 0, msg.str()};
}

// 6. Divisor-sum identity against the direct series at D = 10^3.
Outcome inclusion_exclusion() {
    bool ok = true;
    std::ostringstream msg;
    for (u64 k : {1, 2, 6, 10, 12}) {
        const auto direct = density_Pk(k, 1'000);
        const double ie = inclusion_exclusion_Pk(k, 1'000);
        const double diff = std::abs(ie - direct.value);
        if (diff > 10 * direct.tail_estimate) ok = false;
        msg << "k=" << k << " diff=" << diff << " bound=" << 10 * direct.tail_estimate << "; ";
    }
    return {ok, msg.str()};
}

// 7. 10p lies in K for every p in P_10 up to 10^5.
Outcome kp_in_K() {
    ScanOptions opts;
    opts.threads = worker_count();
    const auto p10 = primes_in_Pk(100'000, 10, opts);
    u64 failures = 0;
    for (u64 p : p10) failures += !in_K(10 * p);
    std::ostringstream msg;
    msg << failures << " failures over " << p10.size() << " primes";
    return {failures == 0 && !p10.empty(), msg.str()};
}

// 8. count_K <= count_A and count_K log x / x >= 0.1.
Outcome inclusions_and_growth() {
    bool ok = true;
    std::ostringstream msg;
    for (u64 x : {100, 1'000, 10'000}) {
        const u64 a = count_A(x), k = count_K(x);
        const double floor = static_cast<double>(k) * std::log(static_cast<double>(x)) / static_cast<double>(x);
        ok = ok && k <= a && floor >= 0.1;
        msg << "x=" << x << " A=" << a << " K=" << k << " K*log(x)/x=" << floor << "; ";
    }
    return {ok, msg.str()};
}

// 9. Scan JSON through the CLI is byte-identical for 1 and 8 threads.
Outcome determinism() {
    int c1 = 0, c8 = 0;
    const auto one = cli_output("scan --limit 1000000 --threads 1 --format json", c1);
    const auto eight = cli_output("scan --limit 1000000 --threads 8 --format json", c8);
    std::ostringstream msg;
    msg << "exit codes " << c1 << '/' << c8 << ", " << one.size() << " bytes, "
        << (one == eight ? "identical" : "different");
    return {c1 == 0 && c8 == 0 && !one.empty() && one == eight, msg.str()};
}

// 10. No prime in (2, 10^6] realizes a k <= 200 outside K.
Outcome degeneracy_empirical(const ScanReport& million) {
    u64 violations = 0, checked = 0;
    std::ostringstream msg;
    for (u64 k = 1; k <= 200; ++k) {
        if (classify(k).verdict == Verdict::PositiveDensity) continue;
        ++checked;
        // p = 2 contributes only to k = 1, which is in K.
        const auto it = million.histogram.find(k);
        if (it != million.histogram.end() && it->second > 0) {
            ++violations;
            msg << "k=" << k << " count=" << it->second << "; ";
        }
    }
    msg << violations << " violations over " << checked << " excluded k";
    return {violations == 0, msg.str()};
}

} // namespace

int main() {
    ScanOptions opts;
    opts.threads = worker_count();
    const auto million = scan_primes(1'000'000, opts);
    opts.max_x = 10'000'000;
    const auto big = scan_primes(10'000'000, opts);

    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"anchor values", anchors},
        {"lemma suite", lemma_suite},
        {"entry-point oracle", entry_point_oracle},
        {"zero/positive dichotomy", dichotomy},
        {"series vs scan at 1e7", [&] { return series_vs_scan(big); }},
        {"inclusion-exclusion", inclusion_exclusion},
        {"10p in K for p in P_10", kp_in_K},
        {"set inclusions and growth", inclusions_and_growth},
        {"scan determinism", determinism},
        {"degenerate classes empty to 1e6", [&] { return degeneracy_empirical(million); }},
    };

    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = clock_type::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.passed;
        std::cout << "criterion " << index << ": " << (o.passed ? "PASS" : "FAIL") << "  " << name << "  ("
                  << o.detail << ") [" << seconds_since(t0) << " s]" << std::endl;
    }
    std::cout << (failed ? "acceptance FAILED: " : "acceptance passed: ") << 10 - failed << "/10" << std::endl;
    return failed ? 1 : 0;
}
