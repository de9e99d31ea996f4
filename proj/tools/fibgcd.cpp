// fibgcd: command-line front end for entry points, classification, density
// series and prime scans.
//
// Exit codes: 0 success, 1 malformed command line, 2 precondition violation,
// 3 capacity or overflow, 4 internal consistency failure.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fibgcd/classify.hpp"
#include "fibgcd/density.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/report.hpp"
#include "fibgcd/scan.hpp"
#include "fibgcd/verify.hpp"

namespace {

using fibgcd::json;
using fibgcd::u64;

struct RunConfig {
    std::string format = "text";
    unsigned threads = 1;
    u64 terms = 10'000;
    u64 limit = 1'000'000;
    u64 chunk = 1u << 16;
    u64 value = 0;  // k, m or x depending on the command
    std::string series = "pk";
    std::vector<u64> moduli;
    bool timing = false;
    bool quick = false;
    std::vector<std::string> modules;
};

void emit(const json& j) { std::cout << j.dump() << '\n'; }

int run_entry_point(const RunConfig& cfg, bool want_ell) {
    if (cfg.value > fibgcd::kDefaultClassifyCap)
        throw fibgcd::capacity_error("m exceeds cap " + std::to_string(fibgcd::kDefaultClassifyCap));
    const auto rec = fibgcd::entry_point(cfg.value);
    if (cfg.format == "json") emit(json(rec));
    else if (cfg.format == "csv")
        std::cout << "m,z,ell,method\n"
                  << rec.m << ',' << rec.z << ',' << rec.ell << ',' << fibgcd::to_string(rec.method) << '\n';
    else std::cout << (want_ell ? rec.ell : rec.z) << '\n';
    return 0;
}

int run_classify(const RunConfig& cfg) {
    const auto c = fibgcd::classify(cfg.value);
    if (cfg.format == "json") emit(json(c));
    else if (cfg.format == "csv") std::cout << fibgcd::to_csv(c);
    else {
        std::cout << "k=" << c.k << " verdict=" << fibgcd::to_string(c.verdict);
        if (c.witness) std::cout << " witness=" << *c.witness;
        std::cout << " ell=" << c.ell << " gcd_attained=" << c.gcd_attained << '\n';
    }
    return 0;
}

int run_density(const RunConfig& cfg) {
    fibgcd::SeriesOptions opts;
    opts.threads = cfg.threads;
    fibgcd::DensityEstimate est;
    if (cfg.series == "pk") {
        est = fibgcd::density_Pk(cfg.value, cfg.terms, fibgcd::default_cache(), opts);
    } else if (cfg.series == "rk") {
        est = fibgcd::density_Rk(cfg.value, cfg.terms, fibgcd::default_cache(), opts);
    } else if (cfg.series == "ie") {
        const double v = fibgcd::inclusion_exclusion_Pk(cfg.value, cfg.terms, fibgcd::default_cache(), opts);
        if (cfg.format == "json")
            emit(json{{"schema_version", fibgcd::kSchemaVersion},
                      {"k", cfg.value},
                      {"mode", "inclusion-exclusion"},
                      {"terms_used", cfg.terms},
                      {"value", fibgcd::round_sig12(v)}});
        else if (cfg.format == "csv")
            std::cout << "k,mode,terms_used,value\n"
                      << cfg.value << ",inclusion-exclusion," << cfg.terms << ',' << fibgcd::format_density(v) << '\n';
        else std::cout << fibgcd::format_density(v) << '\n';
        return 0;
    } else {
        est.k = cfg.value;
        est.mode = fibgcd::DensityMode::QProductBound;
        est.value = fibgcd::q_product_lower_bound(cfg.value, cfg.moduli);
        est.terms_used = cfg.moduli.size();
    }
    if (cfg.format == "json") emit(json(est));
    else if (cfg.format == "csv") std::cout << fibgcd::to_csv(est);
    else std::cout << fibgcd::format_density(est.value) << '\n';
    return 0;
}

int run_scan(const RunConfig& cfg) {
    fibgcd::ScanOptions opts;
    opts.chunk = cfg.chunk;
    opts.threads = cfg.threads;
    const auto report = fibgcd::scan_primes(cfg.limit, opts);
    if (cfg.format == "json") {
        json j = report;
        if (!cfg.timing) j.erase("elapsed_ms");
        emit(j);
    } else if (cfg.format == "csv") {
        std::cout << fibgcd::to_csv(report);
    } else {
        std::cout << "x=" << report.x << " primes=" << report.prime_count << " chunks=" << report.chunk_count;
        if (cfg.timing) std::cout << " elapsed_ms=" << report.elapsed_ms;
        std::cout << '\n';
        for (const auto& [k, n] : report.histogram)
            std::cout << k << ' ' << n << ' ' << fibgcd::format_density(fibgcd::empirical_density(report, k)) << '\n';
    }
    return 0;
}

int run_count(const RunConfig& cfg) {
    if (cfg.limit > fibgcd::kDefaultClassifyCap)
        throw fibgcd::capacity_error("count limit exceeds cap " + std::to_string(fibgcd::kDefaultClassifyCap));
    const u64 a = fibgcd::count_A(cfg.limit);
    const u64 k = fibgcd::count_K(cfg.limit);
    if (cfg.format == "json")
        emit(json{{"schema_version", fibgcd::kSchemaVersion}, {"x", cfg.limit}, {"count_A", a}, {"count_K", k}});
    else if (cfg.format == "csv") std::cout << "x,count_A,count_K\n" << cfg.limit << ',' << a << ',' << k << '\n';
    else std::cout << "x=" << cfg.limit << " count_A=" << a << " count_K=" << k << '\n';
    return 0;
}

int run_verify(const RunConfig& cfg) {
    fibgcd::VerifyOptions opts;
    opts.quick = cfg.quick;
    opts.threads = cfg.threads;
    opts.modules = cfg.modules;
    const auto results = fibgcd::run_verification(opts);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.passed;
    if (cfg.format == "json") {
        json checks = json::array();
        for (const auto& r : results)
            checks.push_back(json{{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        emit(json{{"schema_version", fibgcd::kSchemaVersion},
                  {"passed", passed},
                  {"failed", results.size() - passed},
                  {"checks", std::move(checks)}});
    } else {
        for (const auto& r : results) {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.module << '/' << r.name;
            if (!r.passed) std::cout << " (" << r.detail << ')';
            if (cfg.format == "text") std::cout << ' ' << std::fixed << std::setprecision(2) << r.seconds << 's';
            std::cout << '\n';
        }
        std::cout << "passed " << passed << " failed " << results.size() - passed << '\n';
    }
    return passed == results.size() ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fibonacci entry points, gcd(p - 1, F_{p-1}) classes and their densities"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->envname("FIBGCD_FORMAT");
    app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->envname("FIBGCD_THREADS");
    app.add_option("--terms", cfg.terms, "Series truncation bound D")->envname("FIBGCD_TERMS");
    app.add_option("--limit", cfg.limit, "Scan or count limit x")->envname("FIBGCD_LIMIT");
    app.add_option("--chunk", cfg.chunk, "Scan chunk size")->envname("FIBGCD_CHUNK");

    auto* z = app.add_subcommand("z", "Rank of appearance z(m)");
    z->add_option("m", cfg.value)->required();
    auto* ell = app.add_subcommand("ell", "ell(m) = lcm(m, z(m))");
    ell->add_option("m", cfg.value)->required();
    auto* cls = app.add_subcommand("classify", "Decide A_k nonempty and r(P_k) > 0");
    cls->add_option("k", cfg.value)->required();
    auto* den = app.add_subcommand("density", "Truncated density series for P_k or R_k");
    den->add_option("k", cfg.value)->required();
    den->add_option("--series", cfg.series, "pk, rk, ie (divisor-sum identity) or qbound")
        ->check(CLI::IsMember({"pk", "rk", "ie", "qbound"}));
    den->add_option("--moduli", cfg.moduli, "Moduli a_i for --series qbound (k is a0)")->delimiter(',');
    auto* scan = app.add_subcommand("scan", "Histogram of gcd(p - 1, F_{p-1}) over primes p <= limit");
    scan->add_flag("--timing", cfg.timing, "Include elapsed time");
    auto* count = app.add_subcommand("count", "Counting functions of A and K up to limit");
    auto* verify = app.add_subcommand("verify", "Run every module invariant");
    verify->add_flag("--quick", cfg.quick, "Reduced ranges");
    verify->add_option("--module", cfg.modules, "Restrict to modules (arith, fib, rank, classify, density, scan)")
        ->delimiter(',')
        ->check(CLI::IsMember({"arith", "fib", "rank", "classify", "density", "scan"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*z) return run_entry_point(cfg, false);
        if (*ell) return run_entry_point(cfg, true);
        if (*cls) return run_classify(cfg);
        if (*den) return run_density(cfg);
        if (*scan) return run_scan(cfg);
        if (*count) return run_count(cfg);
        if (*verify) return run_verify(cfg);
    } catch (const fibgcd::precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fibgcd::capacity_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 1;
}
