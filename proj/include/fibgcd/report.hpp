#pragma once

// JSON and CSV encodings of the report types. Every JSON document carries
// "schema_version": 1. Densities are emitted with 12 significant digits.

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fibgcd/classify.hpp"
#include "fibgcd/density.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/scan.hpp"

namespace fibgcd {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

/// v rounded to 12 significant decimal digits.
inline double round_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

/// Shortest decimal that reads back as round_sig12(v), e.g. "1.0", "0.25".
inline std::string format_density(double v) { return json(round_sig12(v)).dump(); }

namespace detail {

inline void check_schema(const json& j) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
        throw precondition_error("unsupported or missing schema_version");
}

inline std::vector<double> rounded(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(round_sig12(x));
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// EntryPointRecord
// ---------------------------------------------------------------------------

inline void to_json(json& j, const EntryPointRecord& r) {
    j = json{{"schema_version", kSchemaVersion},
             {"m", r.m},
             {"z", r.z},
             {"ell", r.ell},
             {"method", std::string(to_string(r.method))}};
}

inline void from_json(const json& j, EntryPointRecord& r) {
    detail::check_schema(j);
    r.m = j.at("m").get<u64>();
    r.z = j.at("z").get<u64>();
    r.ell = j.at("ell").get<u64>();
    const auto method = j.at("method").get<std::string>();
    for (EntryMethod m : {EntryMethod::direct_scan, EntryMethod::prime_power_lift, EntryMethod::lcm_combine})
        if (to_string(m) == method) {
            r.method = m;
            return;
        }
    throw precondition_error("unknown entry-point method '" + method + "'");
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

inline void to_json(json& j, const Classification& c) {
    j = json{{"schema_version", kSchemaVersion},
             {"k", c.k},
             {"verdict", std::string(to_string(c.verdict))}};
    if (c.witness) j["witness"] = *c.witness;
    else j["witness"] = nullptr;
    j["ell"] = c.ell;
    j["gcd_attained"] = c.gcd_attained;
}

inline void from_json(const json& j, Classification& c) {
    detail::check_schema(j);
    c.k = j.at("k").get<u64>();
    const auto v = verdict_from_string(j.at("verdict").get<std::string>());
    if (!v) throw precondition_error("unknown verdict");
    c.verdict = *v;
    c.witness.reset();
    if (j.contains("witness") && !j.at("witness").is_null()) c.witness = j.at("witness").get<u64>();
    c.ell = j.at("ell").get<u64>();
    c.gcd_attained = j.at("gcd_attained").get<u64>();
}

inline std::string to_csv(const Classification& c) {
    std::ostringstream out;
    out << "k,verdict,witness,ell,gcd_attained\n"
        << c.k << ',' << to_string(c.verdict) << ',' << (c.witness ? std::to_string(*c.witness) : "")
        << ',' << c.ell << ',' << c.gcd_attained << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// DensityEstimate
// ---------------------------------------------------------------------------

inline void to_json(json& j, const DensityEstimate& d) {
    j = json{{"schema_version", kSchemaVersion},
             {"k", d.k},
             {"mode", std::string(to_string(d.mode))},
             {"value", round_sig12(d.value)},
             {"terms_used", d.terms_used},
             {"tail_estimate", round_sig12(d.tail_estimate)},
             {"partial_sums", detail::rounded(d.partial_sums)}};
}

inline void from_json(const json& j, DensityEstimate& d) {
    detail::check_schema(j);
    d.k = j.at("k").get<u64>();
    const auto mode = density_mode_from_string(j.at("mode").get<std::string>());
    if (!mode) throw precondition_error("unknown density mode");
    d.mode = *mode;
    d.value = j.at("value").get<double>();
    d.terms_used = j.at("terms_used").get<u64>();
    d.tail_estimate = j.at("tail_estimate").get<double>();
    d.partial_sums = j.at("partial_sums").get<std::vector<double>>();
}

inline std::string to_csv(const DensityEstimate& d) {
    std::ostringstream out;
    out << "k,mode,terms_used,value,tail_estimate\n"
        << d.k << ',' << to_string(d.mode) << ',' << d.terms_used << ',' << format_density(d.value)
        << ',' << format_density(d.tail_estimate) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// ScanReport
// ---------------------------------------------------------------------------

inline void to_json(json& j, const ScanReport& r) {
    json hist = json::array();
    for (const auto& [k, n] : r.histogram)
        hist.push_back(json{{"k", k}, {"count", n}, {"frequency", round_sig12(empirical_density(r, k))}});
    j = json{{"schema_version", kSchemaVersion},
             {"x", r.x},
             {"prime_count", r.prime_count},
             {"chunk_count", r.chunk_count},
             {"elapsed_ms", r.elapsed_ms},
             {"histogram", std::move(hist)}};
}

inline void from_json(const json& j, ScanReport& r) {
    detail::check_schema(j);
    r.x = j.at("x").get<u64>();
    r.prime_count = j.at("prime_count").get<u64>();
    r.chunk_count = j.at("chunk_count").get<u64>();
    r.elapsed_ms = j.value("elapsed_ms", u64{0});
    r.histogram.clear();
    for (const auto& row : j.at("histogram")) r.histogram[row.at("k").get<u64>()] = row.at("count").get<u64>();
}

inline std::string to_csv(const ScanReport& r) {
    std::ostringstream out;
    out << "k,count,frequency\n";
    for (const auto& [k, n] : r.histogram)
        out << k << ',' << n << ',' << format_density(empirical_density(r, k)) << '\n';
    return out.str();
}

} // namespace fibgcd
