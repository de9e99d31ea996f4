#include <gtest/gtest.h>

#include <random>

#include "fibgcd/report.hpp"

using namespace fibgcd;

TEST(Report, ClassificationJsonShape) {
    const json j = classify(17);
    EXPECT_EQ(j.dump(),
              R"({"schema_version":1,"k":17,"verdict":"Degenerate","witness":2,"ell":153,"gcd_attained":17})");
    EXPECT_TRUE(json(classify(10)).at("witness").is_null());
}

TEST(Report, ClassificationRoundTrip) {
    for (u64 k = 1; k <= 300; ++k) {
        const auto c = classify(k);
        const json j = c;
        EXPECT_EQ(j.get<Classification>(), c) << k;
        EXPECT_EQ(json::parse(j.dump()).get<Classification>(), c) << k;
    }
}

TEST(Report, EntryPointRoundTrip) {
    for (u64 m : {1ULL, 17ULL, 25ULL, 153ULL, 99'991ULL}) {
        const auto r = entry_point(m);
        EXPECT_EQ(json::parse(json(r).dump()).get<EntryPointRecord>(), r);
    }
}

TEST(Report, DensityRoundTripAtTwelveDigits) {
    for (u64 k : {1ULL, 2ULL, 10ULL, 17ULL}) {
        auto est = density_Pk(k, 300);
        const auto back = json::parse(json(est).dump()).get<DensityEstimate>();
        EXPECT_EQ(back.k, est.k);
        EXPECT_EQ(back.mode, est.mode);
        EXPECT_EQ(back.terms_used, est.terms_used);
        EXPECT_EQ(back.value, round_sig12(est.value));
        EXPECT_NEAR(back.value, est.value, 1e-11 * std::max(1.0, std::abs(est.value)));
        ASSERT_EQ(back.partial_sums.size(), est.partial_sums.size());
        // Re-encoding a decoded estimate is byte-stable.
        EXPECT_EQ(json(back).dump(), json(est).dump());
    }
}

TEST(Report, ScanRoundTrip) {
    ScanOptions opts;
    opts.chunk = 5'000;
    const auto r = scan_primes(50'000, opts);
    const auto back = json::parse(json(r).dump()).get<ScanReport>();
    EXPECT_EQ(back, r);
}

TEST(Report, RejectsWrongSchemaVersion) {
    json j = classify(10);
    j["schema_version"] = 2;
    EXPECT_THROW(j.get<Classification>(), precondition_error);
    j.erase("schema_version");
    EXPECT_THROW(j.get<Classification>(), precondition_error);
}

TEST(Report, DensityFormatting) {
    EXPECT_EQ(format_density(1.0), "1.0");
    EXPECT_EQ(format_density(0.25), "0.25");
    EXPECT_EQ(format_density(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(round_sig12(0.1234567890123456), 0.123456789012);
}

TEST(Report, RoundingIsIdempotent) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 10'000; ++i) {
        const double v = dist(rng);
        ASSERT_EQ(round_sig12(round_sig12(v)), round_sig12(v));
        ASSERT_EQ(json::parse(format_density(v)).get<double>(), round_sig12(v));
    }
}

TEST(Report, CsvHeaders) {
    EXPECT_EQ(to_csv(classify(17)), "k,verdict,witness,ell,gcd_attained\n17,Degenerate,2,153,17\n");
    const auto csv = to_csv(scan_primes(13));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,count,frequency");
    EXPECT_EQ(to_csv(density_Pk(1, 1)), "k,mode,terms_used,value,tail_estimate\n1,Pk-series,1,1.0," +
                                            format_density(density_Pk(1, 1).tail_estimate) + "\n");
}
