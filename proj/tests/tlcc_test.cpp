#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "support.hpp"
#include "vinsp/error.hpp"
#include "vinsp/tlcc.hpp"
#include "vinsp/time_buckets.hpp"

using namespace vinsp;

namespace {

using Opt = std::vector<std::optional<double>>;

Opt ramp_sine(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
    const double ph = phase(rng);
    Opt v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = 0.05 * double(t) + std::sin(2 * M_PI * double(t) / 12.0 + ph);
    return v;
}

}  // namespace

TEST(Pearson, Examples) {
    const std::vector<double> a{1, 2, 3}, b{2, 4, 6}, c{3, 2, 1};
    EXPECT_DOUBLE_EQ(pearson(a, b), 1.0);
    EXPECT_DOUBLE_EQ(pearson(a, c), -1.0);
    const std::vector<double> d{1, 2, 3, 4}, e{1, 3, 2, 4};
    EXPECT_NEAR(pearson(d, e), 0.8, 1e-15);
}

TEST(Pearson, Errors) {
    const std::vector<double> a{1, 2}, b{1, 2};
    EXPECT_THROW(pearson(a, b), Error);
    const std::vector<double> k{5, 5, 5, 5}, x{1, 2, 3, 4};
    EXPECT_THROW(pearson(k, x), Error);
}

TEST(Pearson, SkipsMissingPairs) {
    const Opt a{1, 2, std::nullopt, 3, 4}, b{1, 3, 100, 2, 4};
    EXPECT_NEAR(pearson(a, b), 0.8, 1e-15);
}

TEST(Tlcc, IdenticalSeriesPeakAtZero) {
    const auto s = ramp_sine(48, 1);
    const auto r = tlcc(s, s, 6);
    EXPECT_EQ(r.peak_lag, 0);
    EXPECT_NEAR(*r.peak_r, 1.0, 1e-15);
    EXPECT_EQ(r.lags.size(), 13u);
}

TEST(Tlcc, LeadingSeriesPeaksAtNegativeLag) {
    const auto base = ramp_sine(64, 2);
    for (int k = 1; k <= 12; ++k) {
        // s2 is s delayed by k buckets: s2[t] = s[t - k].
        const Opt s(base.begin() + 12, base.end());
        const Opt s2(base.begin() + 12 - k, base.end() - k);
        const auto r = tlcc(s, s2, 12);
        EXPECT_EQ(r.peak_lag, -k);
        EXPECT_GE(*r.peak_r, 0.99);
    }
}

TEST(Tlcc, AntisymmetricInLag) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Opt a(40), b(40);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    a[7] = std::nullopt;
    b[19] = std::nullopt;
    const auto ab = tlcc(a, b, 10), ba = tlcc(b, a, 10);
    for (int l = -10; l <= 10; ++l) {
        ASSERT_EQ(ab.at(l).has_value(), ba.at(-l).has_value());
        if (ab.at(l)) EXPECT_NEAR(*ab.at(l), *ba.at(-l), 1e-12);
    }
}

TEST(Tlcc, ShortSeriesLeavesLagsUndefined) {
    const Opt a{1, 2, 4}, b{2, 3, 7};
    const auto r = tlcc(a, b, 2);
    EXPECT_TRUE(r.at(0).has_value());
    for (int l : {-2, -1, 1, 2}) EXPECT_FALSE(r.at(l).has_value()) << l;
    EXPECT_EQ(r.peak_lag, 0);
    EXPECT_THROW(tlcc(a, b, 0), Error);
    const Opt c{1, 2};
    EXPECT_THROW(tlcc(a, c, 1), Error);
}

TEST(Tlcc, AlignsSeriesOnCommonBuckets) {
    TimeSeries s, s2;
    s.sampling = s2.sampling = Sampling::Monthly;
    s.origin = *parse_date("2021-01-01");
    s2.origin = *parse_date("2021-03-01");
    const auto base = ramp_sine(30, 5);
    s.values = base;
    s2.values = Opt(base.begin() + 2, base.end());
    const auto r = tlcc(s, s2, 3);
    EXPECT_EQ(r.peak_lag, 0);
    EXPECT_NEAR(*r.peak_r, 1.0, 1e-12);
    s2.sampling = Sampling::Weekly;
    EXPECT_THROW(tlcc(s, s2, 3), Error);
}

TEST(Tlcc, CorrelogramCsv) {
    testing_support::TempDir dir("tlcc");
    const Opt a{1, 2, 4, 3, 5}, b{2, 3, 7, 1, 4};
    const auto r = tlcc(a, b, 2);
    write_correlogram_csv(r, dir / "c.csv");
    std::ifstream in(dir / "c.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "lag,r,n_overlap");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 3), "-2,");
    EXPECT_EQ(line.substr(line.size() - 2), ",3");
    const auto j = to_json(r);
    EXPECT_EQ(j["max_lag"], 2);
}
