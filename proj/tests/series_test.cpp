#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vinsp/error.hpp"
#include "vinsp/series.hpp"
#include "vinsp/time_buckets.hpp"

using namespace vinsp;
using namespace testing_support;

namespace {

Timestamp day(const char* iso) { return *parse_date(iso); }

}  // namespace

TEST(Buckets, IsoWeekStartsMonday) {
    EXPECT_EQ(format_date(bucket_floor(day("2021-01-01") + 3600 * 13, Sampling::Weekly)), "2020-12-28");
    EXPECT_EQ(format_date(bucket_floor(day("2021-01-04"), Sampling::Weekly)), "2021-01-04");
    EXPECT_EQ(format_date(bucket_floor(day("2021-01-10") + 86399, Sampling::Weekly)), "2021-01-04");
    EXPECT_EQ(format_date(bucket_next(day("2020-12-28"), Sampling::Weekly)), "2021-01-04");
}

TEST(Buckets, CalendarMonths) {
    EXPECT_EQ(format_date(bucket_floor(day("2020-02-29") + 5, Sampling::Monthly)), "2020-02-01");
    EXPECT_EQ(format_date(bucket_next(day("2020-12-01"), Sampling::Monthly)), "2021-01-01");
    const BucketAxis axis(TimeWindow(day("2018-01-15"), day("2018-03-01")), Sampling::Monthly);
    EXPECT_EQ(axis.size(), 3u);
    EXPECT_EQ(format_date(axis.start(2)), "2018-03-01");
    EXPECT_EQ(axis.index_of(day("2018-02-10")), 1u);
    EXPECT_FALSE(axis.index_of(day("2017-12-31")));
}

TEST(Buckets, DateParsing) {
    EXPECT_EQ(day("1970-01-02"), 86400);
    EXPECT_FALSE(parse_date("2021-13-01"));
    EXPECT_FALSE(parse_date("2021-02-30"));
    EXPECT_FALSE(parse_date("yesterday"));
    EXPECT_EQ(parse_sampling("weekly"), Sampling::Weekly);
    EXPECT_FALSE(parse_sampling("daily"));
}

TEST(Series, FirstSoldCounts) {
    const auto s = make_tiny({{"a", "X", day("2021-01-05"), {1, 0}},
                              {"b", "X", day("2021-01-20"), {1, 0}},
                              {"c", "Y", day("2021-02-03"), {1, 0}}});
    const TimeWindow w(day("2021-01-01"), day("2021-02-28"));
    const auto first = build_series(SeriesKind::FirstSoldCount, s.catalog, s.store, Sampling::Monthly, w);
    ASSERT_EQ(first.values.size(), 2u);
    EXPECT_EQ(first.values[0], 2.0);
    EXPECT_EQ(first.values[1], 1.0);
    const auto colls =
        build_series(SeriesKind::CollectionsWithFirstSoldCount, s.catalog, s.store, Sampling::Monthly, w);
    EXPECT_EQ(colls.values[0], 1.0);
    EXPECT_EQ(colls.values[1], 1.0);
    const auto s2 = make_tiny({{"a", "X", day("2021-01-05"), {1, 0}},
                               {"b", "Y", day("2021-01-20"), {1, 0}},
                               {"c", "X", day("2021-02-03"), {1, 0}}});
    const auto colls2 =
        build_series(SeriesKind::CollectionsWithFirstSoldCount, s2.catalog, s2.store, Sampling::Monthly, w);
    EXPECT_EQ(colls2.values[0], 2.0);
    EXPECT_EQ(colls2.values[1], 1.0);
}

TEST(Series, SimilarityStartsAtFirstPair) {
    const auto s = make_tiny({{"a", "X", day("2021-02-05"), {1, 0}}, {"b", "Y", day("2021-03-07"), {0.8f, 0.6f}}});
    const TimeWindow w(day("2021-01-01"), day("2021-04-30"));
    const auto sim = build_series(SeriesKind::AvgPairwiseSimilarity, s.catalog, s.store, Sampling::Monthly, w);
    ASSERT_EQ(sim.values.size(), 4u);
    EXPECT_FALSE(sim.values[0]);
    EXPECT_FALSE(sim.values[1]);
    EXPECT_NEAR(*sim.values[2], 0.8, 1e-7);
    EXPECT_NEAR(*sim.values[3], 0.8, 1e-7);
}

TEST(Series, SimilarityMatchesPairEnumeration) {
    const auto s = make_synthetic(31, {.assets = 160, .collections = 5, .dim = 16, .t_span = 86400 * 200});
    const TimeWindow w = s.catalog.span();
    for (auto scope : {PairScope::All, PairScope::WithinCategory, PairScope::AcrossCategory}) {
        for (auto mode : {SimilarityMode::AllPairs, SimilarityMode::EdgesOnly}) {
            const auto got = build_series(SeriesKind::AvgPairwiseSimilarity, s.catalog, s.store, Sampling::Weekly, w,
                                          {.similarity_mode = mode, .threshold = 0.3, .scope = scope, .workers = 2});
            const BucketAxis axis(w, Sampling::Weekly);
            std::vector<double> sum(axis.size(), 0.0), cnt(axis.size(), 0.0);
            std::vector<const AssetRecord*> xs;
            for (const auto& [id, a] : s.catalog.assets()) xs.push_back(&a);
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = i + 1; j < xs.size(); ++j) {
                    const auto *a = xs[i], *b = xs[j];
                    if (a->first_sale_ts == b->first_sale_ts || a->collection_id == b->collection_id) continue;
                    if (scope == PairScope::WithinCategory && a->category != b->category) continue;
                    if (scope == PairScope::AcrossCategory && a->category == b->category) continue;
                    const double c = naive_cosine(s.store.row(*s.store.index_of(a->asset_id)),
                                                  s.store.row(*s.store.index_of(b->asset_id)));
                    if (mode == SimilarityMode::EdgesOnly && c < 0.3) continue;
                    const auto bucket = *axis.index_of(std::max(a->first_sale_ts, b->first_sale_ts));
                    sum[bucket] += c;
                    cnt[bucket] += 1;
                }
            double cs = 0, cc = 0;
            for (std::size_t k = 0; k < axis.size(); ++k) {
                cs += sum[k];
                cc += cnt[k];
                if (cc == 0) {
                    EXPECT_FALSE(got.values[k]);
                } else {
                    ASSERT_TRUE(got.values[k]);
                    EXPECT_NEAR(*got.values[k], cs / cc, 1e-12);
                }
            }
        }
    }
}

TEST(Series, SampledSimilarityIsSeededAndClose) {
    const auto s = make_synthetic(32, {.assets = 300, .collections = 6, .dim = 16, .t_span = 86400 * 120});
    const TimeWindow w = s.catalog.span();
    SeriesOptions opt{.pair_cap = 20'000, .seed = 4, .workers = 3};
    const auto a = build_series(SeriesKind::AvgPairwiseSimilarity, s.catalog, s.store, Sampling::Monthly, w, opt);
    opt.workers = 1;
    const auto b = build_series(SeriesKind::AvgPairwiseSimilarity, s.catalog, s.store, Sampling::Monthly, w, opt);
    EXPECT_TRUE(a.pairs_sampled);
    EXPECT_EQ(a.values, b.values);
    opt.exact = true;
    const auto e = build_series(SeriesKind::AvgPairwiseSimilarity, s.catalog, s.store, Sampling::Monthly, w, opt);
    EXPECT_FALSE(e.pairs_sampled);
    EXPECT_NEAR(*a.values.back(), *e.values.back(), 0.02);
}

TEST(Series, MeanSellingPriceIsCumulative) {
    std::vector<AssetRecord> recs{{"a", "X", Category::Art, 0, std::nullopt}, {"b", "Y", Category::Art, 0, std::nullopt}};
    std::vector<Transaction> txs{{"a", day("2021-01-03"), 10}, {"a", day("2021-02-03"), 30}, {"b", day("2021-02-10"), 100}};
    const AssetCatalog cat(recs, txs);
    const auto p = build_series(SeriesKind::AvgMeanSellingPrice, cat, EmbeddingStore(), Sampling::Monthly,
                                TimeWindow(day("2021-01-01"), day("2021-03-31")));
    ASSERT_EQ(p.values.size(), 3u);
    EXPECT_EQ(p.values[0], 10.0);
    EXPECT_EQ(p.values[1], 60.0);  // mean of {20, 100}
    EXPECT_EQ(p.values[2], 60.0);
}

TEST(Series, BtcGapsAndForwardFill) {
    TempDir dir("btc");
    {
        std::ofstream out(dir / "btc.csv");
        out << "Date,Open,High,Low,Close,Adj Close,Volume\n"
               "2021-01-04,1,1,1,100.5,100.5,7\n"
               "2021-01-06,1,1,1,101.5,101.5,7\n"
               "2021-01-12,null,null,null,null,null,null\n"
               "2021-01-19,1,1,1,120,120,7\n";
    }
    const auto btc = load_btc_csv(dir / "btc.csv");
    EXPECT_EQ(btc.closes.size(), 3u);
    const TimeWindow w(day("2021-01-04"), day("2021-01-24"));
    const AssetCatalog none;
    const auto s = build_series(SeriesKind::BtcClose, none, EmbeddingStore(), Sampling::Weekly, w, {.btc = &btc});
    ASSERT_EQ(s.values.size(), 3u);
    EXPECT_EQ(s.values[0], 101.5);
    EXPECT_FALSE(s.values[1]);
    EXPECT_EQ(s.values[2], 120.0);
    EXPECT_EQ(s.gaps, (std::vector<std::size_t>{1}));
    const auto f = build_series(SeriesKind::BtcClose, none, EmbeddingStore(), Sampling::Weekly, w,
                                {.btc = &btc, .forward_fill = true});
    EXPECT_EQ(f.values[1], 101.5);
    EXPECT_THROW(build_series(SeriesKind::BtcClose, none, EmbeddingStore(), Sampling::Weekly, w), Error);
}

TEST(Series, CsvRoundTrip) {
    TempDir dir("series");
    TimeSeries s;
    s.sampling = Sampling::Weekly;
    s.origin = day("2021-01-04");
    s.values = {1.0 / 3.0, std::nullopt, 2.5};
    write_series_csv(s, dir / "s.csv");
    const auto back = read_series_csv(dir / "s.csv");
    EXPECT_EQ(back.sampling, Sampling::Weekly);
    EXPECT_EQ(back.origin, s.origin);
    EXPECT_EQ(back.values, s.values);
    std::ifstream in(dir / "s.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "bucket_start,value");
}
