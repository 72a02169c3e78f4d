#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vinsp/catalog.hpp"
#include "vinsp/embeddings.hpp"
#include "vinsp/time_buckets.hpp"

namespace vinsp {

enum class SeriesKind {
    AvgPairwiseSimilarity,          // cumulative to each bucket end
    AvgMeanSellingPrice,            // cumulative to each bucket end
    BtcClose,                       // last close inside the bucket
    FirstSoldCount,                 // per bucket
    CollectionsWithFirstSoldCount,  // per bucket
};

std::optional<SeriesKind> parse_series_kind(std::string_view text);
std::string_view to_string(SeriesKind k) noexcept;

/// A bucketed series; missing samples are nullopt, never zero.
struct TimeSeries {
    SeriesKind kind = SeriesKind::FirstSoldCount;
    Sampling sampling = Sampling::Monthly;
    Timestamp origin = 0;
    std::vector<std::optional<double>> values;

    /// Buckets left without a value (e.g. BTC gaps); forward-filled ones
    /// are listed too.
    std::vector<std::size_t> gaps;
    std::size_t pairs_evaluated = 0;  // similarity series only
    bool pairs_sampled = false;

    Timestamp bucket_start(std::size_t i) const;
};

enum class SimilarityMode {
    AllPairs,   // every admissible (later, earlier, cross-collection) pair
    EdgesOnly,  // admissible pairs at or above the threshold
};

enum class PairScope { All, WithinCategory, AcrossCategory };

/// Daily closes, sorted by date.
struct BtcPrices {
    std::vector<std::pair<Timestamp, double>> closes;
};

/// CSV with at least `Date` (YYYY-MM-DD) and `Close` columns.
BtcPrices load_btc_csv(const std::filesystem::path& path);

struct SeriesOptions {
    SimilarityMode similarity_mode = SimilarityMode::AllPairs;
    double threshold = 0.5;
    PairScope scope = PairScope::All;
    /// Above this many candidate pairs the similarity series is estimated
    /// from this many uniformly sampled pairs, unless `exact` is set.
    std::size_t pair_cap = 5'000'000;
    bool exact = false;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    const BtcPrices* btc = nullptr;
    bool forward_fill = false;
};

TimeSeries build_series(SeriesKind kind, const AssetCatalog& catalog, const EmbeddingStore& store, Sampling sampling,
                        const TimeWindow& window, const SeriesOptions& options = {});

/// `bucket_start,value` with ISO dates; missing values are empty cells.
void write_series_csv(const TimeSeries& s, const std::filesystem::path& path);
TimeSeries read_series_csv(const std::filesystem::path& path);

}  // namespace vinsp
