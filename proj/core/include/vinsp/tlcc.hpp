#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsp/series.hpp"

namespace vinsp {

/// Sample Pearson correlation over pairwise-complete observations. Throws a
/// data error with fewer than 3 complete pairs or zero variance on a side.
double pearson(std::span<const std::optional<double>> s, std::span<const std::optional<double>> t);
double pearson(std::span<const double> s, std::span<const double> t);

struct TlccResult {
    int max_lag = 0;
    std::vector<int> lags;                          // -max_lag .. max_lag
    std::vector<std::optional<double>> correlations;  // nullopt where undefined
    std::vector<std::size_t> n_overlap;
    std::optional<int> peak_lag;  // argmax |r|
    std::optional<double> peak_r;

    std::optional<double> at(int lag) const;
};

/// r(l) = pearson(s[t + l], s2[t]) over the overlapping indices; no padding
/// and no wraparound. Negative lags mean s leads s2.
TlccResult tlcc(std::span<const std::optional<double>> s, std::span<const std::optional<double>> s2, int max_lag);

/// Aligns two bucketed series on their common buckets first; both must use
/// the same sampling.
TlccResult tlcc(const TimeSeries& s, const TimeSeries& s2, int max_lag);

/// `lag,r,n_overlap`; undefined correlations are empty cells.
void write_correlogram_csv(const TlccResult& r, const std::filesystem::path& path);

nlohmann::json to_json(const TlccResult& r);

}  // namespace vinsp
