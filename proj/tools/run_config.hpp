#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsp/types.hpp"

namespace vinsp::cli {

/// Effective settings of one run: config file first, command-line flags on top.
struct RunConfig {
    std::string metadata;
    std::string transactions;
    std::string embeddings;
    std::string ids;
    std::string btc_csv;
    std::string output_dir = ".";
    std::string edges;  // precomputed edge list instead of building the graph

    std::string window_start;  // YYYY-MM-DD or epoch seconds; empty = data span
    std::string window_end;
    double threshold = 0.5;
    std::string linkage = "avg";
    std::string sampling = "monthly";
    int tlcc_max_lag = 0;  // 0 = one year of buckets
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string format;

    bool drop_isolated = false;
    bool undirected_paths = false;
    std::size_t bootstraps = 1000;
    std::string degree = "in";
    std::string pooling = "per-asset";

    std::string series = "similarity";
    std::string similarity_mode = "all-pairs";
    std::string scope = "all";
    std::size_t pair_cap = 5'000'000;
    bool exact_pairs = false;
    bool forward_fill = false;
    std::string series_a;
    std::string series_b;

    std::vector<std::string> oracle;
    std::string pair_id = "pair";
    std::size_t samples = 10'000;
    std::size_t eval_budget = 0;
    std::uint32_t cell_pixels = 16;
    int oracle_timeout_ms = 120'000;
};

RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

/// Hash over the settings that can change results; output_dir and workers
/// are excluded.
std::string config_hash(const RunConfig& c);

/// Resolved analysis window; falls back to `span` for missing ends.
TimeWindow resolve_window(const RunConfig& c, const TimeWindow& span);

}  // namespace vinsp::cli
