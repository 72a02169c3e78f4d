#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vinsp/catalog.hpp"
#include "vinsp/digraph.hpp"
#include "vinsp/embeddings.hpp"
#include "vinsp/nft_graph.hpp"

namespace vinsp {

/// Set function applied to the per-asset best cross-collection similarities.
enum class Linkage { Min, Avg, Max };

std::optional<Linkage> parse_linkage(std::string_view text);
std::string_view to_string(Linkage l) noexcept;

/// For each asset a of collection `from` (in asset-id order), the maximum
/// similarity to any asset of `to` first sold strictly before a. Assets with
/// no earlier counterpart are omitted. Only assets inside `window` (when
/// given) and with an embedding take part.
std::vector<double> best_cross_similarities(const std::string& from, const std::string& to,
                                            const AssetCatalog& catalog, const EmbeddingStore& store,
                                            const std::optional<TimeWindow>& window = std::nullopt);

/// Sigmoid 1 / (1 + exp(-p/np)); np == 0 yields exactly 1.
double penalty_factor(std::int64_t p, std::int64_t np);

/// linkage(scores) * penalty_factor(p, np), clamped to [0, 1].
double aggregate_collection_weight(std::span<const double> scores, Linkage criterion, std::int64_t p,
                                   std::int64_t np);

struct CollectionGraph {
    TimeWindow window;
    Linkage criterion = Linkage::Avg;
    double threshold = 0.5;
    Digraph graph;  // nodes: collections with >= 1 windowed, embedded asset
    std::vector<std::string> skipped_assets;
};

CollectionGraph build_collection_graph(const AssetCatalog& catalog, const EmbeddingStore& store,
                                       const TimeWindow& window, Linkage criterion,
                                       const GraphBuildOptions& options = {});

/// Builds the Min, Avg and Max graphs from one pass over the pair similarities.
std::array<CollectionGraph, 3> build_collection_graphs(const AssetCatalog& catalog, const EmbeddingStore& store,
                                                       const TimeWindow& window,
                                                       const GraphBuildOptions& options = {});

}  // namespace vinsp
