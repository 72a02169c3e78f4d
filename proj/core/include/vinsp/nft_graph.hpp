#pragma once

#include <string>
#include <vector>

#include "vinsp/catalog.hpp"
#include "vinsp/digraph.hpp"
#include "vinsp/embeddings.hpp"
#include "vinsp/types.hpp"

namespace vinsp {

/// Time-respecting visual-inspiration graph over individual assets.
///
/// Nodes are the windowed assets that have an embedding, ordered by asset id.
/// An edge u -> v means u was first sold strictly after v, the two belong to
/// different collections, and their cosine similarity is at least the
/// threshold. Edges therefore always point back in time and the graph is a DAG.
struct InspirationGraph {
    TimeWindow window;
    double threshold = 0.5;
    Digraph graph;
    std::vector<Timestamp> timestamps;        // per node
    std::vector<std::string> collections;     // per node
    std::vector<std::string> skipped_assets;  // windowed but without embedding
};

struct GraphBuildOptions {
    double threshold = 0.5;
    unsigned workers = 0;  // 0 = hardware concurrency
};

/// Blocked all-pairs build; the edge list is sorted by (source, target) and
/// independent of the worker count.
InspirationGraph build_nft_graph(const AssetCatalog& catalog, const EmbeddingStore& store,
                                 const TimeWindow& window, const GraphBuildOptions& options = {});

/// Throws a config error unless threshold is in (0, 1].
void check_threshold(double threshold);

}  // namespace vinsp
