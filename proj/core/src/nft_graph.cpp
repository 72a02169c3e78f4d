#include "vinsp/nft_graph.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vinsp/error.hpp"
#include "vinsp/parallel.hpp"
#include "vinsp/similarity.hpp"

namespace vinsp {

void check_threshold(double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw config_error(fmt::format("similarity threshold must be in (0, 1], got {}", threshold));
}

InspirationGraph build_nft_graph(const AssetCatalog& catalog, const EmbeddingStore& store,
                                 const TimeWindow& window, const GraphBuildOptions& options) {
    check_threshold(options.threshold);

    InspirationGraph out;
    out.window = window;
    out.threshold = options.threshold;

    std::vector<std::string> labels;
    std::vector<std::size_t> rows;
    std::vector<std::uint32_t> coll_index;
    std::vector<std::string> coll_names;
    for (const auto& [id, asset] : catalog.assets()) {
        if (!window.contains(asset.first_sale_ts)) continue;
        const auto row = store.index_of(id);
        if (!row) {
            out.skipped_assets.push_back(id);
            continue;
        }
        labels.push_back(id);
        rows.push_back(*row);
        out.timestamps.push_back(asset.first_sale_ts);
        out.collections.push_back(asset.collection_id);
    }
    if (labels.empty()) {
        throw data_error(fmt::format("no embedded assets first-sold inside window [{}, {}]", window.t_start,
                                     window.t_end));
    }
    {
        coll_names = out.collections;
        std::sort(coll_names.begin(), coll_names.end());
        coll_names.erase(std::unique(coll_names.begin(), coll_names.end()), coll_names.end());
        coll_index.reserve(out.collections.size());
        for (const auto& c : out.collections) {
            coll_index.push_back(static_cast<std::uint32_t>(
                std::lower_bound(coll_names.begin(), coll_names.end(), c) - coll_names.begin()));
        }
    }

    const PackedEmbeddings packed(store, rows);
    const std::size_t n = packed.size();
    const std::size_t block = PackedEmbeddings::kBlockRows;
    const std::size_t col_block = packed.column_block();
    const std::size_t n_blocks = (n + block - 1) / block;
    const unsigned workers = resolve_workers(options.workers);
    const double threshold = options.threshold;
    const auto& ts = out.timestamps;

    std::vector<std::vector<Edge>> partial(workers);
    parallel_for(n_blocks, workers, [&](unsigned worker, std::size_t b) {
        const std::size_t a0 = b * block;
        const std::size_t a1 = std::min(n, a0 + block);
        auto& sink = partial[worker];
        for (std::size_t c0 = a0; c0 < n; c0 += col_block) {
            const std::size_t c1 = std::min(n, c0 + col_block);
            packed.tile(a0, a1, c0, c1, true, [&](std::size_t p, std::size_t q, double sim) {
                if (sim < threshold || ts[p] == ts[q] || coll_index[p] == coll_index[q]) return;
                if (ts[p] > ts[q])
                    sink.push_back({static_cast<NodeId>(p), static_cast<NodeId>(q), sim});
                else
                    sink.push_back({static_cast<NodeId>(q), static_cast<NodeId>(p), sim});
            });
        }
    });

    std::vector<Edge> edges;
    std::size_t total = 0;
    for (const auto& part : partial) total += part.size();
    edges.reserve(total);
    for (auto& part : partial) edges.insert(edges.end(), part.begin(), part.end());
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    out.graph = Digraph(std::move(labels), std::move(edges));
    return out;
}

}  // namespace vinsp
