#include "vinsp/collection_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vinsp/error.hpp"
#include "vinsp/parallel.hpp"
#include "vinsp/similarity.hpp"

namespace vinsp {

std::optional<Linkage> parse_linkage(std::string_view text) {
    if (text == "min") return Linkage::Min;
    if (text == "avg" || text == "mean") return Linkage::Avg;
    if (text == "max") return Linkage::Max;
    return std::nullopt;
}

std::string_view to_string(Linkage l) noexcept {
    switch (l) {
        case Linkage::Min: return "min";
        case Linkage::Avg: return "avg";
        case Linkage::Max: return "max";
    }
    return "avg";
}

double penalty_factor(std::int64_t p, std::int64_t np) {
    if (p < 0 || np < 0) throw data_error(fmt::format("penalty_factor: negative count (p={}, np={})", p, np));
    if (np == 0) return 1.0;
    return 1.0 / (1.0 + std::exp(-static_cast<double>(p) / static_cast<double>(np)));
}

double aggregate_collection_weight(std::span<const double> scores, Linkage criterion, std::int64_t p,
                                   std::int64_t np) {
    if (scores.empty()) throw data_error("aggregate_collection_weight: empty score list");
    double agg = 0.0;
    switch (criterion) {
        case Linkage::Min: agg = *std::min_element(scores.begin(), scores.end()); break;
        case Linkage::Max: agg = *std::max_element(scores.begin(), scores.end()); break;
        case Linkage::Avg: {
            double sum = 0.0;
            for (const double s : scores) sum += s;
            agg = sum / static_cast<double>(scores.size());
            break;
        }
    }
    return std::clamp(agg * penalty_factor(p, np), 0.0, 1.0);
}

namespace {

struct Member {
    std::size_t row;
    Timestamp ts;
};

std::vector<Member> eligible_members(const std::string& collection, const AssetCatalog& catalog,
                                     const EmbeddingStore& store, const std::optional<TimeWindow>& window) {
    std::vector<Member> out;
    const auto it = catalog.collections().find(collection);
    if (it == catalog.collections().end()) throw data_error(fmt::format("unknown collection '{}'", collection));
    for (const auto& id : it->second) {
        const auto& a = catalog.at(id);
        if (window && !window->contains(a.first_sale_ts)) continue;
        if (const auto row = store.index_of(id)) out.push_back({*row, a.first_sale_ts});
    }
    return out;
}

// Aggregates of the best-score list of one ordered collection pair.
struct PairScores {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t scored = 0;
    std::size_t passing = 0;  // p: best score >= threshold
};

struct CollectionLayout {
    std::vector<std::string> names;
    std::vector<std::size_t> begin;  // contiguous packed ranges, size names+1
    std::vector<Timestamp> ts;       // per packed row
    std::vector<std::size_t> rows;   // store row per packed row
    std::vector<std::string> skipped;
};

CollectionLayout layout_collections(const AssetCatalog& catalog, const EmbeddingStore& store,
                                    const TimeWindow& window) {
    CollectionLayout lay;
    for (const auto& [name, members] : catalog.collections()) {
        const std::size_t start = lay.rows.size();
        for (const auto& id : members) {
            const auto& a = catalog.at(id);
            if (!window.contains(a.first_sale_ts)) continue;
            const auto row = store.index_of(id);
            if (!row) {
                lay.skipped.push_back(id);
                continue;
            }
            lay.rows.push_back(*row);
            lay.ts.push_back(a.first_sale_ts);
        }
        if (lay.rows.size() > start) {
            lay.names.push_back(name);
            lay.begin.push_back(start);
        }
    }
    lay.begin.push_back(lay.rows.size());
    std::sort(lay.skipped.begin(), lay.skipped.end());
    return lay;
}

std::array<CollectionGraph, 3> build_all(const AssetCatalog& catalog, const EmbeddingStore& store,
                                         const TimeWindow& window, const GraphBuildOptions& options) {
    check_threshold(options.threshold);
    const CollectionLayout lay = layout_collections(catalog, store, window);
    if (lay.names.empty()) {
        throw data_error(fmt::format("no embedded assets first-sold inside window [{}, {}]", window.t_start,
                                     window.t_end));
    }
    const PackedEmbeddings packed(store, lay.rows);
    const std::size_t c = lay.names.size();
    const double threshold = options.threshold;
    const unsigned workers = resolve_workers(options.workers);

    // scores[i * c + j] describes the ordered pair i -> j.
    std::vector<PairScores> scores(c * c);
    parallel_for(c, workers, [&](unsigned, std::size_t i) {
        const std::size_t i0 = lay.begin[i], i1 = lay.begin[i + 1];
        std::vector<double> best_i, best_j;
        for (std::size_t j = i + 1; j < c; ++j) {
            const std::size_t j0 = lay.begin[j], j1 = lay.begin[j + 1];
            best_i.assign(i1 - i0, -std::numeric_limits<double>::infinity());
            best_j.assign(j1 - j0, -std::numeric_limits<double>::infinity());
            const std::size_t col_block = packed.column_block();
            for (std::size_t b0 = j0; b0 < j1; b0 += col_block) {
                packed.tile(i0, i1, b0, std::min(j1, b0 + col_block), false,
                            [&](std::size_t p, std::size_t q, double sim) {
                                if (lay.ts[p] > lay.ts[q]) {
                                    best_i[p - i0] = std::max(best_i[p - i0], sim);
                                } else if (lay.ts[q] > lay.ts[p]) {
                                    best_j[q - j0] = std::max(best_j[q - j0], sim);
                                }
                            });
            }
            auto fold = [threshold](const std::vector<double>& best, PairScores& into) {
                for (const double s : best) {
                    if (s == -std::numeric_limits<double>::infinity()) continue;
                    into.min = std::min(into.min, s);
                    into.max = std::max(into.max, s);
                    into.sum += s;
                    ++into.scored;
                    if (s >= threshold) ++into.passing;
                }
            };
            // Each (i, j) cell is written only by the worker that owns i.
            fold(best_i, scores[i * c + j]);
            fold(best_j, scores[j * c + i]);
        }
    });

    std::array<CollectionGraph, 3> graphs;
    const std::array<Linkage, 3> kinds{Linkage::Min, Linkage::Avg, Linkage::Max};
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < c; ++i) {
            const auto size_i = static_cast<std::int64_t>(lay.begin[i + 1] - lay.begin[i]);
            for (std::size_t j = 0; j < c; ++j) {
                const PairScores& s = scores[i * c + j];
                if (i == j || s.scored == 0) continue;
                double agg = 0.0;
                switch (kinds[k]) {
                    case Linkage::Min: agg = s.min; break;
                    case Linkage::Avg: agg = s.sum / static_cast<double>(s.scored); break;
                    case Linkage::Max: agg = s.max; break;
                }
                const auto p = static_cast<std::int64_t>(s.passing);
                const double w = std::clamp(agg * penalty_factor(p, size_i - p), 0.0, 1.0);
                if (w >= threshold) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w});
            }
        }
        graphs[k].window = window;
        graphs[k].criterion = kinds[k];
        graphs[k].threshold = threshold;
        graphs[k].graph = Digraph(lay.names, std::move(edges));
        graphs[k].skipped_assets = lay.skipped;
    }
    return graphs;
}

}  // namespace

std::vector<double> best_cross_similarities(const std::string& from, const std::string& to,
                                            const AssetCatalog& catalog, const EmbeddingStore& store,
                                            const std::optional<TimeWindow>& window) {
    const auto a = eligible_members(from, catalog, store, window);
    const auto b = eligible_members(to, catalog, store, window);
    std::vector<double> out;
    for (const auto& ma : a) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& mb : b) {
            if (ma.ts > mb.ts) best = std::max(best, cosine_similarity(store.row(ma.row), store.row(mb.row)));
        }
        if (best != -std::numeric_limits<double>::infinity()) out.push_back(best);
    }
    return out;
}

CollectionGraph build_collection_graph(const AssetCatalog& catalog, const EmbeddingStore& store,
                                       const TimeWindow& window, Linkage criterion,
                                       const GraphBuildOptions& options) {
    auto all = build_all(catalog, store, window, options);
    return std::move(all[static_cast<std::size_t>(criterion)]);
}

std::array<CollectionGraph, 3> build_collection_graphs(const AssetCatalog& catalog, const EmbeddingStore& store,
                                                       const TimeWindow& window,
                                                       const GraphBuildOptions& options) {
    return build_all(catalog, store, window, options);
}

}  // namespace vinsp
