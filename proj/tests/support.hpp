#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "vinsp/catalog.hpp"
#include "vinsp/digraph.hpp"
#include "vinsp/embeddings.hpp"

namespace testing_support {

struct Synthetic {
    vinsp::AssetCatalog catalog;
    vinsp::EmbeddingStore store;
};

struct SyntheticSpec {
    std::size_t assets = 100;
    std::size_t collections = 5;
    std::size_t dim = 16;
    std::int64_t t_lo = 1'600'000'000;
    std::int64_t t_span = 86'400 * 30;
    /// Draw timestamps from this many distinct values to force ties.
    std::size_t distinct_times = 0;
    /// Fraction of assets left without an embedding row.
    double unembedded = 0.0;
    /// Embeddings are a per-collection centre plus noise of this scale.
    double noise = 0.6;
    std::size_t tx_per_asset = 3;
    /// Collections share this many style centres (0 = one centre each), which
    /// makes cross-collection similarity common.
    std::size_t styles = 0;
};

inline Synthetic make_synthetic(std::uint64_t seed, const SyntheticSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> centre(spec.collections, std::vector<double>(spec.dim));
    for (auto& c : centre)
        for (auto& x : c) x = gauss(rng);
    if (spec.styles > 0)
        for (std::size_t c = spec.styles; c < spec.collections; ++c)
            for (std::size_t k = 0; k < spec.dim; ++k) centre[c][k] = centre[c % spec.styles][k] + 0.3 * gauss(rng);

    std::vector<vinsp::AssetRecord> assets;
    std::vector<vinsp::Transaction> txs;
    std::vector<float> data;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < spec.assets; ++i) {
        vinsp::AssetRecord a;
        a.asset_id = fmt::format("a{:05d}", i);
        const std::size_t c = static_cast<std::size_t>(rng() % spec.collections);
        a.collection_id = fmt::format("c{:03d}", c);
        a.category = static_cast<vinsp::Category>(c % 4);
        std::int64_t offset;
        if (spec.distinct_times)
            offset = static_cast<std::int64_t>(rng() % spec.distinct_times) * (spec.t_span / spec.distinct_times);
        else
            offset = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(spec.t_span));
        a.first_sale_ts = spec.t_lo + offset;
        for (std::size_t k = 0; k < spec.tx_per_asset; ++k) {
            const std::int64_t ts = a.first_sale_ts + static_cast<std::int64_t>(k) * 3600 * (1 + rng() % 48);
            txs.push_back({a.asset_id, ts, 10.0 + 1000.0 * unit(rng)});
        }
        if (unit(rng) >= spec.unembedded) {
            for (std::size_t k = 0; k < spec.dim; ++k)
                data.push_back(static_cast<float>(centre[c][k] + spec.noise * gauss(rng)));
            ids.push_back(a.asset_id);
        }
        assets.push_back(std::move(a));
    }
    return {vinsp::AssetCatalog(std::move(assets), std::move(txs)),
            vinsp::EmbeddingStore(spec.dim, std::move(data), std::move(ids))};
}

struct TinyAsset {
    std::string id;
    std::string collection;
    vinsp::Timestamp ts;
    std::vector<float> embedding;  // empty = no embedding row
};

inline Synthetic make_tiny(const std::vector<TinyAsset>& items) {
    std::vector<vinsp::AssetRecord> assets;
    std::vector<float> data;
    std::vector<std::string> ids;
    std::size_t d = 0;
    for (const auto& t : items) {
        vinsp::AssetRecord a;
        a.asset_id = t.id;
        a.collection_id = t.collection;
        a.first_sale_ts = t.ts;
        assets.push_back(a);
        if (t.embedding.empty()) continue;
        d = t.embedding.size();
        data.insert(data.end(), t.embedding.begin(), t.embedding.end());
        ids.push_back(t.id);
    }
    return {vinsp::AssetCatalog(std::move(assets), {}), vinsp::EmbeddingStore(d, std::move(data), std::move(ids))};
}

/// Unit 2-vector at angle acos(c) from (1, 0).
inline std::vector<float> at_cos(double c) {
    return {static_cast<float>(c), static_cast<float>(std::sqrt(std::max(0.0, 1.0 - c * c)))};
}

/// Plain cosine with sequential double accumulation.
inline double naive_cosine(std::span<const float> a, std::span<const float> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += double(a[k]) * double(b[k]);
    for (std::size_t k = 0; k < a.size(); ++k) na += double(a[k]) * double(a[k]);
    for (std::size_t k = 0; k < b.size(); ++k) nb += double(b[k]) * double(b[k]);
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

using LabelEdge = std::pair<std::string, std::string>;

/// The three edge rules checked pair by pair.
inline std::set<LabelEdge> naive_edges(const vinsp::AssetCatalog& catalog, const vinsp::EmbeddingStore& store,
                                       vinsp::Timestamp t_start, vinsp::Timestamp t_end, double threshold) {
    std::vector<const vinsp::AssetRecord*> nodes;
    for (const auto& [id, a] : catalog.assets())
        if (a.first_sale_ts >= t_start && a.first_sale_ts <= t_end && store.index_of(id)) nodes.push_back(&a);
    std::set<LabelEdge> out;
    for (const auto* i : nodes)
        for (const auto* j : nodes) {
            if (!(i->first_sale_ts > j->first_sale_ts)) continue;
            if (i->collection_id == j->collection_id) continue;
            const double s = naive_cosine(store.row(*store.index_of(i->asset_id)), store.row(*store.index_of(j->asset_id)));
            if (s >= threshold) out.emplace(i->asset_id, j->asset_id);
        }
    return out;
}

inline std::set<LabelEdge> label_edges(const vinsp::Digraph& g) {
    std::set<LabelEdge> out;
    for (const auto& e : g.edges()) out.emplace(g.labels()[e.source], g.labels()[e.target]);
    return out;
}

inline vinsp::Digraph make_digraph(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    std::vector<vinsp::Edge> es;
    for (auto [u, v] : edges) es.push_back({vinsp::NodeId(u), vinsp::NodeId(v), 1.0});
    return vinsp::Digraph(std::move(labels), std::move(es));
}

/// 0..4 and 5..9 each fully ordered (u -> v for u > v), plus 5 -> 4.
inline vinsp::Digraph two_clique_graph() {
    std::vector<std::pair<int, int>> e;
    for (int base : {0, 5})
        for (int u = base; u < base + 5; ++u)
            for (int v = base; v < u; ++v) e.emplace_back(u, v);
    e.emplace_back(5, 4);
    return make_digraph(10, e);
}

inline vinsp::Digraph random_digraph(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> e;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v && coin(rng)) e.emplace_back(int(u), int(v));
    return make_digraph(n, e);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / fmt::format("vinsp-{}-{:x}", tag, rd());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing_support
