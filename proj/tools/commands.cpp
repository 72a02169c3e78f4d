#include "commands.hpp"

#include <fstream>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "manifest.hpp"
#include "vinsp/catalog.hpp"
#include "vinsp/collection_graph.hpp"
#include "vinsp/embeddings.hpp"
#include "vinsp/error.hpp"
#include "vinsp/graph_export.hpp"
#include "vinsp/heatmap.hpp"
#include "vinsp/louvain.hpp"
#include "vinsp/market.hpp"
#include "vinsp/nft_graph.hpp"
#include "vinsp/oracle.hpp"
#include "vinsp/power_law.hpp"
#include "vinsp/series.hpp"
#include "vinsp/shapley.hpp"
#include "vinsp/structural.hpp"
#include "vinsp/tlcc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vinsp::cli {

namespace {

struct Run {
    const RunConfig& cfg;
    fs::path out;
    std::string hash;
    Manifest manifest;

    Run(const std::string& command, const RunConfig& c)
        : cfg(c), out(c.output_dir), hash(config_hash(c)), manifest(command, to_json(c), hash, c.seed) {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec || !fs::is_directory(out))
            throw io_error(fmt::format("output directory '{}' is not usable", out.string()));
    }

    void write_json(const std::string& name, json j) {
        j["config_hash"] = hash;
        j["seed"] = cfg.seed;
        std::ofstream f(out / name, std::ios::trunc);
        if (!f) throw io_error(fmt::format("cannot write '{}'", (out / name).string()));
        f << j.dump(2) << '\n';
        f.close();
        if (!f) throw io_error(fmt::format("write failed for '{}'", (out / name).string()));
        manifest.add_artifact(out, name);
    }

    void artifact(const std::string& name) { manifest.add_artifact(out, name); }
    int finish(int status = 0) {
        manifest.write(out);
        return status;
    }
};

const std::string& require(const std::string& value, const char* key) {
    if (value.empty()) throw config_error(fmt::format("missing required setting '{}'", key));
    return value;
}

AssetCatalog load_inputs_catalog(Run& run) {
    const auto& c = run.cfg;
    auto catalog = load_catalog(require(c.metadata, "metadata"), require(c.transactions, "transactions"));
    run.manifest.add_input("metadata", c.metadata);
    run.manifest.add_input("transactions", c.transactions);
    return catalog;
}

struct Dataset {
    AssetCatalog catalog;
    EmbeddingStore store;
};

Dataset load_dataset(Run& run) {
    const auto& c = run.cfg;
    auto catalog = load_inputs_catalog(run);
    auto store = load_embeddings(require(c.embeddings, "embeddings"), require(c.ids, "ids"));
    run.manifest.add_input("embeddings", c.embeddings);
    run.manifest.add_input("ids", c.ids);
    auto joined = catalog.with_embeddings(store);
    return {std::move(joined), std::move(store)};
}

GraphBuildOptions graph_options(const RunConfig& c) {
    check_threshold(c.threshold);
    return {c.threshold, c.workers};
}

EdgeFormat edge_format(const RunConfig& c) {
    if (c.format.empty()) return EdgeFormat::Tsv;
    const auto f = parse_edge_format(c.format);
    if (!f) throw config_error(fmt::format("format '{}' not available here (tsv or dot)", c.format));
    return *f;
}

// The analysed graph: a saved edge list, or the inspiration graph built from
// the inputs. The catalog is loaded too when `with_catalog` is set or the
// graph has to be built.
Digraph input_graph(Run& run, AssetCatalog* catalog = nullptr) {
    Digraph g;
    if (!run.cfg.edges.empty()) {
        g = read_edge_list(run.cfg.edges);
        run.manifest.add_input("edges", run.cfg.edges);
        if (catalog) *catalog = load_inputs_catalog(run);
    } else {
        auto data = load_dataset(run);
        auto built = build_nft_graph(data.catalog, data.store, resolve_window(run.cfg, data.catalog.span()),
                                     graph_options(run.cfg));
        g = std::move(built.graph);
        if (catalog) *catalog = std::move(data.catalog);
    }
    return run.cfg.drop_isolated ? g.without_isolated() : g;
}

int cmd_build_graph(Run& run) {
    const auto data = load_dataset(run);
    const auto g = build_nft_graph(data.catalog, data.store, resolve_window(run.cfg, data.catalog.span()),
                                   graph_options(run.cfg));
    const auto fmt_ = edge_format(run.cfg);
    const std::string name = fmt_ == EdgeFormat::Dot ? "nft_graph.dot" : "nft_graph.tsv";
    export_edge_list(g.graph, run.out / name, fmt_);
    run.artifact(name);
    run.write_json("nft_graph.json", build_report(g));
    return run.finish();
}

int cmd_build_collections(Run& run) {
    const auto data = load_dataset(run);
    const auto window = resolve_window(run.cfg, data.catalog.span());
    const auto opts = graph_options(run.cfg);
    const auto fmt_ = edge_format(run.cfg);
    std::vector<Linkage> wanted;
    if (run.cfg.linkage == "all") {
        wanted = {Linkage::Min, Linkage::Avg, Linkage::Max};
    } else if (const auto l = parse_linkage(run.cfg.linkage)) {
        wanted = {*l};
    } else {
        throw config_error(fmt::format("unknown linkage '{}' (min, avg, max or all)", run.cfg.linkage));
    }
    for (const auto l : wanted) {
        const auto g = build_collection_graph(data.catalog, data.store, window, l, opts);
        const std::string stem = fmt::format("collections_{}", to_string(l));
        const std::string name = stem + (fmt_ == EdgeFormat::Dot ? ".dot" : ".tsv");
        export_edge_list(g.graph, run.out / name, fmt_);
        run.artifact(name);
        run.write_json(stem + ".json", build_report(g));
    }
    return run.finish();
}

int cmd_stats(Run& run) {
    if (!run.cfg.format.empty() && run.cfg.format != "json" && run.cfg.format != "csv")
        throw config_error(fmt::format("format '{}' not available here (json or csv)", run.cfg.format));
    const auto g = input_graph(run);
    StructuralOptions opts;
    opts.undirected_paths = run.cfg.undirected_paths;
    opts.seed = run.cfg.seed;
    opts.workers = run.cfg.workers;
    const auto j = to_json(structural_summary(g, opts));
    if (run.cfg.format == "csv") {
        std::ofstream f(run.out / "stats.csv", std::ios::trunc);
        f << "metric,value\n";
        for (const auto& [k, v] : j.items()) f << k << ',' << v.dump() << '\n';
        f << "config_hash," << run.hash << '\n';
        if (!f) throw io_error("write failed for stats.csv");
        f.close();
        run.artifact("stats.csv");
    } else {
        run.write_json("stats.json", j);
    }
    return run.finish();
}

int cmd_powerlaw(Run& run) {
    const auto& c = run.cfg;
    if (c.degree != "in" && c.degree != "out") throw config_error(fmt::format("degree must be in or out, got '{}'", c.degree));
    const auto g = input_graph(run);
    std::vector<std::uint64_t> degrees(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) degrees[u] = c.degree == "in" ? g.in_degree(u) : g.out_degree(u);
    PowerLawOptions opts;
    opts.bootstraps = c.bootstraps;
    opts.seed = c.seed;
    opts.workers = c.workers;
    const auto fit = fit_power_law(degrees, opts);
    auto j = to_json(fit);
    j["degree"] = c.degree;
    run.write_json("powerlaw.json", j);
    write_scan_csv(fit, run.out / "powerlaw_scan.csv");
    run.artifact("powerlaw_scan.csv");
    return run.finish();
}

int cmd_communities(Run& run) {
    const auto g = input_graph(run);
    LouvainOptions opts;
    opts.seed = run.cfg.seed;
    const auto p = louvain_communities(g, opts);
    {
        std::ofstream f(run.out / "communities.tsv", std::ios::trunc);
        f << "node\tcommunity\n";
        for (NodeId u = 0; u < g.node_count(); ++u) f << g.labels()[u] << '\t' << p.assignment[u] << '\n';
        if (!f) throw io_error("write failed for communities.tsv");
    }
    run.artifact("communities.tsv");
    auto j = to_json(p);
    j.erase("assignment");
    run.write_json("communities.json", j);
    return run.finish();
}

int cmd_market(Run& run) {
    PricePooling pooling;
    if (run.cfg.pooling == "per-asset") pooling = PricePooling::PerAsset;
    else if (run.cfg.pooling == "per-transaction") pooling = PricePooling::PerTransaction;
    else throw config_error(fmt::format("pooling must be per-asset or per-transaction, got '{}'", run.cfg.pooling));
    AssetCatalog catalog;
    const auto g = input_graph(run, &catalog);
    const auto report = financial_dichotomy(catalog, classify_roles(g), pooling);
    run.write_json("market.json", to_json(report));
    write_dichotomy_csv(report, run.out / "market.csv");
    run.artifact("market.csv");
    return run.finish();
}

int cmd_series(Run& run) {
    const auto& c = run.cfg;
    const auto kind = parse_series_kind(c.series);
    if (!kind) throw config_error(fmt::format("unknown series '{}'", c.series));
    const auto sampling = parse_sampling(c.sampling);
    if (!sampling) throw config_error(fmt::format("unknown sampling '{}'", c.sampling));

    SeriesOptions opts;
    if (c.similarity_mode == "all-pairs") opts.similarity_mode = SimilarityMode::AllPairs;
    else if (c.similarity_mode == "edges-only") opts.similarity_mode = SimilarityMode::EdgesOnly;
    else throw config_error(fmt::format("unknown similarity mode '{}'", c.similarity_mode));
    if (c.scope == "all") opts.scope = PairScope::All;
    else if (c.scope == "within-category") opts.scope = PairScope::WithinCategory;
    else if (c.scope == "across-category") opts.scope = PairScope::AcrossCategory;
    else throw config_error(fmt::format("unknown pair scope '{}'", c.scope));
    check_threshold(c.threshold);
    opts.threshold = c.threshold;
    opts.pair_cap = c.pair_cap;
    opts.exact = c.exact_pairs;
    opts.seed = c.seed;
    opts.workers = c.workers;
    opts.forward_fill = c.forward_fill;

    BtcPrices btc;
    if (*kind == SeriesKind::BtcClose) {
        btc = load_btc_csv(require(c.btc_csv, "btc_csv"));
        run.manifest.add_input("btc_csv", c.btc_csv);
        opts.btc = &btc;
    }
    const bool needs_embeddings = *kind == SeriesKind::AvgPairwiseSimilarity;
    Dataset data;
    if (needs_embeddings) {
        data = load_dataset(run);
    } else if (!c.metadata.empty() || *kind != SeriesKind::BtcClose) {
        data.catalog = load_inputs_catalog(run);
    }
    TimeWindow span;
    if (data.catalog.size() > 0) span = data.catalog.span();
    else if (!btc.closes.empty()) span = TimeWindow(btc.closes.front().first, btc.closes.back().first);
    const auto s = build_series(*kind, data.catalog, data.store, *sampling, resolve_window(c, span), opts);

    const std::string stem = fmt::format("series_{}_{}", to_string(*kind), to_string(*sampling));
    write_series_csv(s, run.out / (stem + ".csv"));
    run.artifact(stem + ".csv");
    json gaps = json::array();
    for (const auto i : s.gaps) gaps.push_back(format_date(s.bucket_start(i)));
    json j{{"series", to_string(*kind)},
           {"sampling", to_string(*sampling)},
           {"origin", format_date(s.origin)},
           {"buckets", s.values.size()},
           {"gaps", gaps}};
    if (*kind == SeriesKind::AvgPairwiseSimilarity) {
        j["pairs_evaluated"] = s.pairs_evaluated;
        j["pairs_sampled"] = s.pairs_sampled;
    }
    run.write_json(stem + ".json", j);
    return run.finish();
}

int cmd_tlcc(Run& run) {
    const auto& c = run.cfg;
    const auto a = read_series_csv(require(c.series_a, "series_a"));
    const auto b = read_series_csv(require(c.series_b, "series_b"));
    run.manifest.add_input("series_a", c.series_a);
    run.manifest.add_input("series_b", c.series_b);
    if (a.sampling != b.sampling) throw config_error("series_a and series_b use different sampling");
    if (c.tlcc_max_lag < 0) throw config_error("tlcc_max_lag must be non-negative");
    const int max_lag = c.tlcc_max_lag > 0 ? c.tlcc_max_lag : (a.sampling == Sampling::Monthly ? 12 : 52);

    const auto r = tlcc(a, b, max_lag);
    write_correlogram_csv(r, run.out / "tlcc.csv");
    run.artifact("tlcc.csv");
    run.write_json("tlcc.json", to_json(r));

    std::vector<int> undefined;
    for (std::size_t i = 0; i < r.lags.size(); ++i)
        if (!r.correlations[i]) undefined.push_back(r.lags[i]);
    run.manifest.set("undefined_lags", undefined);
    run.finish();
    if (!undefined.empty()) {
        std::string list;
        for (const int l : undefined) list += (list.empty() ? "" : ",") + std::to_string(l);
        throw data_error(fmt::format("fewer than 3 overlapping buckets at lags {}; outputs written", list));
    }
    return 0;
}

int cmd_explain(Run& run) {
    const auto& c = run.cfg;
    if (c.oracle.empty()) throw config_error("missing required setting 'oracle'");
    if (c.samples == 0) throw config_error("samples must be positive");
    if (c.cell_pixels == 0) throw config_error("cell_pixels must be positive");
    if (c.oracle_timeout_ms <= 0) throw config_error("oracle_timeout_ms must be positive");
    ProcessOracle::Options po;
    po.timeout = std::chrono::milliseconds(c.oracle_timeout_ms);
    ProcessOracle oracle(c.oracle, po);
    ShapleyOptions opts;
    opts.samples = c.samples;
    opts.seed = c.seed;
    opts.eval_budget = c.eval_budget;
    const auto map = explain_pair(oracle, c.pair_id, opts);

    const std::string stem = fmt::format("explain_{}", c.pair_id);
    write_heatmap_csv(map, run.out / (stem + ".csv"));
    run.artifact(stem + ".csv");
    write_heatmap_ppm(map, run.out / (stem + ".ppm"), c.cell_pixels);
    run.artifact(stem + ".ppm");
    auto j = to_json(map);
    j["pair_id"] = c.pair_id;
    run.write_json(stem + ".json", j);
    run.manifest.set("oracle_evaluations", oracle.evaluations());
    return run.finish();
}

}  // namespace

int run_command(const std::string& command, const RunConfig& config) {
    static const std::map<std::string, std::function<int(Run&)>> table{
        {"build-graph", cmd_build_graph}, {"build-collections", cmd_build_collections},
        {"stats", cmd_stats},             {"powerlaw", cmd_powerlaw},
        {"communities", cmd_communities}, {"market", cmd_market},
        {"series", cmd_series},           {"tlcc", cmd_tlcc},
        {"explain", cmd_explain},
    };
    const auto it = table.find(command);
    if (it == table.end()) throw config_error(fmt::format("unknown subcommand '{}'", command));
    Run run(command, config);
    return it->second(run);
}

}  // namespace vinsp::cli
