#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "run_config.hpp"
#include "vinsp/error.hpp"

using vinsp::cli::RunConfig;

namespace {

// Flags are parsed into a scratch RunConfig and copied over the config-file
// values only when given on the command line.
class Binder {
public:
    Binder(CLI::App* app, RunConfig& scratch) : app_(app), scratch_(scratch) {}

    template <class T>
    Binder& opt(const std::string& name, T RunConfig::*member, const std::string& help) {
        auto* o = app_->add_option(name, scratch_.*member, help);
        overrides_.push_back({o, [member](RunConfig& dst, const RunConfig& src) { dst.*member = src.*member; }});
        return *this;
    }
    Binder& flag(const std::string& name, bool RunConfig::*member, const std::string& help) {
        auto* o = app_->add_flag(name, scratch_.*member, help);
        overrides_.push_back({o, [member](RunConfig& dst, const RunConfig& src) { dst.*member = src.*member; }});
        return *this;
    }
    Binder& oracle_command(std::string& text) {
        auto* o = app_->add_option("--oracle", text, "Oracle command line, e.g. \"python -m embed_service --serve-oracle A B\"");
        overrides_.push_back({o, [&text](RunConfig& dst, const RunConfig&) {
                                  std::istringstream in(text);
                                  dst.oracle.clear();
                                  for (std::string w; in >> w;) dst.oracle.push_back(w);
                              }});
        return *this;
    }

    void apply(RunConfig& dst) const {
        for (const auto& [o, copy] : overrides_)
            if (o->count() > 0) copy(dst, scratch_);
    }

    CLI::App* app() const { return app_; }

private:
    CLI::App* app_;
    RunConfig& scratch_;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>> overrides_;
};

void data_inputs(Binder& b) {
    b.opt("--metadata", &RunConfig::metadata, "Asset metadata CSV")
        .opt("--transactions", &RunConfig::transactions, "Transactions CSV")
        .opt("--embeddings", &RunConfig::embeddings, "EMBV1 embedding file")
        .opt("--ids", &RunConfig::ids, "Embedding row ids")
        .opt("--window-start", &RunConfig::window_start, "Window start (YYYY-MM-DD or epoch seconds)")
        .opt("--window-end", &RunConfig::window_end, "Window end, inclusive (YYYY-MM-DD or epoch seconds)")
        .opt("--threshold", &RunConfig::threshold, "Similarity threshold in (0,1]");
}

void graph_source(Binder& b) {
    data_inputs(b);
    b.opt("--edges", &RunConfig::edges, "Read the graph from an edge-list TSV instead of building it")
        .flag("--drop-isolated", &RunConfig::drop_isolated, "Drop nodes without edges");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vinsp: visual inspiration analytics for NFT collections"};
    app.require_subcommand(1);
    app.set_version_flag("--version", VINSP_VERSION);

    RunConfig scratch;
    std::string config_path, oracle_text;
    std::vector<Binder> binders;

    auto sub = [&](const char* name, const char* help) -> Binder& {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "JSON run configuration; flags override it");
        auto& b = binders.emplace_back(s, scratch);
        b.opt("--output-dir,-o", &RunConfig::output_dir, "Directory for artifacts")
            .opt("--seed", &RunConfig::seed, "Random seed")
            .opt("--workers", &RunConfig::workers, "Worker threads (0 = all cores)");
        return b;
    };
    binders.reserve(9);

    {
        auto& b = sub("build-graph", "Build the asset-level inspiration graph");
        data_inputs(b);
        b.opt("--format", &RunConfig::format, "tsv or dot");
    }
    {
        auto& b = sub("build-collections", "Build collection-level inspiration graphs");
        data_inputs(b);
        b.opt("--linkage", &RunConfig::linkage, "min, avg, max or all").opt("--format", &RunConfig::format, "tsv or dot");
    }
    {
        auto& b = sub("stats", "Structural statistics of the inspiration graph");
        graph_source(b);
        b.flag("--undirected-paths", &RunConfig::undirected_paths, "Measure paths on the undirected projection")
            .opt("--format", &RunConfig::format, "json or csv");
    }
    {
        auto& b = sub("powerlaw", "Fit a discrete power law to the degree distribution");
        graph_source(b);
        b.opt("--degree", &RunConfig::degree, "in or out").opt("--bootstraps", &RunConfig::bootstraps, "Goodness-of-fit replicates");
    }
    {
        auto& b = sub("communities", "Louvain communities of the undirected projection");
        graph_source(b);
    }
    {
        auto& b = sub("market", "Financial indicators of inspiring vs inspired assets");
        graph_source(b);
        b.opt("--pooling", &RunConfig::pooling, "per-asset or per-transaction");
    }
    {
        auto& b = sub("series", "Build a bucketed time series");
        data_inputs(b);
        b.opt("--kind", &RunConfig::series, "similarity, price, btc, first-sold or collections")
            .opt("--sampling", &RunConfig::sampling, "weekly or monthly")
            .opt("--btc-csv", &RunConfig::btc_csv, "Daily BTC close prices")
            .opt("--similarity-mode", &RunConfig::similarity_mode, "all-pairs or edges-only")
            .opt("--scope", &RunConfig::scope, "all, within-category or across-category")
            .opt("--pair-cap", &RunConfig::pair_cap, "Sample pairs above this count")
            .flag("--exact", &RunConfig::exact_pairs, "Never sample pairs")
            .flag("--forward-fill", &RunConfig::forward_fill, "Carry values over empty buckets");
    }
    {
        auto& b = sub("tlcc", "Time-lagged cross-correlation of two series");
        b.opt("--series-a", &RunConfig::series_a, "Series CSV")
            .opt("--series-b", &RunConfig::series_b, "Series CSV")
            .opt("--max-lag", &RunConfig::tlcc_max_lag, "Largest lag in buckets (0 = one year)");
    }
    {
        auto& b = sub("explain", "Shapley attribution map for one image pair");
        b.oracle_command(oracle_text)
            .opt("--pair-id", &RunConfig::pair_id, "Pair identifier sent to the oracle")
            .opt("--samples", &RunConfig::samples, "Oracle evaluation budget for the estimator")
            .opt("--eval-budget", &RunConfig::eval_budget, "Hard cap on oracle evaluations (0 = none)")
            .opt("--cell-pixels", &RunConfig::cell_pixels, "Heatmap pixels per feature cell")
            .opt("--oracle-timeout-ms", &RunConfig::oracle_timeout_ms, "Per-reply oracle timeout");
    }

    if (argc > 1 && argv[1][0] != '-') {
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == argv[1]; });
        if (!known) {
            std::cerr << fmt::format("error: unknown subcommand '{}'\n\n", argv[1]) << app.help();
            return 2;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : vinsp::cli::load_config(config_path);
        const CLI::App* chosen = app.get_subcommands().front();
        for (const auto& b : binders)
            if (b.app() == chosen) b.apply(cfg);
        return vinsp::cli::run_command(chosen->get_name(), cfg);
    } catch (const vinsp::Error& e) {
        static constexpr const char* names[] = {"config", "io", "data", "oracle"};
        static constexpr int codes[] = {2, 1, 1, 3};
        const auto k = static_cast<int>(e.kind());
        std::cerr << fmt::format("{} error: {}\n", names[k], e.what());
        return codes[k];
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
