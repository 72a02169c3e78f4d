#pragma once

// Helpers for driving the vinsp executable from tests.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "support.hpp"
#include "vinsp/time_buckets.hpp"

namespace testing_support {

namespace fs = std::filesystem;

inline std::string quote(const std::string& s) {
    std::string out = "'";
    for (const char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

struct CliResult {
    int status = -1;
    std::string err;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs `cli args...` with stdout discarded and stderr captured.
inline CliResult run_cli(const std::string& cli, const std::vector<std::string>& args, const fs::path& scratch) {
    std::string cmd = quote(cli);
    for (const auto& a : args) cmd += ' ' + quote(a);
    const auto err_path = scratch / "stderr.txt";
    cmd += " >/dev/null 2>" + quote(err_path.string());
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err_path);
    return r;
}

struct DatasetFiles {
    fs::path metadata, transactions, embeddings, ids, btc;

    std::vector<std::string> args() const {
        return {"--metadata", metadata.string(), "--transactions", transactions.string(),
                "--embeddings", embeddings.string(), "--ids", ids.string()};
    }
};

inline DatasetFiles write_dataset(const fs::path& dir, const Synthetic& s) {
    DatasetFiles f{dir / "metadata.tsv", dir / "transactions.tsv", dir / "embeddings.bin", dir / "ids.txt",
                   dir / "btc.csv"};
    {
        std::ofstream out(f.metadata);
        out << "asset_id\tcollection_id\tcategory\tfirst_sale_ts\n";
        for (const auto& [id, a] : s.catalog.assets())
            out << id << '\t' << a.collection_id << '\t' << vinsp::to_string(a.category) << '\t' << a.first_sale_ts
                << '\n';
    }
    vinsp::Timestamp lo = 0, hi = 0;
    {
        std::ofstream out(f.transactions);
        out << "asset_id\tts\tprice_usd\n";
        for (const auto& t : s.catalog.transactions()) {
            out << t.asset_id << '\t' << t.ts << '\t' << fmt::format("{:.6f}", t.price_usd) << '\n';
            lo = lo == 0 ? t.ts : std::min(lo, t.ts);
            hi = std::max(hi, t.ts);
        }
    }
    {
        std::ofstream out(f.btc);
        out << "Date,Open,Close\n";
        double price = 20000.0;
        for (vinsp::Timestamp day = lo - lo % 86'400 - 40 * 86'400; day <= hi + 40 * 86'400; day += 86'400) {
            price *= 1.0 + 0.01 * std::sin(static_cast<double>(day / 86'400) * 0.37);
            out << vinsp::format_date(day) << ',' << fmt::format("{:.2f}", price * 0.99) << ','
                << fmt::format("{:.2f}", price) << '\n';
        }
    }
    vinsp::write_embeddings(s.store, f.embeddings, f.ids);
    return f;
}

/// Dataset used by the rerun checks: a year and a half of sales so every
/// monthly series has well over a dozen buckets.
inline Synthetic determinism_dataset() {
    SyntheticSpec spec;
    spec.assets = 400;
    spec.collections = 8;
    spec.t_span = 86'400 * 540;
    spec.noise = 0.5;
    return make_synthetic(20240611, spec);
}

struct Invocation {
    std::string name;
    std::vector<std::string> args;
};

/// One invocation per subcommand over `data`; `fake_oracle` backs `explain`.
/// tlcc reads two series written earlier under `series_root`.
inline std::vector<Invocation> all_subcommands(const DatasetFiles& data, const fs::path& series_root,
                                               const std::string& fake_oracle) {
    auto with = [&](std::vector<std::string> head, std::vector<std::string> tail = {}) {
        auto a = data.args();
        head.insert(head.end(), a.begin(), a.end());
        head.insert(head.end(), tail.begin(), tail.end());
        head.insert(head.end(), {"--seed", "7"});
        return head;
    };
    return {
        {"build-graph", with({"build-graph"})},
        {"build-graph-dot", with({"build-graph"}, {"--format", "dot"})},
        {"build-collections", with({"build-collections"}, {"--linkage", "all"})},
        {"stats", with({"stats"})},
        {"powerlaw", with({"powerlaw"}, {"--bootstraps", "50"})},
        {"communities", with({"communities"})},
        {"market", with({"market"})},
        {"series-similarity", with({"series"}, {"--kind", "similarity", "--pair-cap", "5000"})},
        {"series-price", with({"series"}, {"--kind", "price", "--sampling", "weekly"})},
        {"series-btc", with({"series"}, {"--kind", "btc", "--btc-csv", data.btc.string()})},
        {"tlcc",
         {"tlcc", "--series-a", (series_root / "series-similarity" / "series_similarity_monthly.csv").string(), "--series-b",
          (series_root / "series-btc" / "series_btc_monthly.csv").string(), "--max-lag", "3", "--seed", "7"}},
        {"explain", {"explain", "--oracle", fake_oracle + " normal", "--pair-id", "p1", "--samples", "400", "--seed", "7"}},
    };
}

/// Manifest with the volatile fields removed.
inline nlohmann::json stable_manifest(const fs::path& path) {
    auto j = nlohmann::json::parse(slurp(path));
    j.erase("created_at");
    j["config"].erase("output_dir");
    return j;
}

/// Names of files that differ between two output directories; missing files
/// count as differences.
inline std::vector<std::string> differing_outputs(const fs::path& a, const fs::path& b) {
    std::map<std::string, int> names;
    for (const auto& dir : {a, b})
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().filename() != "stderr.txt") ++names[e.path().filename().string()];
    std::vector<std::string> diff;
    for (const auto& [name, count] : names) {
        if (count != 2) {
            diff.push_back(name);
            continue;
        }
        const bool same = name.rfind("manifest_", 0) == 0 ? stable_manifest(a / name) == stable_manifest(b / name)
                                                          : slurp(a / name) == slurp(b / name);
        if (!same) diff.push_back(name);
    }
    return diff;
}

/// Runs every subcommand twice into separate directories under `work`.
/// Returns one message per subcommand that failed or was not reproducible.
inline std::vector<std::string> check_rerun_determinism(const std::string& cli, const std::string& fake_oracle,
                                                        const fs::path& work) {
    const auto data_dir = work / "data";
    fs::create_directories(data_dir);
    const auto data = write_dataset(data_dir, determinism_dataset());
    std::vector<std::string> problems;
    for (int rep = 0; rep < 2; ++rep) {
        // Both repetitions correlate the first repetition's series so that
        // the tlcc inputs are identical.
        const auto run_dir = work / fmt::format("run{}", rep);
        for (const auto& inv : all_subcommands(data, work / "run0", fake_oracle)) {
            const auto out = run_dir / inv.name;
            fs::create_directories(out);
            auto args = inv.args;
            args.insert(args.end(), {"--output-dir", out.string()});
            const auto r = run_cli(cli, args, out);
            if (r.status != 0) problems.push_back(fmt::format("{} run {} exited {}: {}", inv.name, rep, r.status, r.err));
        }
    }
    for (const auto& inv : all_subcommands(data, {}, fake_oracle)) {
        const auto d = differing_outputs(work / "run0" / inv.name, work / "run1" / inv.name);
        if (!d.empty()) problems.push_back(fmt::format("{}: differing outputs {}", inv.name, fmt::join(d, ", ")));
    }
    return problems;
}

}  // namespace testing_support
