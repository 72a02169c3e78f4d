#include "run_config.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "manifest.hpp"
#include "vinsp/error.hpp"
#include "vinsp/time_buckets.hpp"

namespace vinsp::cli {

// One macro per field keeps the JSON reader, writer and key list in sync.
#define VINSP_CONFIG_FIELDS(X)                                                                                 \
    X(metadata) X(transactions) X(embeddings) X(ids) X(btc_csv) X(output_dir) X(edges) X(window_start)        \
        X(window_end) X(threshold) X(linkage) X(sampling) X(tlcc_max_lag) X(seed) X(workers) X(format)        \
            X(drop_isolated) X(undirected_paths) X(bootstraps) X(degree) X(pooling) X(series)                 \
                X(similarity_mode) X(scope) X(pair_cap) X(exact_pairs) X(forward_fill) X(series_a) X(series_b) \
                    X(oracle) X(pair_id) X(samples) X(eval_budget) X(cell_pixels) X(oracle_timeout_ms)

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error(fmt::format("cannot open config '{}'", path.string()));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(fmt::format("config '{}': {}", path.string(), e.what()));
    }
    if (!j.is_object()) throw config_error(fmt::format("config '{}' must be a JSON object", path.string()));

    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        try {
#define X(name)                                       \
    if (key == #name) {                               \
        value.get_to(c.name);                         \
        known = true;                                 \
    }
            VINSP_CONFIG_FIELDS(X)
#undef X
        } catch (const nlohmann::json::exception& e) {
            throw config_error(fmt::format("config key '{}': {}", key, e.what()));
        }
        // A window object is accepted as a shorthand.
        if (key == "window" && value.is_object()) {
            if (value.contains("start")) c.window_start = value["start"].is_string() ? value["start"].get<std::string>()
                                                                                     : value["start"].dump();
            if (value.contains("end"))
                c.window_end = value["end"].is_string() ? value["end"].get<std::string>() : value["end"].dump();
            known = true;
        }
        if (!known) throw config_error(fmt::format("unknown config key '{}'", key));
    }
    return c;
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
#define X(name) j[#name] = c.name;
    VINSP_CONFIG_FIELDS(X)
#undef X
    return j;
}

#undef VINSP_CONFIG_FIELDS

std::string config_hash(const RunConfig& c) {
    auto j = to_json(c);
    j.erase("output_dir");
    j.erase("workers");
    return sha256_hex(j.dump());
}

namespace {

std::optional<Timestamp> parse_time(const std::string& text, bool end_of_day) {
    if (auto day = parse_date(text)) return end_of_day ? *day + 86'399 : *day;
    Timestamp t = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
    if (ec == std::errc() && ptr == text.data() + text.size()) return t;
    return std::nullopt;
}

}  // namespace

TimeWindow resolve_window(const RunConfig& c, const TimeWindow& span) {
    Timestamp start = span.t_start, end = span.t_end;
    if (!c.window_start.empty()) {
        const auto t = parse_time(c.window_start, false);
        if (!t) throw config_error(fmt::format("bad window start '{}'", c.window_start));
        start = *t;
    }
    if (!c.window_end.empty()) {
        const auto t = parse_time(c.window_end, true);
        if (!t) throw config_error(fmt::format("bad window end '{}'", c.window_end));
        end = *t;
    }
    return TimeWindow(start, end);
}

}  // namespace vinsp::cli
