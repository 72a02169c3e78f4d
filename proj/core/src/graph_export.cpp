#include "vinsp/graph_export.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include <fmt/format.h>

#include "tsv.hpp"
#include "vinsp/error.hpp"

namespace vinsp {

std::optional<EdgeFormat> parse_edge_format(std::string_view text) {
    if (text == "tsv") return EdgeFormat::Tsv;
    if (text == "dot") return EdgeFormat::Dot;
    return std::nullopt;
}

std::string format_weight(double w) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), w, std::chars_format::fixed, 6);
    if (ec != std::errc{}) throw data_error("cannot format edge weight");
    return std::string(buf.data(), ptr);
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::size_t export_edge_list(const Digraph& graph, const std::filesystem::path& path, EdgeFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    const auto& labels = graph.labels();
    if (format == EdgeFormat::Tsv) {
        out << "source\ttarget\tweight\n";
        for (const auto& e : graph.edges())
            out << labels[e.source] << '\t' << labels[e.target] << '\t' << format_weight(e.weight) << '\n';
    } else {
        out << "digraph inspiration {\n";
        for (const auto& label : labels) out << "  " << dot_quote(label) << ";\n";
        for (const auto& e : graph.edges()) {
            out << "  " << dot_quote(labels[e.source]) << " -> " << dot_quote(labels[e.target])
                << " [weight=" << format_weight(e.weight) << "];\n";
        }
        out << "}\n";
    }
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
    return graph.edge_count();
}

Digraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "source\ttarget\tweight")
        throw data_error(fmt::format("{}:1: expected header 'source\\ttarget\\tweight'", path.string()));
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    auto node = [&](std::string_view name) {
        const auto [it, inserted] = index.emplace(std::string(name), static_cast<NodeId>(labels.size()));
        if (inserted) labels.emplace_back(name);
        return it->second;
    };
    std::vector<Edge> edges;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto cols = detail::split(detail::trim(line), '\t');
        const auto w = cols.size() == 3 ? detail::parse_number<double>(cols[2]) : std::nullopt;
        if (!w) throw data_error(fmt::format("{}:{}: malformed edge row", path.string(), lineno));
        const NodeId u = node(cols[0]);
        const NodeId v = node(cols[1]);
        edges.push_back({u, v, *w});
    }
    return Digraph(std::move(labels), std::move(edges));
}

namespace {

nlohmann::json window_json(const TimeWindow& w) { return {{"t_start", w.t_start}, {"t_end", w.t_end}}; }

}  // namespace

nlohmann::json build_report(const InspirationGraph& g) {
    return {
        {"nodes", g.graph.node_count()},
        {"edges", g.graph.edge_count()},
        {"skipped_assets", g.skipped_assets},
        {"threshold", g.threshold},
        {"window", window_json(g.window)},
    };
}

nlohmann::json build_report(const CollectionGraph& g) {
    return {
        {"nodes", g.graph.node_count()},
        {"edges", g.graph.edge_count()},
        {"skipped_assets", g.skipped_assets},
        {"threshold", g.threshold},
        {"window", window_json(g.window)},
        {"criterion", std::string(to_string(g.criterion))},
    };
}

}  // namespace vinsp
