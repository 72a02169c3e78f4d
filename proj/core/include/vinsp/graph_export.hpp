#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vinsp/collection_graph.hpp"
#include "vinsp/digraph.hpp"
#include "vinsp/nft_graph.hpp"

namespace vinsp {

enum class EdgeFormat { Tsv, Dot };

std::optional<EdgeFormat> parse_edge_format(std::string_view text);

/// Fixed six decimals, correctly rounded from the binary value.
std::string format_weight(double w);

/// Writes `source\ttarget\tweight` rows (TSV, with header) or a DOT digraph.
/// Returns the number of edges written.
std::size_t export_edge_list(const Digraph& graph, const std::filesystem::path& path,
                             EdgeFormat format = EdgeFormat::Tsv);

/// Reads an edge-list TSV written by export_edge_list. Nodes are the edge
/// endpoints in order of first appearance.
Digraph read_edge_list(const std::filesystem::path& path);

nlohmann::json build_report(const InspirationGraph& g);
nlohmann::json build_report(const CollectionGraph& g);

}  // namespace vinsp
