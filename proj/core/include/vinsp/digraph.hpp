#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vinsp {

using NodeId = std::uint32_t;

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable directed weighted graph over dense node ids with string labels,
/// stored with both out- and in-adjacency in CSR form. Self-loops and
/// parallel edges are rejected.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::vector<std::string> labels, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const NodeId> out_neighbors(NodeId u) const noexcept {
        return {out_adj_.data() + out_off_[u], out_adj_.data() + out_off_[u + 1]};
    }
    std::span<const NodeId> in_neighbors(NodeId u) const noexcept {
        return {in_adj_.data() + in_off_[u], in_adj_.data() + in_off_[u + 1]};
    }
    std::size_t out_degree(NodeId u) const noexcept { return out_off_[u + 1] - out_off_[u]; }
    std::size_t in_degree(NodeId u) const noexcept { return in_off_[u + 1] - in_off_[u]; }

    bool has_edge(NodeId u, NodeId v) const noexcept;

    /// Subgraph induced on nodes with at least one incident edge.
    Digraph without_isolated() const;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_off_{0}, in_off_{0};
    std::vector<NodeId> out_adj_, in_adj_;
};

/// Simple undirected weighted projection: antiparallel edge weights are summed.
struct UndirectedGraph {
    struct Arc {
        NodeId to;
        double weight;
    };
    std::vector<std::vector<Arc>> adjacency;  // sorted by neighbor id

    std::size_t node_count() const noexcept { return adjacency.size(); }
    std::size_t degree(NodeId u) const noexcept { return adjacency[u].size(); }
};

UndirectedGraph undirected_projection(const Digraph& g);

/// Kahn order. A result shorter than node_count() means the graph has a cycle.
std::vector<NodeId> topological_order(const Digraph& g);

}  // namespace vinsp
