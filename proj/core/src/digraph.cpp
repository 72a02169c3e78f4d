#include "vinsp/digraph.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "vinsp/error.hpp"

namespace vinsp {

Digraph::Digraph(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
    const std::size_t n = labels_.size();
    std::vector<std::size_t> out_count(n + 1, 0), in_count(n + 1, 0);
    for (const auto& e : edges_) {
        if (e.source >= n || e.target >= n)
            throw data_error(fmt::format("edge ({},{}) out of range for {} nodes", e.source, e.target, n));
        if (e.source == e.target) throw data_error(fmt::format("self-loop on node '{}'", labels_[e.source]));
        ++out_count[e.source + 1];
        ++in_count[e.target + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_count[i + 1] += out_count[i];
        in_count[i + 1] += in_count[i];
    }
    out_off_ = out_count;
    in_off_ = in_count;
    out_adj_.resize(edges_.size());
    in_adj_.resize(edges_.size());
    for (const auto& e : edges_) {
        out_adj_[out_count[e.source]++] = e.target;
        in_adj_[in_count[e.target]++] = e.source;
    }
    for (std::size_t u = 0; u < n; ++u) {
        auto out = std::span(out_adj_).subspan(out_off_[u], out_off_[u + 1] - out_off_[u]);
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) != out.end())
            throw data_error(fmt::format("parallel edges from node '{}'", labels_[u]));
        auto in = std::span(in_adj_).subspan(in_off_[u], in_off_[u + 1] - in_off_[u]);
        std::sort(in.begin(), in.end());
    }
}

bool Digraph::has_edge(NodeId u, NodeId v) const noexcept {
    const auto out = out_neighbors(u);
    return std::binary_search(out.begin(), out.end(), v);
}

Digraph Digraph::without_isolated() const {
    std::vector<NodeId> remap(node_count(), 0);
    std::vector<std::string> labels;
    for (NodeId u = 0; u < node_count(); ++u) {
        if (out_degree(u) + in_degree(u) > 0) {
            remap[u] = static_cast<NodeId>(labels.size());
            labels.push_back(labels_[u]);
        }
    }
    std::vector<Edge> edges = edges_;
    for (auto& e : edges) {
        e.source = remap[e.source];
        e.target = remap[e.target];
    }
    return Digraph(std::move(labels), std::move(edges));
}

UndirectedGraph undirected_projection(const Digraph& g) {
    std::vector<std::map<NodeId, double>> acc(g.node_count());
    for (const auto& e : g.edges()) {
        acc[e.source][e.target] += e.weight;
        acc[e.target][e.source] += e.weight;
    }
    UndirectedGraph out;
    out.adjacency.resize(g.node_count());
    for (std::size_t u = 0; u < acc.size(); ++u) {
        out.adjacency[u].reserve(acc[u].size());
        for (const auto& [v, w] : acc[u]) out.adjacency[u].push_back({v, w});
    }
    return out;
}

std::vector<NodeId> topological_order(const Digraph& g) {
    std::vector<std::size_t> indeg(g.node_count());
    std::vector<NodeId> order;
    order.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        indeg[u] = g.in_degree(u);
        if (indeg[u] == 0) order.push_back(u);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (const NodeId v : g.out_neighbors(order[head])) {
            if (--indeg[v] == 0) order.push_back(v);
        }
    }
    return order;
}

}  // namespace vinsp
