#include "vinsp/louvain.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "vinsp/error.hpp"

namespace vinsp {

namespace {

struct Level {
    // Off-diagonal adjacency (symmetric) plus per-node self weight, where the
    // self weight counts each internal edge twice.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self;
    std::vector<double> strength;
};

Level from_projection(const UndirectedGraph& g) {
    Level l;
    const std::size_t n = g.node_count();
    l.adj.resize(n);
    l.self.assign(n, 0.0);
    l.strength.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& a : g.adjacency[u]) {
            l.adj[u].push_back({a.to, a.weight});
            l.strength[u] += a.weight;
        }
    }
    return l;
}

// One round of local moving; returns the community of every node,
// renumbered densely in order of first appearance.
std::vector<std::uint32_t> local_moving(const Level& l, double two_m, const LouvainOptions& opt, std::mt19937_64& rng,
                                        bool& moved_any) {
    const std::size_t n = l.adj.size();
    std::vector<std::uint32_t> comm(n);
    std::iota(comm.begin(), comm.end(), 0u);
    std::vector<double> tot = l.strength;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    if (opt.shuffle_order) std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> link(n, 0.0);
    std::vector<std::uint32_t> touched;
    moved_any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        double pass_gain = 0.0;
        for (const std::uint32_t u : order) {
            const std::uint32_t own = comm[u];
            const double k = l.strength[u];
            touched.clear();
            for (const auto& [v, w] : l.adj[u]) {
                if (link[comm[v]] == 0.0) touched.push_back(comm[v]);
                link[comm[v]] += w;
            }
            tot[own] -= k;
            const double own_gain = link[own] - tot[own] * k / two_m;
            double best_gain = own_gain;
            std::uint32_t best = own;
            std::sort(touched.begin(), touched.end());
            for (const std::uint32_t c : touched) {
                if (c == own) continue;
                const double gain = link[c] - tot[c] * k / two_m;
                // Strict improvement over staying; among movers the lowest id wins.
                if (gain > best_gain + opt.min_gain) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += k;
            for (const std::uint32_t c : touched) link[c] = 0.0;
            if (best != own) {
                comm[u] = best;
                improved = true;
                moved_any = true;
                pass_gain += 2.0 * (best_gain - own_gain) / two_m;
            }
        }
        if (pass_gain < opt.min_pass_gain) break;
    }
    std::vector<std::uint32_t> renumber(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::size_t u = 0; u < n; ++u) {
        if (renumber[comm[u]] == UINT32_MAX) renumber[comm[u]] = next++;
        comm[u] = renumber[comm[u]];
    }
    return comm;
}

Level aggregate(const Level& l, const std::vector<std::uint32_t>& comm, std::size_t count) {
    Level out;
    out.adj.resize(count);
    out.self.assign(count, 0.0);
    out.strength.assign(count, 0.0);
    std::vector<std::map<std::uint32_t, double>> acc(count);
    for (std::size_t u = 0; u < l.adj.size(); ++u) {
        const std::uint32_t cu = comm[u];
        out.self[cu] += l.self[u];
        out.strength[cu] += l.strength[u];
        for (const auto& [v, w] : l.adj[u]) {
            const std::uint32_t cv = comm[v];
            if (cu == cv)
                out.self[cu] += w;
            else
                acc[cu][cv] += w;
        }
    }
    for (std::size_t c = 0; c < count; ++c) {
        for (const auto& [d, w] : acc[c]) out.adj[c].push_back({d, w});
    }
    return out;
}

}  // namespace

double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment) {
    if (assignment.size() != g.node_count()) throw data_error("modularity: assignment size mismatch");
    const std::uint32_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<double> in(k, 0.0), tot(k, 0.0);
    double two_m = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const auto& a : g.adjacency[u]) {
            two_m += a.weight;
            tot[assignment[u]] += a.weight;
            if (assignment[u] == assignment[a.to]) in[assignment[u]] += a.weight;
        }
    }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
    return q;
}

CommunityPartition louvain_communities(const Digraph& g, const LouvainOptions& options) {
    const UndirectedGraph und = undirected_projection(g);
    const std::size_t n = und.node_count();
    CommunityPartition out;
    out.assignment.resize(n);
    std::iota(out.assignment.begin(), out.assignment.end(), 0u);
    out.community_count = n;
    if (n == 0) return out;

    Level level = from_projection(und);
    double two_m = 0.0;
    for (const double s : level.strength) two_m += s;
    if (two_m == 0.0) {
        out.modularity = 0.0;
        return out;
    }

    std::mt19937_64 rng(options.seed);
    for (int depth = 0; depth < options.max_levels; ++depth) {
        bool moved = false;
        const auto comm = local_moving(level, two_m, options, rng, moved);
        if (!moved) break;
        const std::size_t count = *std::max_element(comm.begin(), comm.end()) + 1;
        for (auto& c : out.assignment) c = comm[c];
        level = aggregate(level, comm, count);
        if (count == 1) break;
    }

    // Number communities by lowest member node id.
    std::vector<std::uint32_t> renumber(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : out.assignment) {
        if (renumber[c] == UINT32_MAX) renumber[c] = next++;
        c = renumber[c];
    }
    out.community_count = next;
    out.modularity = modularity(und, out.assignment);
    return out;
}

nlohmann::json to_json(const CommunityPartition& p) {
    return {{"#Comm. by Louvain*", p.community_count}, {"Modularity by Louvain*", p.modularity}};
}

}  // namespace vinsp
