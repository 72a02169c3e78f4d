#include "vinsp/structural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "vinsp/error.hpp"
#include "vinsp/parallel.hpp"

namespace vinsp {

std::size_t strongly_connected_components(const Digraph& g, std::vector<std::uint32_t>* component) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<NodeId> stack;
    std::vector<bool> on_stack(n, false);
    std::uint32_t counter = 0;
    std::uint32_t count = 0;

    struct Frame {
        NodeId node;
        std::size_t next;
    };
    std::vector<Frame> call;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto out = g.out_neighbors(f.node);
            if (f.next < out.size()) {
                const NodeId v = out[f.next++];
                if (index[v] == kUnvisited) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[f.node] = std::min(low[f.node], index[v]);
                }
                continue;
            }
            const NodeId u = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[u]);
            if (low[u] == index[u]) {
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != u);
                ++count;
            }
        }
    }
    if (component) *component = std::move(comp);
    return count;
}

std::size_t weakly_connected_components(const Digraph& g) {
    std::vector<NodeId> parent(g.node_count());
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t count = g.node_count();
    for (const auto& e : g.edges()) {
        const NodeId a = find(e.source), b = find(e.target);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --count;
        }
    }
    return count;
}

double degree_assortativity(const Digraph& g) {
    const std::size_t m = g.edge_count();
    if (m == 0) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (const auto& e : g.edges()) {
        mx += static_cast<double>(g.out_degree(e.source));
        my += static_cast<double>(g.in_degree(e.target));
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& e : g.edges()) {
        const double dx = static_cast<double>(g.out_degree(e.source)) - mx;
        const double dy = static_cast<double>(g.in_degree(e.target)) - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

namespace {

// Triangles incident to each node of the undirected projection.
std::vector<std::uint64_t> triangles_per_node(const UndirectedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> tri(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        const auto& nu = g.adjacency[u];
        std::uint64_t links = 0;
        for (const auto& arc : nu) {
            const auto& nv = g.adjacency[arc.to];
            auto a = nu.begin();
            auto b = nv.begin();
            while (a != nu.end() && b != nv.end()) {
                if (a->to < b->to) {
                    ++a;
                } else if (b->to < a->to) {
                    ++b;
                } else {
                    ++links;
                    ++a;
                    ++b;
                }
            }
        }
        tri[u] = links / 2;
    }
    return tri;
}

struct PathAccumulator {
    std::uint64_t total = 0;
    std::uint64_t pairs = 0;
    std::size_t diameter = 0;
};

template <class Neighbors>
void bfs_from(NodeId root, std::size_t n, Neighbors&& neighbors, std::vector<std::uint32_t>& dist,
              std::vector<NodeId>& queue, PathAccumulator& acc) {
    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
    std::fill(dist.begin(), dist.end(), kInf);
    queue.clear();
    dist[root] = 0;
    queue.push_back(root);
    (void)n;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        neighbors(u, [&](NodeId v) {
            if (dist[v] == kInf) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
                acc.total += dist[v];
                ++acc.pairs;
                acc.diameter = std::max<std::size_t>(acc.diameter, dist[v]);
            }
        });
    }
}

}  // namespace

std::vector<double> local_clustering(const UndirectedGraph& g) {
    const auto tri = triangles_per_node(g);
    std::vector<double> c(g.node_count(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double k = static_cast<double>(g.degree(u));
        if (k >= 2) c[u] = static_cast<double>(tri[u]) / (k * (k - 1) / 2.0);
    }
    return c;
}

StructuralStats structural_summary(const Digraph& g, const StructuralOptions& options) {
    const std::size_t n = g.node_count();
    if (n == 0) throw data_error("structural_summary: empty graph");
    const std::size_t m = g.edge_count();
    const double nd = static_cast<double>(n);

    StructuralStats s;
    s.node_count = n;
    s.edge_count = m;
    s.density = n > 1 ? static_cast<double>(m) / (nd * (nd - 1.0)) : 0.0;
    s.avg_in_degree = static_cast<double>(m) / nd;
    s.degree_assortativity = degree_assortativity(g);

    std::size_t sources = 0, sinks = 0;
    for (NodeId u = 0; u < n; ++u) {
        if (g.in_degree(u) == 0) ++sources;
        if (g.out_degree(u) == 0) ++sinks;
    }
    s.pct_sources = 100.0 * static_cast<double>(sources) / nd;
    s.pct_sinks = 100.0 * static_cast<double>(sinks) / nd;

    const UndirectedGraph und = undirected_projection(g);

    // Paths.
    std::vector<NodeId> roots(n);
    std::iota(roots.begin(), roots.end(), NodeId{0});
    if (n > options.exact_path_limit) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(roots.begin(), roots.end(), rng);
        roots.resize(std::min(n, options.pivot_samples));
        std::sort(roots.begin(), roots.end());
        s.paths_sampled = true;
    }
    s.path_sources = roots.size();
    const unsigned workers = resolve_workers(options.workers);
    std::vector<PathAccumulator> acc(workers);
    std::vector<std::vector<std::uint32_t>> dist(workers, std::vector<std::uint32_t>(n));
    std::vector<std::vector<NodeId>> queue(workers);
    parallel_for(roots.size(), workers, [&](unsigned w, std::size_t i) {
        if (options.undirected_paths) {
            bfs_from(roots[i], n, [&](NodeId u, auto&& visit) { for (const auto& a : und.adjacency[u]) visit(a.to); },
                     dist[w], queue[w], acc[w]);
        } else {
            bfs_from(roots[i], n, [&](NodeId u, auto&& visit) { for (const NodeId v : g.out_neighbors(u)) visit(v); },
                     dist[w], queue[w], acc[w]);
        }
    });
    PathAccumulator total;
    for (const auto& a : acc) {
        total.total += a.total;
        total.pairs += a.pairs;
        total.diameter = std::max(total.diameter, a.diameter);
    }
    s.diameter = total.diameter;
    s.avg_path_length = total.pairs ? static_cast<double>(total.total) / static_cast<double>(total.pairs) : 0.0;

    // Triadic closure on the undirected projection.
    const auto tri = triangles_per_node(und);
    double triples = 0.0, closed = 0.0, sum_local = 0.0;
    std::size_t deg2 = 0;
    for (NodeId u = 0; u < n; ++u) {
        const double k = static_cast<double>(und.degree(u));
        if (k < 2) continue;
        const double pairs = k * (k - 1) / 2.0;
        triples += pairs;
        closed += static_cast<double>(tri[u]);
        sum_local += static_cast<double>(tri[u]) / pairs;
        ++deg2;
    }
    s.transitivity_undirected = triples > 0 ? closed / triples : 0.0;
    s.clustering_coeff_deg2plus = deg2 ? sum_local / static_cast<double>(deg2) : 0.0;
    s.clustering_coeff_full_avg = sum_local / nd;

    s.scc_count = strongly_connected_components(g);
    s.wcc_count = weakly_connected_components(g);

    std::size_t reciprocated = 0, adjacent_pairs = 0;
    for (const auto& e : g.edges()) {
        if (g.has_edge(e.target, e.source)) ++reciprocated;
    }
    for (NodeId u = 0; u < n; ++u) adjacent_pairs += und.degree(u);
    adjacent_pairs /= 2;
    s.reciprocated_edge_pct = m ? 100.0 * static_cast<double>(reciprocated) / static_cast<double>(m) : 0.0;
    s.reciprocated_pair_pct =
        adjacent_pairs ? 100.0 * static_cast<double>(reciprocated / 2) / static_cast<double>(adjacent_pairs) : 0.0;
    return s;
}

namespace {
nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json to_json(const StructuralStats& s) {
    return {
        {"#Nodes", s.node_count},
        {"#Edges", s.edge_count},
        {"Density", s.density},
        {"Avg. In-Degree", s.avg_in_degree},
        {"Degree Assortativity", number_or_null(s.degree_assortativity)},
        {"%Sources", s.pct_sources},
        {"%Sinks", s.pct_sinks},
        {"Diameter", s.diameter},
        {"Avg. Path Length", s.avg_path_length},
        {"Transitivity*", s.transitivity_undirected},
        {"Clust. Coeff.*", s.clustering_coeff_deg2plus},
        {"Clust. Coeff. (full avg)*", s.clustering_coeff_full_avg},
        {"#SCCs", s.scc_count},
        {"#WCCs", s.wcc_count},
        {"%Reciprocated edges", s.reciprocated_edge_pct},
        {"%Reciprocated pairs", s.reciprocated_pair_pct},
        {"paths_sampled", s.paths_sampled},
        {"path_sources", s.path_sources},
    };
}

}  // namespace vinsp
