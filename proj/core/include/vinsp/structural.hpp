#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsp/digraph.hpp"

namespace vinsp {

struct StructuralOptions {
    /// Measure diameter / average path length on the undirected projection
    /// instead of the directed graph.
    bool undirected_paths = false;
    /// Exact all-sources BFS up to this many nodes; pivot sampling above it.
    std::size_t exact_path_limit = 50'000;
    std::size_t pivot_samples = 1'000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

/// Structural statistics of an inspiration graph. Fields documented as
/// "undirected" use the simple undirected projection.
struct StructuralStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double density = 0.0;
    double avg_in_degree = 0.0;
    /// Pearson correlation of (source out-degree, target in-degree) over edges;
    /// NaN when undefined (no edges or zero variance).
    double degree_assortativity = 0.0;
    double pct_sources = 0.0;  // no in-links
    double pct_sinks = 0.0;    // no out-links
    std::size_t diameter = 0;
    double avg_path_length = 0.0;  // mean over reachable ordered pairs
    double transitivity_undirected = 0.0;
    double clustering_coeff_deg2plus = 0.0;
    double clustering_coeff_full_avg = 0.0;
    std::size_t scc_count = 0;
    std::size_t wcc_count = 0;
    double reciprocated_edge_pct = 0.0;  // ordered edges whose reverse exists
    double reciprocated_pair_pct = 0.0;  // adjacent unordered pairs linked both ways
    bool paths_sampled = false;
    std::size_t path_sources = 0;  // BFS roots used for diameter / APL
};

StructuralStats structural_summary(const Digraph& g, const StructuralOptions& options = {});

std::size_t strongly_connected_components(const Digraph& g, std::vector<std::uint32_t>* component = nullptr);
std::size_t weakly_connected_components(const Digraph& g);
double degree_assortativity(const Digraph& g);

/// Local clustering coefficient per node on the undirected projection
/// (0 for nodes of degree < 2).
std::vector<double> local_clustering(const UndirectedGraph& g);

nlohmann::json to_json(const StructuralStats& s);

}  // namespace vinsp
