#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsp/digraph.hpp"

namespace vinsp {

struct CommunityPartition {
    std::vector<std::uint32_t> assignment;  // node -> community id in [0, count)
    std::size_t community_count = 0;
    double modularity = 0.0;
};

struct LouvainOptions {
    /// Nodes are scanned in ascending id order unless shuffle_order is set, in
    /// which case the seed fixes a random scan order.
    bool shuffle_order = false;
    std::uint64_t seed = 0;
    double min_gain = 1e-12;
    /// A level ends once a full pass raises modularity by less than this.
    double min_pass_gain = 1e-7;
    int max_levels = 64;
};

/// Louvain on the undirected weighted projection (antiparallel weights summed).
/// Community ids are numbered by their lowest member node id.
CommunityPartition louvain_communities(const Digraph& g, const LouvainOptions& options = {});

/// Newman modularity of an assignment on the undirected projection; 0 for an
/// edgeless graph.
double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment);

nlohmann::json to_json(const CommunityPartition& p);

}  // namespace vinsp
