#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vinsp/oracle.hpp"

namespace vinsp {

struct ShapleyOptions {
    /// Oracle evaluation budget K, counting the empty and full coalitions.
    std::size_t samples = 10'000;
    std::uint64_t seed = 0;
    /// Pair every permutation with its reverse.
    bool antithetic = true;
    /// Hard cap on oracle calls; 0 = no cap beyond `samples`.
    std::size_t eval_budget = 0;
    /// Permutations whose prefixes are sent in a single evaluate call.
    std::size_t batch_permutations = 16;
};

struct ExplanationMap {
    FeatureGrid grid;
    std::vector<double> phi;
    std::vector<double> standard_error;
    double base_value = 0.0;  // M(empty)
    double full_value = 0.0;  // M(all)
    std::size_t samples_used = 0;
    std::size_t permutations = 0;

    /// sum(phi) - (full - base); zero up to rounding for permutation estimates.
    double efficiency_residual() const;
};

/// Number of permutations a budget of `samples` evaluations pays for.
std::size_t permutations_for_budget(std::size_t samples, std::size_t features, bool antithetic);

/// Permutation-sampling Shapley estimate for a pair already initialised on `oracle`.
ExplanationMap shapley_estimate(PairOracle& oracle, const FeatureGrid& grid, const ShapleyOptions& options);

/// init + estimate + close.
ExplanationMap explain_pair(PairOracle& oracle, const std::string& pair_id, const ShapleyOptions& options);

/// Exact Shapley values by enumerating all 2^F coalitions; F <= 20.
std::vector<double> exact_shapley(PairOracle& oracle, const FeatureGrid& grid);

nlohmann::json to_json(const ExplanationMap& map);

}  // namespace vinsp
