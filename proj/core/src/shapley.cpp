#include "vinsp/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vinsp/error.hpp"

namespace vinsp {

double ExplanationMap::efficiency_residual() const {
    double sum = 0.0;
    for (double p : phi) sum += p;
    return sum - (full_value - base_value);
}

std::size_t permutations_for_budget(std::size_t samples, std::size_t features, bool antithetic) {
    if (samples == 0) throw config_error("Shapley sample count must be at least 1");
    if (features < 2) throw config_error("Shapley estimation needs at least 2 features");
    const std::size_t per = features - 1;
    std::size_t p = samples > 2 ? (samples - 2) / per : 0;
    if (antithetic) p -= p % 2;
    return std::max<std::size_t>(p, antithetic ? 2 : 1);
}

namespace {

std::vector<double> checked_eval(PairOracle& oracle, std::span<const Coalition> masks) {
    auto out = oracle.evaluate(masks);
    if (out.size() != masks.size())
        throw oracle_error(fmt::format("oracle returned {} values for {} masks", out.size(), masks.size()));
    for (double v : out)
        if (!std::isfinite(v)) throw oracle_error("oracle returned a non-finite value");
    return out;
}

}  // namespace

ExplanationMap shapley_estimate(PairOracle& oracle, const FeatureGrid& grid, const ShapleyOptions& options) {
    grid.validate();
    const std::size_t F = grid.feature_count();
    const std::size_t P = permutations_for_budget(options.samples, F, options.antithetic);
    const std::size_t planned = 2 + P * (F - 1);
    if (options.eval_budget && planned > options.eval_budget)
        throw oracle_error(fmt::format("{} oracle evaluations needed but the budget allows {}", planned,
                                       options.eval_budget));

    ExplanationMap map;
    map.grid = grid;
    map.permutations = P;
    map.samples_used = planned;

    {
        const std::vector<Coalition> ends{Coalition(F, 0), Coalition(F, 1)};
        const auto v = checked_eval(oracle, ends);
        map.base_value = v[0];
        map.full_value = v[1];
    }

    // Permutations are drawn up front so the stream does not depend on batching.
    std::mt19937_64 rng(options.seed);
    std::vector<std::vector<std::uint32_t>> perms;
    perms.reserve(P);
    while (perms.size() < P) {
        std::vector<std::uint32_t> order(F);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        if (options.antithetic) {
            perms.push_back(order);
            std::reverse(order.begin(), order.end());
        }
        perms.push_back(std::move(order));
    }

    const std::size_t group = options.antithetic ? 2 : 1;
    const std::size_t n_samples = P / group;
    std::vector<double> samples(n_samples * F, 0.0);  // row = one sample, indexed by feature

    const std::size_t batch = std::max<std::size_t>(options.batch_permutations, group);
    const std::size_t batch_aligned = batch - batch % group;
    std::vector<Coalition> masks;
    for (std::size_t begin = 0; begin < P; begin += batch_aligned) {
        const std::size_t end = std::min(P, begin + batch_aligned);
        masks.clear();
        for (std::size_t k = begin; k < end; ++k) {
            Coalition s(F, 0);
            for (std::size_t pos = 0; pos + 1 < F; ++pos) {
                s[perms[k][pos]] = 1;
                masks.push_back(s);
            }
        }
        const auto values = checked_eval(oracle, masks);
        for (std::size_t k = begin; k < end; ++k) {
            const double* v = values.data() + (k - begin) * (F - 1);
            double* row = samples.data() + (k / group) * F;
            double prev = map.base_value;
            for (std::size_t pos = 0; pos < F; ++pos) {
                const double cur = pos + 1 < F ? v[pos] : map.full_value;
                row[perms[k][pos]] += (cur - prev) / static_cast<double>(group);
                prev = cur;
            }
        }
    }

    map.phi.assign(F, 0.0);
    map.standard_error.assign(F, 0.0);
    for (std::size_t f = 0; f < F; ++f) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) mean += samples[i * F + f];
        mean /= static_cast<double>(n_samples);
        map.phi[f] = mean;
        if (n_samples > 1) {
            double ss = 0.0;
            for (std::size_t i = 0; i < n_samples; ++i) {
                const double d = samples[i * F + f] - mean;
                ss += d * d;
            }
            map.standard_error[f] =
                std::sqrt(ss / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
        }
    }
    return map;
}

ExplanationMap explain_pair(PairOracle& oracle, const std::string& pair_id, const ShapleyOptions& options) {
    if (options.samples == 0) throw config_error("Shapley sample count must be at least 1");
    const FeatureGrid grid = oracle.init(pair_id);
    auto map = shapley_estimate(oracle, grid, options);
    oracle.close();
    return map;
}

std::vector<double> exact_shapley(PairOracle& oracle, const FeatureGrid& grid) {
    grid.validate();
    const std::size_t F = grid.feature_count();
    if (F > 20) throw config_error("exact Shapley enumeration is limited to 20 features");
    const std::size_t total = std::size_t{1} << F;

    std::vector<double> value(total);
    constexpr std::size_t kChunk = 4096;
    std::vector<Coalition> masks;
    for (std::size_t begin = 0; begin < total; begin += kChunk) {
        const std::size_t end = std::min(total, begin + kChunk);
        masks.clear();
        for (std::size_t s = begin; s < end; ++s) {
            Coalition c(F);
            for (std::size_t f = 0; f < F; ++f) c[f] = (s >> f) & 1u;
            masks.push_back(std::move(c));
        }
        const auto v = checked_eval(oracle, masks);
        std::copy(v.begin(), v.end(), value.begin() + static_cast<std::ptrdiff_t>(begin));
    }

    // |S|! (F-|S|-1)! / F!
    std::vector<double> weight(F);
    for (std::size_t k = 0; k < F; ++k)
        weight[k] = std::exp(std::lgamma(double(k) + 1) + std::lgamma(double(F - k)) - std::lgamma(double(F) + 1));

    std::vector<double> phi(F, 0.0);
    for (std::size_t s = 0; s < total; ++s) {
        const auto size = static_cast<std::size_t>(std::popcount(s));
        for (std::size_t f = 0; f < F; ++f) {
            if (s & (std::size_t{1} << f)) continue;
            phi[f] += weight[size] * (value[s | (std::size_t{1} << f)] - value[s]);
        }
    }
    return phi;
}

nlohmann::json to_json(const ExplanationMap& map) {
    nlohmann::json features = nlohmann::json::array();
    const std::size_t per = map.grid.per_image();
    const std::size_t cols = map.grid.columns();
    for (std::size_t f = 0; f < map.phi.size(); ++f) {
        const std::size_t local = per ? f % per : 0;
        features.push_back({{"feature", f},
                            {"image_index", per ? f / per : 0},
                            {"row", cols ? local / cols : 0},
                            {"col", cols ? local % cols : 0},
                            {"phi", map.phi[f]},
                            {"stderr", map.standard_error[f]}});
    }
    return {{"grid", {{"width", map.grid.width}, {"height", map.grid.height}, {"cell", map.grid.cell}}},
            {"features_per_image", per},
            {"base_value", map.base_value},
            {"full_value", map.full_value},
            {"samples_used", map.samples_used},
            {"permutations", map.permutations},
            {"efficiency_residual", map.efficiency_residual()},
            {"features", std::move(features)}};
}

}  // namespace vinsp
