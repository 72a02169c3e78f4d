#include "vinsp/market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "vinsp/error.hpp"

namespace vinsp {

RoleAssignment classify_roles(const Digraph& graph) {
    RoleAssignment r;
    for (const auto& e : graph.edges()) {
        r.inspired.insert(graph.labels()[e.source]);
        r.inspiring.insert(graph.labels()[e.target]);
    }
    return r;
}

std::array<double, 6> indicator_values(const RoleIndicators& r) {
    return {r.average_volume_usd, r.average_transactions, r.average_price_usd,
            r.maximum_price_usd,  r.minimum_price_usd,    r.stdev_price_usd};
}

std::array<double, 6> indicator_ratios(const RoleIndicators& inspiring, const RoleIndicators& inspired) {
    const auto a = indicator_values(inspiring);
    const auto b = indicator_values(inspired);
    std::array<double, 6> out{};
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = b[i] != 0.0 ? a[i] / b[i] : std::numeric_limits<double>::quiet_NaN();
    return out;
}

namespace {

RoleIndicators aggregate_role(const AssetCatalog& catalog, const std::set<std::string>& members, PricePooling pooling,
                              const char* role) {
    RoleIndicators r;
    r.members = members.size();
    double volume = 0.0, count = 0.0, mean_sum = 0.0, max_sum = 0.0, min_sum = 0.0;
    std::vector<double> means;
    std::vector<double> pooled;
    r.extreme_maximum_price_usd = -std::numeric_limits<double>::infinity();
    r.extreme_minimum_price_usd = std::numeric_limits<double>::infinity();
    for (const auto& id : members) {
        const auto txs = catalog.transactions_of(id);
        if (txs.empty()) continue;
        ++r.transacted_members;
        double sum = 0.0, hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
        for (const auto* t : txs) {
            sum += t->price_usd;
            hi = std::max(hi, t->price_usd);
            lo = std::min(lo, t->price_usd);
            pooled.push_back(t->price_usd);
        }
        const double mean = sum / static_cast<double>(txs.size());
        volume += sum;
        count += static_cast<double>(txs.size());
        mean_sum += mean;
        max_sum += hi;
        min_sum += lo;
        means.push_back(mean);
        r.extreme_maximum_price_usd = std::max(r.extreme_maximum_price_usd, hi);
        r.extreme_minimum_price_usd = std::min(r.extreme_minimum_price_usd, lo);
    }
    if (r.transacted_members == 0) throw data_error(fmt::format("{} role has no member with transactions", role));

    const double k = static_cast<double>(r.transacted_members);
    r.average_volume_usd = volume / k;
    r.average_transactions = count / k;

    auto population_stdev = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (const double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (const double x : xs) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(xs.size()));
    };

    if (pooling == PricePooling::PerAsset) {
        r.average_price_usd = mean_sum / k;
        r.maximum_price_usd = max_sum / k;
        r.minimum_price_usd = min_sum / k;
        r.stdev_price_usd = population_stdev(means);
    } else {
        double sum = 0.0;
        for (const double p : pooled) sum += p;
        r.average_price_usd = sum / static_cast<double>(pooled.size());
        r.maximum_price_usd = r.extreme_maximum_price_usd;
        r.minimum_price_usd = r.extreme_minimum_price_usd;
        r.stdev_price_usd = population_stdev(pooled);
    }
    return r;
}

}  // namespace

DichotomyReport financial_dichotomy(const AssetCatalog& catalog, const RoleAssignment& roles, PricePooling pooling) {
    DichotomyReport rep;
    rep.pooling = pooling;
    rep.inspiring = aggregate_role(catalog, roles.inspiring, pooling, "inspiring");
    rep.inspired = aggregate_role(catalog, roles.inspired, pooling, "inspired");
    rep.ratios = indicator_ratios(rep.inspiring, rep.inspired);
    return rep;
}

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json role_json(const RoleIndicators& r) {
    nlohmann::json j;
    const auto v = indicator_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) j[std::string(kIndicatorNames[i])] = num(v[i]);
    j["role-level maximum price"] = num(r.extreme_maximum_price_usd);
    j["role-level minimum price"] = num(r.extreme_minimum_price_usd);
    j["members"] = r.members;
    j["transacted members"] = r.transacted_members;
    return j;
}

}  // namespace

nlohmann::json to_json(const DichotomyReport& r) {
    nlohmann::json ratios;
    for (std::size_t i = 0; i < r.ratios.size(); ++i) ratios[std::string(kIndicatorNames[i])] = num(r.ratios[i]);
    return {
        {"pooling", r.pooling == PricePooling::PerAsset ? "per-asset" : "per-transaction"},
        {"inspiring", role_json(r.inspiring)},
        {"inspired", role_json(r.inspired)},
        {"inspiring/inspired", ratios},
    };
}

void write_dichotomy_csv(const DichotomyReport& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << "indicator,inspiring,inspired,ratio\n";
    const auto a = indicator_values(r.inspiring);
    const auto b = indicator_values(r.inspired);
    for (std::size_t i = 0; i < a.size(); ++i)
        out << fmt::format("{},{:.6f},{:.6f},{:.6f}\n", kIndicatorNames[i], a[i], b[i], r.ratios[i]);
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace vinsp
