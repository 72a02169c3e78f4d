#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vinsp/catalog.hpp"
#include "vinsp/digraph.hpp"

namespace vinsp {

/// Inspiring assets are edge targets, inspired assets are edge sources.
/// A node can be both.
struct RoleAssignment {
    std::set<std::string> inspiring;
    std::set<std::string> inspired;
};

RoleAssignment classify_roles(const Digraph& graph);

enum class PricePooling {
    PerAsset,        // per-asset statistics first, then averaged over the role
    PerTransaction,  // price statistics pooled over all member transactions
};

/// Financial indicators of one role.
struct RoleIndicators {
    double average_volume_usd = 0.0;
    double average_transactions = 0.0;
    double average_price_usd = 0.0;
    double maximum_price_usd = 0.0;  // mean of per-asset maxima (PerAsset)
    double minimum_price_usd = 0.0;  // mean of per-asset minima (PerAsset)
    double stdev_price_usd = 0.0;    // population stdev of per-asset mean prices (PerAsset)
    /// Role-level extrema over every member transaction.
    double extreme_maximum_price_usd = 0.0;
    double extreme_minimum_price_usd = 0.0;
    std::size_t members = 0;
    std::size_t transacted_members = 0;
};

inline constexpr std::array<std::string_view, 6> kIndicatorNames{
    "average volume", "average #transactions", "average price",
    "maximum price",  "minimum price",         "st. dev. price",
};

/// Values of the six indicators in kIndicatorNames order.
std::array<double, 6> indicator_values(const RoleIndicators& r);

struct DichotomyReport {
    RoleIndicators inspiring;
    RoleIndicators inspired;
    std::array<double, 6> ratios{};  // inspiring / inspired, kIndicatorNames order
    PricePooling pooling = PricePooling::PerAsset;
};

/// Role aggregates and their inspiring/inspired ratios. Members without
/// transactions are ignored; a role with no transacted member is an error.
DichotomyReport financial_dichotomy(const AssetCatalog& catalog, const RoleAssignment& roles,
                                    PricePooling pooling = PricePooling::PerAsset);

/// Ratios from already-aggregated role figures.
std::array<double, 6> indicator_ratios(const RoleIndicators& inspiring, const RoleIndicators& inspired);

nlohmann::json to_json(const DichotomyReport& r);
void write_dichotomy_csv(const DichotomyReport& r, const std::filesystem::path& path);

}  // namespace vinsp
