#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vinsp {

/// Unix epoch seconds, UTC.
using Timestamp = std::int64_t;

enum class Category { Art, Collectible, Games, Metaverse, Utility, Other };

std::optional<Category> parse_category(std::string_view text);
std::string_view to_string(Category c) noexcept;

struct AssetRecord {
    std::string asset_id;
    std::string collection_id;
    Category category = Category::Other;
    Timestamp first_sale_ts = 0;
    std::optional<std::size_t> embedding_index;
};

struct Transaction {
    std::string asset_id;
    Timestamp ts = 0;
    double price_usd = 0.0;
};

/// Closed observation interval [t_start, t_end].
struct TimeWindow {
    Timestamp t_start = 0;
    Timestamp t_end = 0;

    TimeWindow() = default;
    TimeWindow(Timestamp start, Timestamp end);

    bool contains(Timestamp t) const noexcept { return t >= t_start && t <= t_end; }
};

}  // namespace vinsp
