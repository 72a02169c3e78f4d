#include <array>
#include <cctype>

#include "vinsp/error.hpp"
#include "vinsp/types.hpp"

namespace vinsp {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
        case ErrorKind::Data: return "data";
        case ErrorKind::Oracle: return "oracle";
    }
    return "unknown";
}

namespace {
constexpr std::array<std::pair<Category, std::string_view>, 6> kCategoryNames{{
    {Category::Art, "Art"},
    {Category::Collectible, "Collectible"},
    {Category::Games, "Games"},
    {Category::Metaverse, "Metaverse"},
    {Category::Utility, "Utility"},
    {Category::Other, "Other"},
}};

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}
}  // namespace

std::optional<Category> parse_category(std::string_view text) {
    for (const auto& [c, name] : kCategoryNames) {
        if (iequals(text, name)) return c;
    }
    return std::nullopt;
}

std::string_view to_string(Category c) noexcept {
    for (const auto& [cat, name] : kCategoryNames) {
        if (cat == c) return name;
    }
    return "Other";
}

TimeWindow::TimeWindow(Timestamp start, Timestamp end) : t_start(start), t_end(end) {
    if (!(start < end)) {
        throw config_error("time window requires t_start < t_end (got " + std::to_string(start) + ", " +
                           std::to_string(end) + ")");
    }
}

}  // namespace vinsp
