#include "vinsp/time_buckets.hpp"

#include <chrono>

#include <fmt/format.h>

#include "tsv.hpp"
#include "vinsp/error.hpp"

namespace vinsp {

namespace chr = std::chrono;

namespace {

constexpr Timestamp kDay = 86'400;

chr::sys_days to_days(Timestamp t) {
    return chr::sys_days{chr::days{t >= 0 ? t / kDay : (t - kDay + 1) / kDay}};
}

Timestamp to_seconds(chr::sys_days d) { return d.time_since_epoch().count() * kDay; }

}  // namespace

std::optional<Sampling> parse_sampling(std::string_view text) {
    if (text == "weekly" || text == "week") return Sampling::Weekly;
    if (text == "monthly" || text == "month") return Sampling::Monthly;
    return std::nullopt;
}

std::string_view to_string(Sampling s) noexcept { return s == Sampling::Weekly ? "weekly" : "monthly"; }

Timestamp bucket_floor(Timestamp t, Sampling s) {
    const chr::sys_days day = to_days(t);
    if (s == Sampling::Weekly) {
        const unsigned iso = chr::weekday{day}.iso_encoding();  // Monday = 1
        return to_seconds(day - chr::days{iso - 1});
    }
    const chr::year_month_day ymd{day};
    return to_seconds(chr::sys_days{ymd.year() / ymd.month() / 1});
}

Timestamp bucket_next(Timestamp start, Sampling s) {
    if (s == Sampling::Weekly) return start + 7 * kDay;
    const chr::year_month_day ymd{to_days(start)};
    return to_seconds(chr::sys_days{(ymd.year() / ymd.month() / 1) + chr::months{1}});
}

BucketAxis::BucketAxis(const TimeWindow& window, Sampling sampling)
    : sampling_(sampling), origin_(bucket_floor(window.t_start, sampling)), count_(0) {
    const Timestamp last = bucket_floor(window.t_end, sampling);
    if (sampling == Sampling::Weekly) {
        count_ = static_cast<std::size_t>((last - origin_) / (7 * kDay)) + 1;
    } else {
        const chr::year_month_day a{to_days(origin_)}, b{to_days(last)};
        count_ = static_cast<std::size_t>((int(b.year()) - int(a.year())) * 12 +
                                          (int(unsigned(b.month())) - int(unsigned(a.month())))) + 1;
    }
}

Timestamp BucketAxis::start(std::size_t i) const {
    if (sampling_ == Sampling::Weekly) return origin_ + static_cast<Timestamp>(i) * 7 * kDay;
    const chr::year_month_day a{to_days(origin_)};
    return to_seconds(chr::sys_days{(a.year() / a.month() / 1) + chr::months{static_cast<int>(i)}});
}

std::optional<std::size_t> BucketAxis::index_of(Timestamp t) const {
    if (t < origin_) return std::nullopt;
    const Timestamp b = bucket_floor(t, sampling_);
    std::size_t i;
    if (sampling_ == Sampling::Weekly) {
        i = static_cast<std::size_t>((b - origin_) / (7 * kDay));
    } else {
        const chr::year_month_day a{to_days(origin_)}, c{to_days(b)};
        i = static_cast<std::size_t>((int(c.year()) - int(a.year())) * 12 +
                                     (int(unsigned(c.month())) - int(unsigned(a.month()))));
    }
    if (i >= count_) return std::nullopt;
    return i;
}

std::string format_date(Timestamp t) {
    const chr::year_month_day ymd{to_days(t)};
    return fmt::format("{:04d}-{:02d}-{:02d}", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
}

std::optional<Timestamp> parse_date(std::string_view text) {
    text = detail::trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = detail::parse_number<int>(text.substr(0, 4));
    const auto m = detail::parse_number<unsigned>(text.substr(5, 2));
    const auto d = detail::parse_number<unsigned>(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const chr::year_month_day ymd{chr::year{*y}, chr::month{*m}, chr::day{*d}};
    if (!ymd.ok()) return std::nullopt;
    return to_seconds(chr::sys_days{ymd});
}

}  // namespace vinsp
