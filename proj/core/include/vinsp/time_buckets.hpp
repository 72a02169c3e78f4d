#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vinsp/types.hpp"

namespace vinsp {

/// Weekly buckets are ISO-8601 weeks (Monday 00:00 UTC); monthly buckets are
/// calendar months (1st 00:00 UTC).
enum class Sampling { Weekly, Monthly };

std::optional<Sampling> parse_sampling(std::string_view text);
std::string_view to_string(Sampling s) noexcept;

/// Start of the bucket containing t.
Timestamp bucket_floor(Timestamp t, Sampling s);
/// Start of the bucket following the one starting at `start`.
Timestamp bucket_next(Timestamp start, Sampling s);

/// Contiguous buckets covering a window, from the bucket holding t_start to
/// the bucket holding t_end.
class BucketAxis {
public:
    BucketAxis(const TimeWindow& window, Sampling sampling);

    std::size_t size() const noexcept { return count_; }
    Sampling sampling() const noexcept { return sampling_; }
    Timestamp origin() const noexcept { return origin_; }
    Timestamp start(std::size_t i) const;
    Timestamp end(std::size_t i) const { return start(i + 1); }  // exclusive
    std::optional<std::size_t> index_of(Timestamp t) const;

private:
    Sampling sampling_;
    Timestamp origin_;
    std::size_t count_;
};

/// `YYYY-MM-DD` of the UTC day containing t.
std::string format_date(Timestamp t);
/// Midnight UTC of a `YYYY-MM-DD` date; nullopt if malformed.
std::optional<Timestamp> parse_date(std::string_view text);

}  // namespace vinsp
