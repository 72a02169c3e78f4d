#include "vinsp/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <fmt/format.h>

#include "tsv.hpp"
#include "vinsp/error.hpp"
#include "vinsp/parallel.hpp"
#include "vinsp/similarity.hpp"

namespace vinsp {

std::optional<SeriesKind> parse_series_kind(std::string_view text) {
    if (text == "similarity") return SeriesKind::AvgPairwiseSimilarity;
    if (text == "price") return SeriesKind::AvgMeanSellingPrice;
    if (text == "btc") return SeriesKind::BtcClose;
    if (text == "first-sold") return SeriesKind::FirstSoldCount;
    if (text == "collections") return SeriesKind::CollectionsWithFirstSoldCount;
    return std::nullopt;
}

std::string_view to_string(SeriesKind k) noexcept {
    switch (k) {
        case SeriesKind::AvgPairwiseSimilarity: return "similarity";
        case SeriesKind::AvgMeanSellingPrice: return "price";
        case SeriesKind::BtcClose: return "btc";
        case SeriesKind::FirstSoldCount: return "first-sold";
        case SeriesKind::CollectionsWithFirstSoldCount: return "collections";
    }
    return "unknown";
}

Timestamp TimeSeries::bucket_start(std::size_t i) const {
    Timestamp t = origin;
    for (std::size_t k = 0; k < i; ++k) t = bucket_next(t, sampling);
    return t;
}

BtcPrices load_btc_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw data_error(fmt::format("{}:1: missing header", path.string()));
    const auto header = detail::split(detail::trim(line), ',');
    std::optional<std::size_t> date_col, close_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto h = detail::trim(header[i]);
        if (h == "Date") date_col = i;
        if (h == "Close") close_col = i;
    }
    if (!date_col || !close_col) throw data_error(fmt::format("{}:1: expected 'Date' and 'Close' columns", path.string()));
    std::map<Timestamp, double> by_day;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto cols = detail::split(detail::trim(line), ',');
        if (cols.size() != header.size())
            throw data_error(fmt::format("{}:{}: expected {} columns", path.string(), lineno, header.size()));
        const auto day = parse_date(cols[*date_col]);
        if (!day) throw data_error(fmt::format("{}:{}: bad date '{}'", path.string(), lineno, cols[*date_col]));
        // Finance exports write "null" for holidays; those rows are gaps.
        const auto close = detail::parse_number<double>(cols[*close_col]);
        if (!close) continue;
        if (!std::isfinite(*close) || *close < 0.0)
            throw data_error(fmt::format("{}:{}: bad close '{}'", path.string(), lineno, cols[*close_col]));
        by_day[*day] = *close;
    }
    BtcPrices out;
    out.closes.assign(by_day.begin(), by_day.end());
    return out;
}

namespace {

struct BucketSums {
    std::vector<double> sum;
    std::vector<std::uint64_t> count;
    explicit BucketSums(std::size_t n = 0) : sum(n, 0.0), count(n, 0) {}
    void merge(const BucketSums& o) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += o.sum[i];
            count[i] += o.count[i];
        }
    }
};

TimeSeries similarity_series(const AssetCatalog& catalog, const EmbeddingStore& store, const BucketAxis& axis,
                             const TimeWindow& window, const SeriesOptions& opt) {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> bucket;
    std::vector<Timestamp> ts;
    std::vector<std::string_view> coll;
    std::vector<Category> cat;
    for (const auto& [id, a] : catalog.assets()) {
        if (!window.contains(a.first_sale_ts)) continue;
        const auto row = store.index_of(id);
        if (!row) continue;
        rows.push_back(*row);
        ts.push_back(a.first_sale_ts);
        bucket.push_back(*axis.index_of(a.first_sale_ts));
        coll.push_back(a.collection_id);
        cat.push_back(a.category);
    }
    const std::size_t n = rows.size();
    const std::size_t nb = axis.size();
    TimeSeries out;
    if (n < 2) {
        out.values.assign(nb, std::nullopt);
        return out;
    }
    const PackedEmbeddings packed(store, rows);
    const double threshold = opt.threshold;
    const bool edges_only = opt.similarity_mode == SimilarityMode::EdgesOnly;

    // A pair enters the cumulative average at the bucket of its later asset.
    auto admit = [&](std::size_t p, std::size_t q, double sim, BucketSums& acc) {
        if (ts[p] == ts[q] || coll[p] == coll[q]) return;
        if (opt.scope == PairScope::WithinCategory && cat[p] != cat[q]) return;
        if (opt.scope == PairScope::AcrossCategory && cat[p] == cat[q]) return;
        if (edges_only && sim < threshold) return;
        const std::size_t b = ts[p] > ts[q] ? bucket[p] : bucket[q];
        acc.sum[b] += sim;
        ++acc.count[b];
    };

    const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const bool exact = opt.exact || all_pairs <= opt.pair_cap;
    BucketSums total(nb);
    if (exact) {
        const std::size_t block = PackedEmbeddings::kBlockRows;
        const std::size_t n_blocks = (n + block - 1) / block;
        std::vector<BucketSums> per_block(n_blocks, BucketSums(nb));
        parallel_for(n_blocks, opt.workers, [&](unsigned, std::size_t b) {
            const std::size_t a0 = b * block, a1 = std::min(n, a0 + block);
            for (std::size_t c0 = a0; c0 < n; c0 += packed.column_block()) {
                packed.tile(a0, a1, c0, std::min(n, c0 + packed.column_block()), true,
                            [&](std::size_t p, std::size_t q, double sim) { admit(p, q, sim, per_block[b]); });
            }
        });
        for (const auto& part : per_block) total.merge(part);
        out.pairs_evaluated = all_pairs;
    } else {
        constexpr std::size_t kChunk = 1 << 16;
        const std::size_t chunks = (opt.pair_cap + kChunk - 1) / kChunk;
        std::vector<BucketSums> per_chunk(chunks, BucketSums(nb));
        parallel_for(chunks, opt.workers, [&](unsigned, std::size_t c) {
            std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                              static_cast<std::uint32_t>(c), 0x51u};
            std::mt19937_64 rng(seq);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            const std::size_t draws = std::min(kChunk, opt.pair_cap - c * kChunk);
            for (std::size_t k = 0; k < draws; ++k) {
                std::size_t p = pick(rng), q = pick(rng);
                while (q == p) q = pick(rng);
                admit(p, q, packed.similarity(std::min(p, q), std::max(p, q)), per_chunk[c]);
            }
        });
        for (const auto& part : per_chunk) total.merge(part);
        out.pairs_evaluated = opt.pair_cap;
        out.pairs_sampled = true;
    }

    double sum = 0.0;
    std::uint64_t count = 0;
    out.values.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        sum += total.sum[b];
        count += total.count[b];
        if (count > 0) out.values[b] = sum / static_cast<double>(count);
    }
    return out;
}

TimeSeries price_series(const AssetCatalog& catalog, const BucketAxis& axis, const TimeWindow& window) {
    struct Running {
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string_view, Running> active;
    std::set<std::string_view> windowed;
    for (const auto& [id, a] : catalog.assets()) {
        if (window.contains(a.first_sale_ts)) windowed.insert(id);
    }
    TimeSeries out;
    out.values.resize(axis.size());
    const auto& txs = catalog.transactions();
    std::size_t next = 0;
    for (std::size_t b = 0; b < axis.size(); ++b) {
        const Timestamp end = std::min(axis.end(b), window.t_end + 1);
        for (; next < txs.size() && txs[next].ts < end; ++next) {
            const auto& t = txs[next];
            if (!windowed.count(t.asset_id)) continue;
            if (catalog.at(t.asset_id).first_sale_ts >= end) continue;
            auto& r = active[t.asset_id];
            r.sum += t.price_usd;
            ++r.n;
        }
        if (active.empty()) continue;
        double mean_sum = 0.0;
        for (const auto& [id, r] : active) mean_sum += r.sum / static_cast<double>(r.n);
        out.values[b] = mean_sum / static_cast<double>(active.size());
    }
    return out;
}

TimeSeries btc_series(const BucketAxis& axis, const SeriesOptions& opt) {
    if (!opt.btc) throw config_error("BTC series requires a BTC close CSV");
    TimeSeries out;
    out.values.resize(axis.size());
    for (const auto& [day, close] : opt.btc->closes) {
        if (const auto b = axis.index_of(day)) out.values[*b] = close;  // later days overwrite
    }
    std::optional<double> last;
    for (std::size_t b = 0; b < out.values.size(); ++b) {
        if (out.values[b]) {
            last = out.values[b];
            continue;
        }
        out.gaps.push_back(b);
        if (opt.forward_fill && last) out.values[b] = last;
    }
    return out;
}

TimeSeries count_series(const AssetCatalog& catalog, const BucketAxis& axis, const TimeWindow& window,
                        bool distinct_collections) {
    std::vector<std::set<std::string_view>> colls(axis.size());
    std::vector<double> counts(axis.size(), 0.0);
    for (const auto& [id, a] : catalog.assets()) {
        if (!window.contains(a.first_sale_ts)) continue;
        const std::size_t b = *axis.index_of(a.first_sale_ts);
        counts[b] += 1.0;
        colls[b].insert(a.collection_id);
    }
    TimeSeries out;
    out.values.resize(axis.size());
    for (std::size_t b = 0; b < axis.size(); ++b)
        out.values[b] = distinct_collections ? static_cast<double>(colls[b].size()) : counts[b];
    return out;
}

}  // namespace

TimeSeries build_series(SeriesKind kind, const AssetCatalog& catalog, const EmbeddingStore& store, Sampling sampling,
                        const TimeWindow& window, const SeriesOptions& options) {
    const BucketAxis axis(window, sampling);
    TimeSeries out;
    switch (kind) {
        case SeriesKind::AvgPairwiseSimilarity: out = similarity_series(catalog, store, axis, window, options); break;
        case SeriesKind::AvgMeanSellingPrice: out = price_series(catalog, axis, window); break;
        case SeriesKind::BtcClose: out = btc_series(axis, options); break;
        case SeriesKind::FirstSoldCount: out = count_series(catalog, axis, window, false); break;
        case SeriesKind::CollectionsWithFirstSoldCount: out = count_series(catalog, axis, window, true); break;
        default: throw config_error("unknown series kind");
    }
    out.kind = kind;
    out.sampling = sampling;
    out.origin = axis.origin();
    return out;
}

void write_series_csv(const TimeSeries& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << "bucket_start,value\n";
    Timestamp t = s.origin;
    for (const auto& v : s.values) {
        out << format_date(t) << ',';
        if (v) out << fmt::format("{:.17g}", *v);
        out << '\n';
        t = bucket_next(t, s.sampling);
    }
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "bucket_start,value")
        throw data_error(fmt::format("{}:1: expected header 'bucket_start,value'", path.string()));
    std::vector<Timestamp> starts;
    TimeSeries s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto cols = detail::split(detail::trim(line), ',');
        const auto day = cols.size() == 2 ? parse_date(cols[0]) : std::nullopt;
        if (!day) throw data_error(fmt::format("{}:{}: malformed series row", path.string(), lineno));
        starts.push_back(*day);
        if (detail::trim(cols[1]).empty()) {
            s.values.push_back(std::nullopt);
        } else {
            const auto v = detail::parse_number<double>(cols[1]);
            if (!v) throw data_error(fmt::format("{}:{}: bad value '{}'", path.string(), lineno, cols[1]));
            s.values.push_back(*v);
        }
    }
    if (starts.empty()) throw data_error(fmt::format("{}: empty series", path.string()));
    s.origin = starts.front();
    s.sampling = (starts.size() > 1 && starts[1] - starts[0] == 7 * 86'400) ? Sampling::Weekly : Sampling::Monthly;
    if (bucket_floor(s.origin, s.sampling) != s.origin)
        throw data_error(fmt::format("{}: first bucket_start is not a bucket boundary", path.string()));
    Timestamp t = s.origin;
    for (std::size_t i = 0; i < starts.size(); ++i, t = bucket_next(t, s.sampling)) {
        if (starts[i] != t) throw data_error(fmt::format("{}:{}: non-contiguous bucket_start", path.string(), i + 2));
    }
    return s;
}

}  // namespace vinsp
