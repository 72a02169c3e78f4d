#include "vinsp/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "tsv.hpp"
#include "vinsp/embeddings.hpp"
#include "vinsp/error.hpp"

namespace vinsp {

AssetCatalog::AssetCatalog(std::vector<AssetRecord> assets, std::vector<Transaction> transactions) {
    for (auto& a : assets) {
        if (a.asset_id.empty()) throw data_error("asset with empty asset_id");
        if (a.collection_id.empty()) throw data_error(fmt::format("asset '{}' has empty collection_id", a.asset_id));
        const std::string id = a.asset_id;
        if (!assets_.emplace(id, std::move(a)).second)
            throw data_error(fmt::format("duplicate asset_id '{}'", id));
    }
    for (const auto& t : transactions) {
        if (!assets_.count(t.asset_id))
            throw data_error(fmt::format("transaction references unknown asset '{}'", t.asset_id));
        if (!(t.price_usd >= 0.0))
            throw data_error(fmt::format("negative or invalid price for asset '{}'", t.asset_id));
        if (t.ts <= 0) throw data_error(fmt::format("non-positive timestamp for asset '{}'", t.asset_id));
    }
    transactions_ = std::move(transactions);
    std::stable_sort(transactions_.begin(), transactions_.end(),
                     [](const Transaction& a, const Transaction& b) { return a.ts < b.ts; });
    for (std::size_t i = 0; i < transactions_.size(); ++i) tx_by_asset_[transactions_[i].asset_id].push_back(i);

    for (auto& [id, a] : assets_) {
        const auto it = tx_by_asset_.find(id);
        const Timestamp earliest = it == tx_by_asset_.end() ? 0 : transactions_[it->second.front()].ts;
        if (a.first_sale_ts > 0) {
            if (earliest != 0 && earliest != a.first_sale_ts) {
                warnings_.push_back(fmt::format(
                    "asset '{}': explicit first_sale_ts {} differs from earliest transaction {}", id,
                    a.first_sale_ts, earliest));
            }
        } else if (earliest > 0) {
            a.first_sale_ts = earliest;
        } else {
            throw data_error(fmt::format("asset '{}' has neither first_sale_ts nor transactions", id));
        }
        collections_[a.collection_id].push_back(id);
    }
}

const AssetRecord* AssetCatalog::find(const std::string& asset_id) const {
    const auto it = assets_.find(asset_id);
    return it == assets_.end() ? nullptr : &it->second;
}

const AssetRecord& AssetCatalog::at(const std::string& asset_id) const {
    if (const auto* a = find(asset_id)) return *a;
    throw data_error(fmt::format("unknown asset '{}'", asset_id));
}

std::vector<const Transaction*> AssetCatalog::transactions_of(const std::string& asset_id) const {
    std::vector<const Transaction*> out;
    const auto it = tx_by_asset_.find(asset_id);
    if (it == tx_by_asset_.end()) return out;
    out.reserve(it->second.size());
    for (const std::size_t i : it->second) out.push_back(&transactions_[i]);
    return out;
}

AssetCatalog AssetCatalog::with_embeddings(const EmbeddingStore& store) const {
    AssetCatalog copy = *this;
    for (auto& [id, a] : copy.assets_) a.embedding_index = store.index_of(id);
    return copy;
}

TimeWindow AssetCatalog::span() const {
    if (assets_.empty()) throw data_error("empty catalog has no time span");
    Timestamp lo = std::numeric_limits<Timestamp>::max();
    Timestamp hi = std::numeric_limits<Timestamp>::min();
    for (const auto& [id, a] : assets_) {
        lo = std::min(lo, a.first_sale_ts);
        hi = std::max(hi, a.first_sale_ts);
    }
    if (lo == hi) ++hi;
    return {lo, hi};
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
    return in;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line, const std::string& why) {
    throw data_error(fmt::format("{}:{}: {}", path.string(), line, why));
}

}  // namespace

AssetCatalog load_catalog(const std::filesystem::path& metadata_path,
                          const std::filesystem::path& transactions_path) {
    std::vector<AssetRecord> assets;
    {
        auto in = open_input(metadata_path);
        std::string line;
        if (!std::getline(in, line)) malformed(metadata_path, 1, "missing header");
        const auto header = detail::split(detail::trim(line), '\t');
        const bool has_ts = header.size() == 4;
        if (!(header.size() == 3 || header.size() == 4) || header[0] != "asset_id" ||
            header[1] != "collection_id" || header[2] != "category" || (has_ts && header[3] != "first_sale_ts")) {
            malformed(metadata_path, 1, "expected header 'asset_id\\tcollection_id\\tcategory\\tfirst_sale_ts'");
        }
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (detail::trim(line).empty()) continue;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto cols = detail::split(line, '\t');
            if (cols.size() != header.size())
                malformed(metadata_path, lineno, fmt::format("expected {} columns, got {}", header.size(), cols.size()));
            AssetRecord a;
            a.asset_id = std::string(detail::trim(cols[0]));
            a.collection_id = std::string(detail::trim(cols[1]));
            if (a.asset_id.empty()) malformed(metadata_path, lineno, "empty asset_id");
            if (a.collection_id.empty()) malformed(metadata_path, lineno, "empty collection_id");
            const auto cat = parse_category(detail::trim(cols[2]));
            if (!cat) malformed(metadata_path, lineno, fmt::format("unknown category '{}'", cols[2]));
            a.category = *cat;
            if (has_ts && !detail::trim(cols[3]).empty()) {
                const auto ts = detail::parse_number<Timestamp>(cols[3]);
                if (!ts || *ts <= 0) malformed(metadata_path, lineno, fmt::format("bad first_sale_ts '{}'", cols[3]));
                a.first_sale_ts = *ts;
            }
            assets.push_back(std::move(a));
        }
    }
    {
        std::set<std::string_view> seen;
        for (const auto& a : assets) {
            if (!seen.insert(a.asset_id).second)
                throw data_error(fmt::format("{}: duplicate asset_id '{}'", metadata_path.string(), a.asset_id));
        }
    }

    std::vector<Transaction> txs;
    {
        std::set<std::string, std::less<>> known;
        for (const auto& a : assets) known.insert(a.asset_id);
        auto in = open_input(transactions_path);
        std::string line;
        if (!std::getline(in, line)) malformed(transactions_path, 1, "missing header");
        const auto header = detail::split(detail::trim(line), '\t');
        if (header.size() != 3 || header[0] != "asset_id" || header[1] != "ts" || header[2] != "price_usd")
            malformed(transactions_path, 1, "expected header 'asset_id\\tts\\tprice_usd'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (detail::trim(line).empty()) continue;
            const auto cols = detail::split(detail::trim(line), '\t');
            if (cols.size() != 3) malformed(transactions_path, lineno, fmt::format("expected 3 columns, got {}", cols.size()));
            Transaction t;
            t.asset_id = std::string(detail::trim(cols[0]));
            if (!known.count(t.asset_id))
                malformed(transactions_path, lineno, fmt::format("transaction references unknown asset '{}'", t.asset_id));
            const auto ts = detail::parse_number<Timestamp>(cols[1]);
            if (!ts || *ts <= 0) malformed(transactions_path, lineno, fmt::format("bad ts '{}'", cols[1]));
            const auto price = detail::parse_number<double>(cols[2]);
            if (!price || !(*price >= 0.0) || !std::isfinite(*price))
                malformed(transactions_path, lineno, fmt::format("bad price_usd '{}'", cols[2]));
            t.ts = *ts;
            t.price_usd = *price;
            txs.push_back(std::move(t));
        }
    }
    return AssetCatalog(std::move(assets), std::move(txs));
}

}  // namespace vinsp
