#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vinsp/types.hpp"

namespace vinsp {

class EmbeddingStore;

/// Validated asset metadata plus the time-ordered transaction log.
///
/// Assets and collections are keyed by id in ordered maps so every traversal
/// is deterministic. Collection membership is a partition of the asset set.
class AssetCatalog {
public:
    AssetCatalog() = default;

    /// Validates and indexes the given rows. Assets with no explicit first-sale
    /// timestamp (first_sale_ts == 0) take the earliest transaction time.
    AssetCatalog(std::vector<AssetRecord> assets, std::vector<Transaction> transactions);

    const std::map<std::string, AssetRecord>& assets() const noexcept { return assets_; }
    const std::map<std::string, std::vector<std::string>>& collections() const noexcept {
        return collections_;
    }
    const std::vector<Transaction>& transactions() const noexcept { return transactions_; }

    const AssetRecord* find(const std::string& asset_id) const;
    const AssetRecord& at(const std::string& asset_id) const;

    /// Transactions of one asset in time order; empty if it never traded.
    std::vector<const Transaction*> transactions_of(const std::string& asset_id) const;

    /// Non-fatal findings from loading, e.g. explicit first-sale times that
    /// disagree with the transaction log.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    std::size_t size() const noexcept { return assets_.size(); }

    /// Copy with each AssetRecord::embedding_index resolved against the store.
    AssetCatalog with_embeddings(const EmbeddingStore& store) const;

    /// [earliest, latest] first-sale time; throws on an empty catalog.
    TimeWindow span() const;

private:
    std::map<std::string, AssetRecord> assets_;
    std::map<std::string, std::vector<std::string>> collections_;
    std::vector<Transaction> transactions_;
    std::map<std::string, std::vector<std::size_t>> tx_by_asset_;
    std::vector<std::string> warnings_;
};

/// Reads the metadata TSV (`asset_id collection_id category first_sale_ts`)
/// and the transactions TSV (`asset_id ts price_usd`).
AssetCatalog load_catalog(const std::filesystem::path& metadata_path,
                          const std::filesystem::path& transactions_path);

}  // namespace vinsp
