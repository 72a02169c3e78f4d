#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vinsp {

/// Dense row-major n x d matrix of float32 embeddings with an id per row.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    EmbeddingStore(std::size_t d, std::vector<float> data, std::vector<std::string> ids);

    std::size_t rows() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return d_; }

    std::span<const float> row(std::size_t i) const noexcept {
        return {data_.data() + i * d_, d_};
    }
    std::span<const float> data() const noexcept { return data_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    std::optional<std::size_t> index_of(const std::string& id) const;

private:
    std::size_t d_ = 0;
    std::vector<float> data_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// EMBV1: ASCII header `EMBV1 <n> <d>\n`, then n*d little-endian float32,
/// row-major. The ids file has one asset id per line.
EmbeddingStore load_embeddings(const std::filesystem::path& bin_path,
                               const std::filesystem::path& ids_path);

void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& bin_path,
                      const std::filesystem::path& ids_path);

}  // namespace vinsp
