#include "vinsp/embeddings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "tsv.hpp"
#include "vinsp/error.hpp"

namespace vinsp {

EmbeddingStore::EmbeddingStore(std::size_t d, std::vector<float> data, std::vector<std::string> ids)
    : d_(d), data_(std::move(data)), ids_(std::move(ids)) {
    if (data_.size() != d_ * ids_.size())
        throw data_error(fmt::format("embedding matrix has {} values, expected {}x{}", data_.size(), ids_.size(), d_));
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i].empty()) throw data_error(fmt::format("empty id for embedding row {}", i));
        if (!index_.emplace(ids_[i], i).second)
            throw data_error(fmt::format("duplicate embedding id '{}'", ids_[i]));
        for (std::size_t k = 0; k < d_; ++k) {
            if (!std::isfinite(data_[i * d_ + k]))
                throw data_error(fmt::format("non-finite embedding value at ({},{})", i, k));
        }
    }
}

std::optional<std::size_t> EmbeddingStore::index_of(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    }
    return v;
}

}  // namespace

EmbeddingStore load_embeddings(const std::filesystem::path& bin_path, const std::filesystem::path& ids_path) {
    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw io_error(fmt::format("cannot open '{}'", bin_path.string()));
    std::string header;
    if (!std::getline(in, header)) throw data_error(fmt::format("{}: missing EMBV1 header", bin_path.string()));
    std::istringstream hs(header);
    std::string magic;
    long long n = -1, d = -1;
    hs >> magic >> n >> d;
    if (magic != "EMBV1") throw data_error(fmt::format("{}: magic mismatch (expected EMBV1)", bin_path.string()));
    std::string extra;
    if (hs.fail() || n < 0 || d < 0 || (hs >> extra) || (n > 0 && d == 0))
        throw data_error(fmt::format("{}: malformed header '{}'", bin_path.string(), header));

    const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    const std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (payload.size() < count * sizeof(float))
        throw data_error(fmt::format("{}: truncated payload ({} bytes, expected {})", bin_path.string(),
                                     payload.size(), count * sizeof(float)));
    if (payload.size() > count * sizeof(float))
        throw data_error(fmt::format("{}: {} trailing bytes after payload", bin_path.string(),
                                     payload.size() - count * sizeof(float)));
    std::vector<float> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, payload.data() + i * sizeof(float), sizeof bits);
        data[i] = std::bit_cast<float>(to_little_endian(bits));
        if (!std::isfinite(data[i]))
            throw data_error(fmt::format("{}: non-finite value at ({},{})", bin_path.string(), i / d, i % d));
    }

    std::ifstream ids_in(ids_path);
    if (!ids_in) throw io_error(fmt::format("cannot open '{}'", ids_path.string()));
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(ids_in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ids.push_back(line);
    }
    while (!ids.empty() && ids.back().empty() && ids.size() > static_cast<std::size_t>(n)) ids.pop_back();
    if (ids.size() != static_cast<std::size_t>(n))
        throw data_error(fmt::format("{}: {} ids for {} embedding rows", ids_path.string(), ids.size(), n));
    return EmbeddingStore(static_cast<std::size_t>(d), std::move(data), std::move(ids));
}

void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& bin_path,
                      const std::filesystem::path& ids_path) {
    std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", bin_path.string()));
    out << "EMBV1 " << store.rows() << ' ' << store.dim() << '\n';
    for (const float v : store.data()) {
        const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(v));
        out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!out) throw io_error(fmt::format("write failed for '{}'", bin_path.string()));

    std::ofstream ids_out(ids_path, std::ios::trunc);
    if (!ids_out) throw io_error(fmt::format("cannot write '{}'", ids_path.string()));
    for (const auto& id : store.ids()) ids_out << id << '\n';
    if (!ids_out) throw io_error(fmt::format("write failed for '{}'", ids_path.string()));
}

}  // namespace vinsp
