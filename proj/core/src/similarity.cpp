#include "vinsp/similarity.hpp"

#include <fmt/format.h>

#include "vinsp/embeddings.hpp"
#include "vinsp/error.hpp"

namespace vinsp {

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw data_error(fmt::format("cosine_similarity: length mismatch ({} vs {})", a.size(), b.size()));
    const double na = detail::norm(a.data(), a.size());
    const double nb = detail::norm(b.data(), b.size());
    if (na == 0.0 || nb == 0.0) throw data_error("cosine_similarity: zero-norm vector (degenerate embedding)");
    return detail::dot(a.data(), b.data(), a.size()) / (na * nb);
}

PackedEmbeddings::PackedEmbeddings(const EmbeddingStore& store, std::span<const std::size_t> rows)
    : d_(store.dim()), data_(rows.size() * store.dim()), norms_(rows.size()) {
    for (std::size_t p = 0; p < rows.size(); ++p) {
        const auto src = store.row(rows[p]);
        std::copy(src.begin(), src.end(), data_.begin() + static_cast<std::ptrdiff_t>(p * d_));
        norms_[p] = detail::norm(src.data(), d_);
        if (norms_[p] == 0.0)
            throw data_error(fmt::format("zero-norm embedding for asset '{}'", store.ids()[rows[p]]));
    }
}

}  // namespace vinsp
