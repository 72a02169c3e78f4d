#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace vinsp {

class EmbeddingStore;

namespace detail {

// Sequential float64 accumulation; every similarity path in the library
// shares this summation order so results are bit-identical across paths.
inline double dot(const float* a, const float* b, std::size_t d) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += static_cast<double>(a[k]) * static_cast<double>(b[k]);
    return acc;
}

inline double norm(const float* a, std::size_t d) noexcept { return std::sqrt(dot(a, a, d)); }

}  // namespace detail

/// dot(a,b) / (|a| |b|). Throws on length mismatch or a zero-norm vector.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

/// A contiguous copy of selected embedding rows with precomputed norms,
/// laid out for tiled all-pairs similarity.
class PackedEmbeddings {
public:
    PackedEmbeddings() = default;

    /// Packs `rows` of the store in the given order. Throws a data error
    /// naming the asset if any selected row has zero norm.
    PackedEmbeddings(const EmbeddingStore& store, std::span<const std::size_t> rows);

    std::size_t size() const noexcept { return norms_.size(); }
    std::size_t dim() const noexcept { return d_; }

    double similarity(std::size_t p, std::size_t q) const noexcept {
        return detail::dot(row(p), row(q), d_) / (norms_[p] * norms_[q]);
    }

    /// Calls visit(p, q, sim) for p in [a_begin, a_end), q in [b_begin, b_end).
    /// With `upper_only`, pairs with q <= p are skipped.
    template <class Visit>
    void tile(std::size_t a_begin, std::size_t a_end, std::size_t b_begin, std::size_t b_end,
              bool upper_only, Visit&& visit) const;

    /// Row-block size used by callers that split work into tiles.
    static constexpr std::size_t kBlockRows = 64;
    std::size_t column_block() const noexcept {
        // Keep a column block around 256 KiB of floats.
        return std::max<std::size_t>(16, (256u * 1024u) / (sizeof(float) * std::max<std::size_t>(d_, 1)));
    }

private:
    const float* row(std::size_t p) const noexcept { return data_.data() + p * d_; }

    std::size_t d_ = 0;
    std::vector<float> data_;
    std::vector<double> norms_;
};

template <class Visit>
void PackedEmbeddings::tile(std::size_t a_begin, std::size_t a_end, std::size_t b_begin,
                            std::size_t b_end, bool upper_only, Visit&& visit) const {
    const std::size_t d = d_;
    for (std::size_t p = a_begin; p < a_end; ++p) {
        const float* a = row(p);
        const double na = norms_[p];
        std::size_t q = upper_only ? std::max(b_begin, p + 1) : b_begin;
        // Four independent accumulators, one per column; each keeps the
        // sequential order of detail::dot.
        for (; q + 4 <= b_end; q += 4) {
            const float* b0 = row(q);
            const float* b1 = row(q + 1);
            const float* b2 = row(q + 2);
            const float* b3 = row(q + 3);
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double x = a[k];
                s0 += x * static_cast<double>(b0[k]);
                s1 += x * static_cast<double>(b1[k]);
                s2 += x * static_cast<double>(b2[k]);
                s3 += x * static_cast<double>(b3[k]);
            }
            visit(p, q, s0 / (na * norms_[q]));
            visit(p, q + 1, s1 / (na * norms_[q + 1]));
            visit(p, q + 2, s2 / (na * norms_[q + 2]));
            visit(p, q + 3, s3 / (na * norms_[q + 3]));
        }
        for (; q < b_end; ++q) visit(p, q, detail::dot(a, row(q), d) / (na * norms_[q]));
    }
}

}  // namespace vinsp
