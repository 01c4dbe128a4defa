#ifndef REGFORGE_BITMATRIX_HPP
#define REGFORGE_BITMATRIX_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace regforge {

/// Symmetric 0/1 matrix stored as row-major packed 64-bit words. Rows are
/// padded with zero bits, so whole-word popcounts over a row are safe.
class BitMatrix {
public:
    BitMatrix() : n_(0), words_(0) {}
    explicit BitMatrix(std::int64_t n)
        : n_(n), words_(std::size_t((n + 63) / 64)), bits_(std::size_t(n) * words_, 0) {
        if (n < 0) throw std::invalid_argument("bitmatrix: negative size");
    }

    std::int64_t n() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    const std::uint64_t* row(std::int64_t u) const { return bits_.data() + std::size_t(u) * words_; }
    std::uint64_t* row(std::int64_t u) { return bits_.data() + std::size_t(u) * words_; }

    void set(std::int64_t u, std::int64_t v) {
        row(u)[std::size_t(v >> 6)] |= 1ull << (v & 63);
    }
    void clear(std::int64_t u, std::int64_t v) {
        row(u)[std::size_t(v >> 6)] &= ~(1ull << (v & 63));
    }
    bool test(std::int64_t u, std::int64_t v) const {
        return (row(u)[std::size_t(v >> 6)] >> (v & 63)) & 1u;
    }

    /// Popcount of row u restricted to column range [lo, hi).
    std::int64_t row_range_popcount(std::int64_t u, std::int64_t lo, std::int64_t hi) const {
        if (lo >= hi) return 0;
        const std::uint64_t* r = row(u);
        std::int64_t wl = lo >> 6, wh = (hi - 1) >> 6;
        std::uint64_t mask_lo = ~0ull << (lo & 63);
        std::uint64_t mask_hi = ~0ull >> (63 - ((hi - 1) & 63));
        if (wl == wh) return std::popcount(r[std::size_t(wl)] & mask_lo & mask_hi);
        std::int64_t c = std::popcount(r[std::size_t(wl)] & mask_lo) +
                         std::popcount(r[std::size_t(wh)] & mask_hi);
        for (std::int64_t w = wl + 1; w < wh; ++w) c += std::popcount(r[std::size_t(w)]);
        return c;
    }

    /// Popcount of row u AND a mask of words_per_row() words.
    std::int64_t row_masked_popcount(std::int64_t u, const std::uint64_t* mask) const {
        const std::uint64_t* r = row(u);
        std::int64_t c = 0;
        for (std::size_t w = 0; w < words_; ++w) c += std::popcount(r[w] & mask[w]);
        return c;
    }

    bool operator==(const BitMatrix& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
    std::int64_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

} // namespace regforge

#endif
