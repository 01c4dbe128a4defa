#ifndef REGFORGE_VERTEX_SET_HPP
#define REGFORGE_VERTEX_SET_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace regforge {

/// Finite set of vertex ids, kept sorted ascending with no duplicates.
/// An empty VertexSet is a legal value; operations that cannot accept one
/// (density denominators) reject it at their own entry point.
class VertexSet {
public:
    VertexSet() = default;

    /// Validates: strictly increasing, all ids in [0, n).
    static VertexSet of(std::vector<std::int32_t> ids, std::int64_t n) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] < 0 || ids[i] >= n)
                throw std::invalid_argument("vertex set: id out of range");
            if (i > 0 && ids[i] <= ids[i - 1])
                throw std::invalid_argument("vertex set: ids must be strictly increasing");
        }
        VertexSet s;
        s.v_ = std::move(ids);
        return s;
    }

    /// Contiguous range [lo, hi).
    static VertexSet range(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("vertex set: bad range");
        VertexSet s;
        s.v_.reserve(std::size_t(hi - lo));
        for (std::int64_t v = lo; v < hi; ++v) s.v_.push_back(std::int32_t(v));
        return s;
    }

    std::int64_t size() const { return std::int64_t(v_.size()); }
    bool empty() const { return v_.empty(); }
    std::int32_t operator[](std::int64_t i) const { return v_[std::size_t(i)]; }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    const std::vector<std::int32_t>& ids() const { return v_; }

    bool contains(std::int32_t x) const {
        return std::binary_search(v_.begin(), v_.end(), x);
    }

    VertexSet intersect(const VertexSet& o) const {
        VertexSet r;
        std::set_intersection(v_.begin(), v_.end(), o.v_.begin(), o.v_.end(),
                              std::back_inserter(r.v_));
        return r;
    }

    /// Indicator bitmask padded to ceil(n/64) words.
    std::vector<std::uint64_t> mask(std::int64_t n) const {
        std::vector<std::uint64_t> m(std::size_t((n + 63) / 64), 0);
        for (std::int32_t x : v_) m[std::size_t(x >> 6)] |= 1ull << (x & 63);
        return m;
    }

    bool operator==(const VertexSet& o) const { return v_ == o.v_; }

private:
    std::vector<std::int32_t> v_;
};

} // namespace regforge

#endif
