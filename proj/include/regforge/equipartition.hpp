#ifndef REGFORGE_EQUIPARTITION_HPP
#define REGFORGE_EQUIPARTITION_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "regforge/vertex_set.hpp"

namespace regforge {

/// Partition of [0, n) into k nonempty parts, stored as a part index per
/// vertex. "Equipartition" here means the *type* used by partition audits;
/// whether part sizes actually differ by at most one is a separate check.
class Equipartition {
public:
    Equipartition(std::int64_t n, std::int64_t k, std::vector<std::int32_t> part_of)
        : n_(n), k_(k), part_(std::move(part_of)) {
        if (n <= 0 || k <= 0 || std::int64_t(part_.size()) != n)
            throw std::invalid_argument("partition: bad dimensions");
        std::vector<std::int64_t> sz(std::size_t(k), 0);
        for (std::int32_t p : part_) {
            if (p < 0 || p >= k) throw std::invalid_argument("partition: part index out of range");
            ++sz[std::size_t(p)];
        }
        for (std::int64_t s : sz)
            if (s == 0) throw std::invalid_argument("partition: empty part");
        sizes_ = std::move(sz);
    }

    std::int64_t n() const { return n_; }
    std::int64_t k() const { return k_; }
    std::int32_t part_of(std::int64_t v) const { return part_[std::size_t(v)]; }
    const std::vector<std::int64_t>& sizes() const { return sizes_; }
    const std::vector<std::int32_t>& assignment() const { return part_; }

    std::vector<VertexSet> parts() const {
        std::vector<std::vector<std::int32_t>> buf(static_cast<std::size_t>(k_));
        for (std::int64_t v = 0; v < n_; ++v) buf[std::size_t(part_[std::size_t(v)])].push_back(std::int32_t(v));
        std::vector<VertexSet> out;
        out.reserve(std::size_t(k_));
        for (auto& b : buf) out.push_back(VertexSet::of(std::move(b), n_));
        return out;
    }

    bool operator==(const Equipartition& o) const {
        return n_ == o.n_ && k_ == o.k_ && part_ == o.part_;
    }

private:
    std::int64_t n_, k_;
    std::vector<std::int32_t> part_;
    std::vector<std::int64_t> sizes_;
};

struct EquipartitionCheck {
    bool balanced = false;          // max part size - min part size <= 1
    std::int64_t min_size = 0;
    std::int64_t max_size = 0;
    std::vector<std::int64_t> sizes;
};

inline EquipartitionCheck check_equipartition(const Equipartition& p) {
    EquipartitionCheck c;
    c.sizes = p.sizes();
    c.min_size = c.sizes[0];
    c.max_size = c.sizes[0];
    for (std::int64_t s : c.sizes) {
        if (s < c.min_size) c.min_size = s;
        if (s > c.max_size) c.max_size = s;
    }
    c.balanced = (c.max_size - c.min_size) <= 1;
    return c;
}

} // namespace regforge

#endif
