#include "regforge/graph.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace regforge {

LevelWeightedGraph LevelWeightedGraph::from_levels(Rational delta, std::vector<BitMatrix> levels) {
    if (levels.empty()) throw std::invalid_argument("graph: no levels");
    if (delta.num() <= 0) throw std::invalid_argument("graph: delta must be positive");
    std::int64_t n = levels[0].n();
    if (n <= 0) throw std::invalid_argument("graph: empty vertex set");
    for (const auto& m : levels)
        if (m.n() != n) throw std::invalid_argument("graph: level size mismatch");
    int s = int(levels.size());
    if (Rational::from_int(s) * delta > Rational::from_int(1))
        throw std::invalid_argument("graph: s*delta exceeds 1");
    LevelWeightedGraph g;
    g.n_ = n;
    g.s_ = s;
    g.delta_ = delta;
    g.levels_ = std::move(levels);
    return g;
}

LevelWeightedGraph LevelWeightedGraph::from_counts(std::int64_t n, int s, Rational delta,
                                                   std::vector<std::uint16_t> counts) {
    if (n <= 0 || s <= 0) throw std::invalid_argument("graph: bad dimensions");
    if (delta.num() <= 0) throw std::invalid_argument("graph: delta must be positive");
    if (Rational::from_int(s) * delta > Rational::from_int(1))
        throw std::invalid_argument("graph: s*delta exceeds 1");
    if (std::int64_t(counts.size()) != n * n)
        throw std::invalid_argument("graph: count matrix size mismatch");
    for (std::int64_t u = 0; u < n; ++u)
        for (std::int64_t v = 0; v < n; ++v) {
            std::uint16_t c = counts[std::size_t(u * n + v)];
            if (c > s) throw std::invalid_argument("graph: count exceeds level count");
            if (c != counts[std::size_t(v * n + u)])
                throw std::invalid_argument("graph: counts not symmetric");
        }
    LevelWeightedGraph g;
    g.n_ = n;
    g.s_ = s;
    g.delta_ = delta;
    g.agg_ = std::move(counts);
    return g;
}

const BitMatrix& LevelWeightedGraph::level(int r) const {
    if (!has_levels()) throw std::logic_error("graph: level decomposition unavailable");
    if (r < 1 || r > s_) throw std::out_of_range("graph: level range out of bounds");
    return levels_[std::size_t(r - 1)];
}

int LevelWeightedGraph::count(std::int64_t u, std::int64_t v) const {
    if (has_levels()) {
        int c = 0;
        for (const auto& m : levels_) c += m.test(u, v) ? 1 : 0;
        return c;
    }
    return agg_[std::size_t(u * n_ + v)];
}

bool LevelWeightedGraph::operator==(const LevelWeightedGraph& o) const {
    if (n_ != o.n_ || s_ != o.s_ || !(delta_ == o.delta_)) return false;
    for (std::int64_t u = 0; u < n_; ++u)
        for (std::int64_t v = 0; v < n_; ++v)
            if (count(u, v) != o.count(u, v)) return false;
    return true;
}

namespace {

void check_operands(const LevelWeightedGraph& g, LevelRange range,
                    const VertexSet& a, const VertexSet& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty operand");
    if (range.empty()) return;
    if (range.lo < 1 || range.hi > g.s())
        throw std::out_of_range("level range out of bounds");
}

bool is_full_range(const LevelWeightedGraph& g, LevelRange r) {
    return r.lo == 1 && r.hi == g.s();
}

} // namespace

std::int64_t activation_sum(const LevelWeightedGraph& g, LevelRange range,
                            const VertexSet& a, const VertexSet& b) {
    check_operands(g, range, a, b);
    if (range.empty()) return 0;

    if (!g.has_levels()) {
        if (!is_full_range(g, range))
            throw std::logic_error("graph: level decomposition unavailable for partial range");
        std::int64_t total = 0;
        for (std::int32_t u : a)
            for (std::int32_t v : b) total += g.count(u, v);
        return total;
    }

    auto mask = b.mask(g.n());
    const std::uint64_t* mp = mask.data();
    std::int64_t na = a.size();
    std::int64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static) \
    if (na * std::int64_t(range.hi - range.lo + 1) > 512)
    for (std::int64_t i = 0; i < na; ++i) {
        std::int64_t row_total = 0;
        for (int r = range.lo; r <= range.hi; ++r)
            row_total += g.level(r).row_masked_popcount(a[i], mp);
        total += row_total;
    }
    return total;
}

std::int64_t activation_sum_reference(const LevelWeightedGraph& g, LevelRange range,
                                      const VertexSet& a, const VertexSet& b) {
    check_operands(g, range, a, b);
    if (range.empty()) return 0;
    if (!g.has_levels()) {
        if (!is_full_range(g, range))
            throw std::logic_error("graph: level decomposition unavailable for partial range");
        std::int64_t total = 0;
        for (std::int32_t u : a)
            for (std::int32_t v : b) total += g.count(u, v);
        return total;
    }
    std::int64_t total = 0;
    for (std::int32_t u : a)
        for (std::int32_t v : b)
            for (int r = range.lo; r <= range.hi; ++r)
                total += g.level(r).test(u, v) ? 1 : 0;
    return total;
}

DensityValue density(const LevelWeightedGraph& g, LevelRange range,
                     const VertexSet& a, const VertexSet& b) {
    DensityValue d;
    d.activation = activation_sum(g, range, a, b);
    d.pairs = a.size() * b.size();
    d.delta = g.delta();
    return d;
}

int compare(const DensityValue& a, const DensityValue& b) {
    Rational av = a.value(), bv = b.value();
    if (av == bv) return 0;
    return av < bv ? -1 : 1;
}

Rational abs_diff(const DensityValue& a, const DensityValue& b) {
    return (a.value() - b.value()).abs();
}

bool deviation_exceeds(const DensityValue& a, const DensityValue& b, const Rational& eps) {
    return abs_diff(a, b) > eps;
}

} // namespace regforge
