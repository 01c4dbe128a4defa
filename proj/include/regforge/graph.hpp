#ifndef REGFORGE_GRAPH_HPP
#define REGFORGE_GRAPH_HPP

#include <cstdint>
#include <vector>

#include "regforge/bitmatrix.hpp"
#include "regforge/rational.hpp"
#include "regforge/vertex_set.hpp"

namespace regforge {

/// Inclusive 1-based level range. lo > hi denotes the empty range (sum 0).
struct LevelRange {
    int lo = 1;
    int hi = 0;
    bool empty() const { return lo > hi; }
};

/// Edge-weighted graph G = G_1 + ... + G_s where level r contributes weight
/// delta on its active pairs. Weights are delta * count with integer count
/// <= s; self-loops are meaningful and participate in density sums.
///
/// Two storage modes:
///  - level planes (one symmetric bit matrix per level), supporting sums
///    over any level range;
///  - aggregate counts only (graphs loaded from a plain matrix file), which
///    support full-range queries alone.
class LevelWeightedGraph {
public:
    static LevelWeightedGraph from_levels(Rational delta, std::vector<BitMatrix> levels);
    static LevelWeightedGraph from_counts(std::int64_t n, int s, Rational delta,
                                          std::vector<std::uint16_t> counts);

    std::int64_t n() const { return n_; }
    int s() const { return s_; }
    const Rational& delta() const { return delta_; }
    bool has_levels() const { return !levels_.empty(); }
    LevelRange full_range() const { return {1, s_}; }

    const BitMatrix& level(int r) const; // 1-based
    int count(std::int64_t u, std::int64_t v) const;

    bool operator==(const LevelWeightedGraph& o) const;

private:
    LevelWeightedGraph() = default;

    std::int64_t n_ = 0;
    int s_ = 0;
    Rational delta_;
    std::vector<BitMatrix> levels_;       // size s_ when decomposition known
    std::vector<std::uint16_t> agg_;      // n*n aggregate counts otherwise
};

/// Exact density d = delta * activation / pairs, kept unreduced so integer
/// identities stay visible. pairs = |A| * |B|.
struct DensityValue {
    std::int64_t activation = 0;
    std::int64_t pairs = 1;
    Rational delta;

    Rational value() const {
        return Rational::normalize(i128(delta.num()) * activation, i128(delta.den()) * pairs);
    }
};

/// Exact three-way comparison of two density values (cross-multiplied).
int compare(const DensityValue& a, const DensityValue& b);
Rational abs_diff(const DensityValue& a, const DensityValue& b);
/// |a - b| > eps, exactly.
bool deviation_exceeds(const DensityValue& a, const DensityValue& b, const Rational& eps);

/// Sum over (x, y) in A x B of the level-range activation count of (x, y).
/// Ordered pairs; the diagonal contributes when A and B intersect.
/// Errors: "empty operand" when A or B is empty; "level range out of
/// bounds" when the range is non-empty and falls outside [1, s]; partial
/// ranges require level planes.
std::int64_t activation_sum(const LevelWeightedGraph& g, LevelRange range,
                            const VertexSet& a, const VertexSet& b);

/// Same contract, evaluated by the definition (per-pair loop). Kept as the
/// serial reference for the masked-popcount kernel.
std::int64_t activation_sum_reference(const LevelWeightedGraph& g, LevelRange range,
                                      const VertexSet& a, const VertexSet& b);

DensityValue density(const LevelWeightedGraph& g, LevelRange range,
                     const VertexSet& a, const VertexSet& b);

} // namespace regforge

#endif
