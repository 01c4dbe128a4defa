#ifndef REGFORGE_TOWER_HPP
#define REGFORGE_TOWER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "regforge/bipartitions.hpp"
#include "regforge/equipartition.hpp"
#include "regforge/graph.hpp"
#include "regforge/rational.hpp"

namespace regforge {

using BigInt = boost::multiprecision::cpp_int;

enum class BuildMode { coupled, custom };

/// Parameters of one instance. coupled derives (delta, s) from epsilon
/// via delta = 30*sqrt(epsilon), s = floor(1/delta); custom takes delta and
/// s directly and leaves epsilon as an optional audit knob.
struct ConstructionParams {
    BuildMode mode = BuildMode::custom;
    std::optional<Rational> epsilon;
    Rational delta;
    int s = 0;
    std::int64_t kappa = 512;
    std::int64_t n = 0;
    std::uint64_t seed = 0;

    static ConstructionParams coupled(const Rational& epsilon, std::int64_t n,
                                      std::uint64_t seed, std::int64_t kappa = 512);
    static ConstructionParams custom(const Rational& delta, int s, std::int64_t kappa,
                                     std::int64_t n, std::uint64_t seed,
                                     std::optional<Rational> epsilon = std::nullopt);
    void validate() const;

    bool operator==(const ConstructionParams& o) const {
        return mode == o.mode && epsilon == o.epsilon && delta == o.delta && s == o.s &&
               kappa == o.kappa && n == o.n && seed == o.seed;
    }
};

/// delta = 30*sqrt(epsilon), exact. Requires epsilon to be a square of a
/// rational; otherwise directs the caller to custom mode. Also rejects
/// epsilon so large that s = floor(1/delta) would be 0 ("epsilon too
/// large").
Rational delta_from_epsilon(const Rational& epsilon);

/// Cell counts m_0..m_s of the nested partition tower under
/// m_0 = 1, m_r = m_{r-1} * 2^ceil(m_{r-1}/kappa). Arbitrary precision;
/// growth beyond ~2^22 bits throws std::overflow_error naming the level.
std::vector<BigInt> tower_sizes(int s, std::int64_t kappa);

struct TowerLevel {
    std::int64_t M = 0;          // fan-out 2^ceil(m_prev/kappa)
    BipartitionSequence seq;     // one bipartition of [0, M) per parent cell
};

/// Nested partitions X_0, ..., X_s of [0, n) into contiguous equal cells,
/// with a balanced bipartition sequence per level driving the activation
/// rule. Level r refines level r-1 exactly: each level-r cell lies inside a
/// single level-(r-1) cell.
struct PartitionTower {
    ConstructionParams params;
    std::vector<std::int64_t> m;       // m[0..s]
    std::vector<TowerLevel> levels;    // levels[r-1] belongs to level r

    std::int64_t cell_size(int r) const { return params.n / m[std::size_t(r)]; }
    std::int32_t cell_of(int r, std::int64_t v) const {
        return std::int32_t(v / cell_size(r));
    }
    /// Index of v's level-r cell within its level-(r-1) parent.
    std::int32_t child_index(int r, std::int64_t v) const {
        return std::int32_t((v % cell_size(r - 1)) / cell_size(r));
    }

    /// Activation rule at level r: with i, j the level-(r-1) cells of u and
    /// v, the pair is active iff u's side under parent j's bipartition
    /// equals v's side under parent i's bipartition. Equivalent to the
    /// two-sided membership rule (u in A_{i,j} and v in A_{j,i}, or both in
    /// the B sides); symmetric in (u, v).
    bool activation(int r, std::int64_t u, std::int64_t v) const {
        const auto& seq = levels[std::size_t(r - 1)].seq;
        std::int32_t i = cell_of(r - 1, u), j = cell_of(r - 1, v);
        return seq.parts[std::size_t(j)].in_a(child_index(r, u)) ==
               seq.parts[std::size_t(i)].in_a(child_index(r, v));
    }

    Equipartition level_partition(int r) const;

    /// A_{i,j} (a_side) or B_{i,j}: the union of parent i's child cells
    /// placed on that side by bipartition j of level r.
    VertexSet side_set(int r, std::int32_t i, std::int32_t j, bool a_side) const;

    bool operator==(const PartitionTower& o) const;
};

/// Materializes the tower. Errors: "divisibility" when m_s does not divide
/// n; materialization caps at m_s <= 2^20 cells and n <= 100000; level
/// sequence generation failures propagate with the level named.
PartitionTower build_tower(const ConstructionParams& p, std::int64_t max_retries = 100000);

/// The instance graph: level r activates pairs by the tower rule, each
/// active pair carrying weight delta. Row-parallel; equals the per-pair
/// activation() evaluation.
LevelWeightedGraph build_instance(const PartitionTower& t);

struct HalfDensityResult {
    bool ok = false;
    std::int64_t active = 0;    // activation count from v into cell j at level r
    std::int64_t expected = 0;  // |X_j| / 2
};

/// Per-vertex identity: every vertex sees exactly half of every level-(r-1)
/// cell as active at level r, i.e. d restricted to level r is delta/2.
HalfDensityResult half_density_check(const PartitionTower& t, const LevelWeightedGraph& g,
                                     int r, std::int64_t v, std::int32_t j);

struct TailDensityResult {
    bool ok = false;
    std::int64_t lhs_twice = 0; // 2 * activation over levels r+1..s
    std::int64_t rhs = 0;       // (s - r) * |Z| * |A_{j,i}|
};

/// Aggregate identity for the levels above r: for any Z inside X_i (level
/// r-1) the density from Z to A_{j,i} over levels r+1..s is exactly
/// (s - r) * delta / 2. Stated multiplied out so both sides are integers.
TailDensityResult tail_density_check(const PartitionTower& t, const LevelWeightedGraph& g,
                                     int r, const VertexSet& z, std::int32_t j, std::int32_t i);

} // namespace regforge

#endif
