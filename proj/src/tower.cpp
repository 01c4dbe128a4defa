#include "regforge/tower.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "regforge/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace regforge {

namespace {

constexpr std::int64_t kMaxCells = 1 << 20;
constexpr std::int64_t kMaxVertices = 100000;
constexpr std::int64_t kMaxGrowthBits = 1 << 22;

std::int64_t isqrt_floor(std::int64_t x) {
    std::int64_t r = std::int64_t(std::sqrt(double(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

} // namespace

Rational delta_from_epsilon(const Rational& epsilon) {
    if (epsilon.num() <= 0) throw std::invalid_argument("epsilon must be positive");
    std::int64_t p = epsilon.num(), q = epsilon.den();
    std::int64_t sp = isqrt_floor(p), sq = isqrt_floor(q);
    if (sp * sp != p || sq * sq != q)
        throw std::invalid_argument(
            "epsilon has no exact rational square root; use custom mode with an explicit delta");
    Rational delta = Rational(30 * sp, sq);
    if (delta > Rational::from_int(1))
        throw std::invalid_argument("epsilon too large: floor(1/delta) would be 0");
    return delta;
}

ConstructionParams ConstructionParams::coupled(const Rational& epsilon, std::int64_t n,
                                               std::uint64_t seed, std::int64_t kappa) {
    ConstructionParams p;
    p.mode = BuildMode::coupled;
    p.epsilon = epsilon;
    p.delta = delta_from_epsilon(epsilon);
    p.s = int(p.delta.den() / p.delta.num()); // floor(1/delta), delta <= 1
    p.kappa = kappa;
    p.n = n;
    p.seed = seed;
    p.validate();
    return p;
}

ConstructionParams ConstructionParams::custom(const Rational& delta, int s, std::int64_t kappa,
                                              std::int64_t n, std::uint64_t seed,
                                              std::optional<Rational> epsilon) {
    ConstructionParams p;
    p.mode = BuildMode::custom;
    p.epsilon = epsilon;
    p.delta = delta;
    p.s = s;
    p.kappa = kappa;
    p.n = n;
    p.seed = seed;
    p.validate();
    return p;
}

void ConstructionParams::validate() const {
    if (delta.num() <= 0) throw std::invalid_argument("params: delta must be positive");
    if (s < 1) throw std::invalid_argument("params: s must be at least 1");
    if (Rational::from_int(s) * delta > Rational::from_int(1))
        throw std::invalid_argument("params: s*delta exceeds 1");
    if (kappa < 1) throw std::invalid_argument("params: kappa must be positive");
    if (n < 1) throw std::invalid_argument("params: n must be positive");
}

std::vector<BigInt> tower_sizes(int s, std::int64_t kappa) {
    if (s < 0) throw std::invalid_argument("tower sizes: s must be nonnegative");
    if (kappa < 1) throw std::invalid_argument("tower sizes: kappa must be positive");
    std::vector<BigInt> m;
    m.reserve(std::size_t(s) + 1);
    m.push_back(1);
    for (int r = 1; r <= s; ++r) {
        BigInt prev = m.back();
        BigInt exp = (prev + kappa - 1) / kappa;
        if (exp > kMaxGrowthBits)
            throw std::overflow_error("tower sizes: growth at level " + std::to_string(r) +
                                      " exceeds the materializable bit budget");
        m.push_back(prev << unsigned(exp));
    }
    return m;
}

Equipartition PartitionTower::level_partition(int r) const {
    std::int64_t cs = cell_size(r);
    std::vector<std::int32_t> part(static_cast<std::size_t>(params.n));
    for (std::int64_t v = 0; v < params.n; ++v) part[std::size_t(v)] = std::int32_t(v / cs);
    return Equipartition(params.n, m[std::size_t(r)], std::move(part));
}

VertexSet PartitionTower::side_set(int r, std::int32_t i, std::int32_t j, bool a_side) const {
    const auto& seq = levels[std::size_t(r - 1)].seq;
    std::int64_t parent = cell_size(r - 1), child = cell_size(r);
    std::int64_t base = i * parent;
    std::vector<std::int32_t> ids;
    ids.reserve(std::size_t(parent / 2));
    for (std::int64_t t = 0; t * child < parent; ++t) {
        if (seq.parts[std::size_t(j)].in_a(t) == a_side)
            for (std::int64_t v = base + t * child; v < base + (t + 1) * child; ++v)
                ids.push_back(std::int32_t(v));
    }
    return VertexSet::of(std::move(ids), params.n);
}

bool PartitionTower::operator==(const PartitionTower& o) const {
    if (!(params == o.params) || m != o.m || levels.size() != o.levels.size()) return false;
    for (std::size_t r = 0; r < levels.size(); ++r) {
        if (levels[r].M != o.levels[r].M) return false;
        const auto& a = levels[r].seq, &b = o.levels[r].seq;
        if (a.m != b.m || a.M != b.M || !(a.c == b.c)) return false;
        for (std::size_t i = 0; i < a.parts.size(); ++i)
            if (!(a.parts[i] == b.parts[i])) return false;
    }
    return true;
}

PartitionTower build_tower(const ConstructionParams& p, std::int64_t max_retries) {
    p.validate();
    if (p.n > kMaxVertices)
        throw std::invalid_argument("build: n exceeds the materialization cap of " +
                                    std::to_string(kMaxVertices));

    PartitionTower t;
    t.params = p;
    t.m.push_back(1);
    std::vector<std::int64_t> fanout;
    for (int r = 1; r <= p.s; ++r) {
        std::int64_t prev = t.m.back();
        std::int64_t exp = (prev + p.kappa - 1) / p.kappa;
        if (exp > 20 || (t.m.back() << exp) > kMaxCells)
            throw std::invalid_argument("build: materialization cap exceeded at level " +
                                        std::to_string(r) + " (m would pass " +
                                        std::to_string(kMaxCells) + " cells)");
        fanout.push_back(std::int64_t(1) << exp);
        t.m.push_back(prev * fanout.back());
    }
    if (p.n % t.m.back() != 0)
        throw std::invalid_argument("divisibility: n=" + std::to_string(p.n) +
                                    " is not a multiple of m_s=" + std::to_string(t.m.back()));

    for (int r = 1; r <= p.s; ++r) {
        std::int64_t m_prev = t.m[std::size_t(r - 1)];
        std::int64_t M = fanout[std::size_t(r - 1)];
        TowerLevel level;
        level.M = M;
        try {
            level.seq = generate_balanced(m_prev, M, Rational(1, 16),
                                          derive_seed(p.seed, "tower-level", std::uint64_t(r)),
                                          max_retries);
        } catch (const BalanceGenerationError& e) {
            throw BalanceGenerationError("build: level " + std::to_string(r) + ": " + e.what(),
                                         e.best_attempt, e.best_worst_count, e.attempts);
        }
        t.levels.push_back(std::move(level));
    }
    return t;
}

LevelWeightedGraph build_instance(const PartitionTower& t) {
    std::int64_t n = t.params.n;
    int s = t.params.s;
    std::vector<BitMatrix> planes;
    planes.reserve(std::size_t(s));
    for (int r = 1; r <= s; ++r) {
        BitMatrix plane(n);
        const auto& seq = t.levels[std::size_t(r - 1)].seq;
        std::int64_t parent = t.cell_size(r - 1), child = t.cell_size(r);
        std::int64_t mr = t.m[std::size_t(r - 1)];
        // side[j][v]: v's side under parent j's bipartition (a function of
        // v's child index alone)
        std::vector<std::vector<std::uint8_t>> side(
            static_cast<std::size_t>(mr), std::vector<std::uint8_t>(static_cast<std::size_t>(n)));
        for (std::int64_t j = 0; j < mr; ++j)
            for (std::int64_t v = 0; v < n; ++v)
                side[std::size_t(j)][std::size_t(v)] =
                    seq.parts[std::size_t(j)].in_a((v % parent) / child) ? 1 : 0;
#pragma omp parallel for schedule(static)
        for (std::int64_t u = 0; u < n; ++u) {
            std::int64_t i = u / parent;
            const std::uint8_t* mine = side[std::size_t(i)].data();
            for (std::int64_t j = 0; j < mr; ++j) {
                std::uint8_t mu = side[std::size_t(j)][std::size_t(u)];
                for (std::int64_t v = j * parent; v < (j + 1) * parent; ++v)
                    if (mine[v] == mu) plane.set(u, v);
            }
        }
        planes.push_back(std::move(plane));
    }
    return LevelWeightedGraph::from_levels(t.params.delta, std::move(planes));
}

HalfDensityResult half_density_check(const PartitionTower& t, const LevelWeightedGraph& g,
                                     int r, std::int64_t v, std::int32_t j) {
    if (r < 1 || r > t.params.s) throw std::out_of_range("level range out of bounds");
    if (j < 0 || j >= t.m[std::size_t(r - 1)])
        throw std::out_of_range("half density: cell index out of range");
    std::int64_t parent = t.cell_size(r - 1);
    HalfDensityResult res;
    res.active = g.level(r).row_range_popcount(v, j * parent, (j + 1) * parent);
    res.expected = parent / 2;
    res.ok = res.active == res.expected;
    return res;
}

TailDensityResult tail_density_check(const PartitionTower& t, const LevelWeightedGraph& g,
                                     int r, const VertexSet& z, std::int32_t j, std::int32_t i) {
    if (r < 1 || r > t.params.s) throw std::out_of_range("level range out of bounds");
    if (z.empty()) throw std::invalid_argument("empty operand");
    for (std::int32_t x : z)
        if (t.cell_of(r - 1, x) != i)
            throw std::invalid_argument("tail density: Z must lie inside cell i of level r-1");
    VertexSet a_ji = t.side_set(r, j, i, true);
    TailDensityResult res;
    std::int64_t act = 0;
    if (r < t.params.s) act = activation_sum(g, LevelRange{r + 1, t.params.s}, z, a_ji);
    res.lhs_twice = 2 * act;
    res.rhs = std::int64_t(t.params.s - r) * z.size() * a_ji.size();
    res.ok = res.lhs_twice == res.rhs;
    return res;
}

} // namespace regforge
