#include "regforge/bipartitions.hpp"

#include <algorithm>
#include <bit>

#include "regforge/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace regforge {

namespace {

void check_balance_inputs(const BipartitionSequence& s, const Rational& c) {
    if (s.m <= 0 || s.M < 2) throw std::invalid_argument("balance: empty sequence");
    if (c.is_negative()) throw std::invalid_argument("balance: c must be nonnegative");
}

// count <= (1/2 + c) * m, exactly
bool pair_ok(std::int64_t count, std::int64_t m, const Rational& c) {
    return i128(2) * c.den() * count <= (i128(c.den()) + i128(2) * c.num()) * m;
}

// column bit vectors over the sequence index: bit i of column t is set when
// bipartition i places element t in B. Same-side count = m - popcount(xor).
std::vector<std::vector<std::uint64_t>> build_columns(const BipartitionSequence& s) {
    std::size_t words = std::size_t((s.m + 63) / 64);
    std::vector<std::vector<std::uint64_t>> cols(std::size_t(s.M),
                                                 std::vector<std::uint64_t>(words, 0));
    for (std::int64_t i = 0; i < s.m; ++i)
        for (std::int64_t t = 0; t < s.M; ++t)
            if (!s.parts[std::size_t(i)].in_a(t))
                cols[std::size_t(t)][std::size_t(i >> 6)] |= 1ull << (i & 63);
    return cols;
}

} // namespace

std::int64_t co_occurrence(const BipartitionSequence& s, std::int64_t t, std::int64_t t_prime) {
    std::int64_t c = 0;
    for (const auto& p : s.parts)
        if (p.in_a(t) == p.in_a(t_prime)) ++c;
    return c;
}

BalanceReport is_balanced(const BipartitionSequence& s, const Rational& c) {
    check_balance_inputs(s, c);
    auto cols = build_columns(s);
    std::size_t words = cols[0].size();

    struct Best { std::int64_t count = -1, t = -1, tp = -1; };
    auto better = [](const Best& x, const Best& y) {
        if (x.count != y.count) return x.count > y.count;
        if (x.t != y.t) return x.t < y.t;
        return x.tp < y.tp;
    };

    Best best;
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::vector<Best> locals(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < s.M - 1; ++t) {
#ifdef _OPENMP
        Best& mine = locals[std::size_t(omp_get_thread_num())];
#else
        Best& mine = locals[0];
#endif
        for (std::int64_t tp = t + 1; tp < s.M; ++tp) {
            std::int64_t diff = 0;
            const std::uint64_t* a = cols[std::size_t(t)].data();
            const std::uint64_t* b = cols[std::size_t(tp)].data();
            for (std::size_t w = 0; w < words; ++w) diff += std::popcount(a[w] ^ b[w]);
            Best cand{s.m - diff, t, tp};
            if (better(cand, mine)) mine = cand;
        }
    }
    for (const Best& l : locals)
        if (l.count >= 0 && better(l, best)) best = l;

    BalanceReport r;
    r.pairs_checked = s.M * (s.M - 1) / 2;
    r.worst_t = best.t;
    r.worst_t_prime = best.tp;
    r.worst_count = best.count;
    r.balanced = pair_ok(best.count, s.m, c);
    return r;
}

BalanceReport is_balanced_reference(const BipartitionSequence& s, const Rational& c) {
    check_balance_inputs(s, c);
    BalanceReport r;
    r.pairs_checked = s.M * (s.M - 1) / 2;
    for (std::int64_t t = 0; t < s.M - 1; ++t)
        for (std::int64_t tp = t + 1; tp < s.M; ++tp) {
            std::int64_t cnt = co_occurrence(s, t, tp);
            if (cnt > r.worst_count || r.worst_t < 0) {
                r.worst_count = cnt;
                r.worst_t = t;
                r.worst_t_prime = tp;
            }
        }
    r.balanced = pair_ok(r.worst_count, s.m, c);
    return r;
}

BipartitionSequence generate_balanced(std::int64_t m, std::int64_t M, const Rational& c,
                                      std::uint64_t seed, std::int64_t max_retries) {
    if (m <= 0) throw std::invalid_argument("generate: m must be positive");
    if (M < 2 || M % 2 != 0) throw std::invalid_argument("generate: M must be even and >= 2");
    if (max_retries <= 0) throw std::invalid_argument("generate: max_retries must be positive");

    if (M == 2) {
        // ({0}, {1}) repeated m times: every pair (there is one) always
        // splits, so the sequence is 0-balanced, hence c-balanced for c >= 0.
        std::vector<Bipartition> parts;
        parts.reserve(std::size_t(m));
        for (std::int64_t i = 0; i < m; ++i)
            parts.push_back(Bipartition::from_sides({1, 0}));
        auto s = BipartitionSequence::of(std::move(parts), c);
        s.verified = is_balanced(s, c).balanced;
        return s;
    }

    BipartitionSequence best;
    std::int64_t best_worst = -1;
    std::vector<std::int64_t> pool(static_cast<std::size_t>(M));
    for (std::int64_t attempt = 0; attempt < max_retries; ++attempt) {
        SplitMix64 rng(derive_seed(seed, "balanced-seq", std::uint64_t(attempt)));
        std::vector<Bipartition> parts;
        parts.reserve(std::size_t(m));
        for (std::int64_t i = 0; i < m; ++i) {
            for (std::int64_t t = 0; t < M; ++t) pool[std::size_t(t)] = t;
            fy_shuffle(pool, rng);
            std::vector<std::uint8_t> side(std::size_t(M), 0);
            for (std::int64_t t = 0; t < M / 2; ++t) side[std::size_t(pool[std::size_t(t)])] = 1;
            parts.push_back(Bipartition::from_sides(std::move(side)));
        }
        auto s = BipartitionSequence::of(std::move(parts), c);
        auto rep = is_balanced(s, c);
        if (rep.balanced) {
            s.verified = true;
            return s;
        }
        if (best_worst < 0 || rep.worst_count < best_worst) {
            best_worst = rep.worst_count;
            best = s;
        }
    }
    throw BalanceGenerationError(
        "generate: no " + c.to_string() + "-balanced sequence found for m=" + std::to_string(m) +
            " M=" + std::to_string(M) + " within " + std::to_string(max_retries) +
            " attempts (best worst-pair count " + std::to_string(best_worst) + ")",
        std::move(best), best_worst, max_retries);
}

SplitMassResult split_mass_count(const BipartitionSequence& s, const MassProfile& lambda,
                                 const Rational& zeta) {
    if (std::int64_t(lambda.lambda.size()) != s.M)
        throw std::invalid_argument("split mass: length mismatch");
    if (!(lambda.l1() == Rational::from_int(1)))
        throw std::invalid_argument("split mass: mass profile must sum to 1");
    SplitMassResult r;
    for (std::int64_t i = 0; i < s.m; ++i) {
        Rational mass_a;
        Rational mass_b;
        for (std::int64_t t = 0; t < s.M; ++t) {
            if (s.parts[std::size_t(i)].in_a(t)) mass_a = mass_a + lambda.lambda[std::size_t(t)];
            else mass_b = mass_b + lambda.lambda[std::size_t(t)];
        }
        Rational lo = mass_a < mass_b ? mass_a : mass_b;
        if (lo >= zeta) {
            ++r.count;
            r.qualifying.push_back(i);
        }
    }
    return r;
}

namespace {

// integer fast path shared by the grid oracle: profile k/N, side mass
// sa/N >= zeta  <=>  sa * z.den >= z.num * N
std::int64_t qualifying_count_grid(const std::vector<std::vector<std::int64_t>>& a_lists,
                                   const std::vector<std::int64_t>& k, std::int64_t N,
                                   const Rational& zeta) {
    std::int64_t q = 0;
    for (const auto& al : a_lists) {
        std::int64_t sa = 0;
        for (std::int64_t t : al) sa += k[std::size_t(t)];
        std::int64_t sb = N - sa;
        std::int64_t lo = sa < sb ? sa : sb;
        if (i128(lo) * zeta.den() >= i128(zeta.num()) * N) ++q;
    }
    return q;
}

} // namespace

OracleResult biased_mass_oracle(const BipartitionSequence& s, const Rational& zeta,
                                const Rational& grid_step) {
    if (zeta.num() <= 0) throw std::invalid_argument("oracle: zeta must be positive");
    if (grid_step.num() != 1)
        throw std::invalid_argument("oracle: grid step must divide 1");
    std::int64_t N = grid_step.den();

    OracleResult out;
    out.lemma_asserted = s.verified && s.c == Rational(1, 16);

    // per-coordinate cap: k/N <= 1 - 8*zeta
    Rational cap_r = Rational::from_int(1) - Rational(8, 1) * zeta;
    std::int64_t cap;
    if (cap_r.is_negative()) cap = -1;
    else cap = std::int64_t((i128(cap_r.num()) * N) / cap_r.den());

    if (cap < 0) { out.pass = true; return out; } // no admissible profile

    std::vector<std::vector<std::int64_t>> a_lists(std::size_t(s.m));
    for (std::int64_t i = 0; i < s.m; ++i)
        for (std::int64_t t = 0; t < s.M; ++t)
            if (s.parts[std::size_t(i)].in_a(t)) a_lists[std::size_t(i)].push_back(t);

    std::vector<std::int64_t> k(std::size_t(s.M), 0);
    bool failed = false;

    // depth-first over compositions of N into M parts, each <= cap
    auto rec = [&](auto&& self, std::int64_t t, std::int64_t remaining) -> void {
        if (failed) return;
        if (t == s.M - 1) {
            if (remaining > cap) return;
            k[std::size_t(t)] = remaining;
            ++out.grid_points;
            std::int64_t q = qualifying_count_grid(a_lists, k, N, zeta);
            if (out.min_count < 0 || q < out.min_count) out.min_count = q;
            if (6 * q < s.m) {
                failed = true;
                MassProfile mp;
                for (std::int64_t x : k) mp.lambda.push_back(Rational(x, N));
                out.failing_lambda = std::move(mp);
            }
            return;
        }
        std::int64_t hi = std::min(cap, remaining);
        // remaining mass must still be placeable under the cap
        std::int64_t slots = s.M - 1 - t;
        for (std::int64_t x = 0; x <= hi; ++x) {
            if (remaining - x > cap * slots) continue;
            k[std::size_t(t)] = x;
            self(self, t + 1, remaining - x);
            if (failed) return;
        }
    };
    rec(rec, 0, N);
    out.pass = !failed;
    return out;
}

} // namespace regforge
