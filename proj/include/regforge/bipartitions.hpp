#ifndef REGFORGE_BIPARTITIONS_HPP
#define REGFORGE_BIPARTITIONS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regforge/rational.hpp"

namespace regforge {

/// Halving (A, B) of the ground set [0, M), M even, |A| = |B| = M/2.
class Bipartition {
public:
    /// side bits: side[t] == 1 means element t lies in A.
    static Bipartition from_sides(std::vector<std::uint8_t> side) {
        Bipartition b(std::move(side));
        std::int64_t a = 0;
        for (std::uint8_t x : b.side_) a += x ? 1 : 0;
        if (b.side_.empty() || b.side_.size() % 2 != 0 || a * 2 != std::int64_t(b.side_.size()))
            throw std::invalid_argument("bipartition: sides must halve the ground set");
        return b;
    }

    /// No halving validation. For file loaders that re-verify, and for
    /// corruption experiments in tests.
    static Bipartition from_sides_unchecked(std::vector<std::uint8_t> side) {
        return Bipartition(std::move(side));
    }

    std::int64_t ground_size() const { return std::int64_t(side_.size()); }
    bool in_a(std::int64_t t) const { return side_[std::size_t(t)] != 0; }
    const std::vector<std::uint8_t>& sides() const { return side_; }

    bool operator==(const Bipartition& o) const { return side_ == o.side_; }

private:
    explicit Bipartition(std::vector<std::uint8_t> side) : side_(std::move(side)) {}
    std::vector<std::uint8_t> side_;
};

/// Sequence S = (A_i, B_i)_{i=1..m} of bipartitions of a common ground set
/// [0, M). `verified` is set only after is_balanced has passed at the
/// claimed parameter c.
struct BipartitionSequence {
    std::int64_t m = 0;
    std::int64_t M = 0;
    Rational c;
    std::vector<Bipartition> parts;
    bool verified = false;

    static BipartitionSequence of(std::vector<Bipartition> parts, Rational c) {
        if (parts.empty()) throw std::invalid_argument("bipartition sequence: empty");
        BipartitionSequence s;
        s.M = parts[0].ground_size();
        for (const auto& p : parts)
            if (p.ground_size() != s.M)
                throw std::invalid_argument("bipartition sequence: ground set mismatch");
        s.m = std::int64_t(parts.size());
        s.c = c;
        s.parts = std::move(parts);
        return s;
    }
};

struct BalanceReport {
    bool balanced = false;
    // worst pair of ground elements: the one maximizing the number of
    // bipartitions placing both on the same side
    std::int64_t worst_t = -1;
    std::int64_t worst_t_prime = -1;
    std::int64_t worst_count = 0;
    std::int64_t pairs_checked = 0;
};

/// c-balanced check: every pair t != t' of ground elements lands on the same
/// side in at most (1/2 + c)*m of the bipartitions. Exact comparison.
/// The XOR-popcount kernel; `is_balanced_reference` is the per-entry loop.
BalanceReport is_balanced(const BipartitionSequence& s, const Rational& c);
BalanceReport is_balanced_reference(const BipartitionSequence& s, const Rational& c);

/// Same-side count for one pair, by definition. Test oracle.
std::int64_t co_occurrence(const BipartitionSequence& s, std::int64_t t, std::int64_t t_prime);

struct BalanceGenerationError : std::runtime_error {
    BalanceGenerationError(std::string msg, BipartitionSequence best, std::int64_t worst,
                           std::int64_t attempts_used)
        : std::runtime_error(std::move(msg)), best_attempt(std::move(best)),
          best_worst_count(worst), attempts(attempts_used) {}
    BipartitionSequence best_attempt; // lowest worst-pair count seen, unverified
    std::int64_t best_worst_count;
    std::int64_t attempts;
};

/// Draws independent uniform halvings until a c-balanced sequence appears.
/// Deterministic in (m, M, c, seed). M == 2 short-circuits to m copies of
/// ({0}, {1}), which is 0-balanced. Practical envelope at c = 1/16: M <= 16
/// with m >= 16*M; larger M needs m to grow quadratically and times out.
/// Throws BalanceGenerationError after max_retries failed attempts, and
/// std::invalid_argument for odd or non-positive M.
BipartitionSequence generate_balanced(std::int64_t m, std::int64_t M, const Rational& c,
                                      std::uint64_t seed, std::int64_t max_retries = 100000);

/// Probability mass on the ground set. Used as input to the mass-splitting
/// operations, which require the entries to sum to 1.
struct MassProfile {
    std::vector<Rational> lambda;

    Rational l1() const {
        Rational t;
        for (const auto& x : lambda) t = t + x;
        return t;
    }
    Rational linf() const {
        Rational t;
        for (const auto& x : lambda) if (x.abs() > t) t = x.abs();
        return t;
    }
};

struct SplitMassResult {
    std::int64_t count = 0;                 // bipartitions with min side-mass >= zeta
    std::vector<std::int64_t> qualifying;   // their indices, ascending
};

/// Counts bipartitions i whose two sides both carry lambda-mass >= zeta.
/// Errors: "length mismatch" when |lambda| != M; "mass profile must sum
/// to 1" otherwise violated. All comparisons exact.
SplitMassResult split_mass_count(const BipartitionSequence& s, const MassProfile& lambda,
                                 const Rational& zeta);

struct OracleResult {
    bool pass = false;
    bool lemma_asserted = false;            // sequence verified 1/16-balanced
    std::int64_t grid_points = 0;           // profiles evaluated
    std::int64_t min_count = -1;            // smallest qualifying count seen
    std::optional<MassProfile> failing_lambda; // first grid profile with count < m/6
};

/// Exhaustive grid check of the mass-splitting bound: every grid profile
/// with l1 = 1 and linf <= 1 - 8*zeta must make at least m/6 bipartitions
/// split its mass at level zeta. grid_step must be the reciprocal of an
/// integer ("grid step must divide 1"). An empty grid passes vacuously.
OracleResult biased_mass_oracle(const BipartitionSequence& s, const Rational& zeta,
                                const Rational& grid_step);

} // namespace regforge

#endif
