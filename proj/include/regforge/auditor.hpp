#ifndef REGFORGE_AUDITOR_HPP
#define REGFORGE_AUDITOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regforge/equipartition.hpp"
#include "regforge/graph.hpp"
#include "regforge/tower.hpp"

namespace regforge {

struct RefinementReport {
    bool pass = false;          // beta_achieved <= beta
    Rational beta;              // requested slack
    Rational beta_achieved;     // max over parts of the escaping fraction
    std::int64_t worst_part = -1;
    std::int64_t worst_escape = 0;   // vertices of the worst part outside its best cell
};

/// Does P beta-refine Q? Each part of P must keep at least a (1 - beta)
/// fraction inside a single part of Q. beta_achieved is the exact worst
/// escaping fraction; pass iff beta_achieved <= beta.
RefinementReport refinement_check(const Equipartition& p, const Equipartition& q,
                                  const Rational& beta);

enum class PairStatus { regular, irregular, unknown };

struct Witness {
    VertexSet a_sub, b_sub;
    DensityValue d_sub;   // density on (a_sub, b_sub)
    DensityValue d_pair;  // density on the full pair
    Rational deviation;   // |d_sub - d_pair|, exact
};

struct PairVerdict {
    PairStatus status = PairStatus::unknown;
    std::optional<Witness> witness; // always present when irregular; for the
                                    // exhaustive check also carries the
                                    // extreme deviation of a regular pair
    std::string method;
};

/// Decides eps-regularity of (A, B) exactly by enumerating every subset
/// pair (A', B') with |A'| >= eps|A|, |B'| >= eps|B| (empty subsets are
/// skipped; densities need nonempty sets). Sizes are capped:
/// "subset enumeration cap exceeded" beyond size_cap per side.
PairVerdict exhaustive_pair_check(const LevelWeightedGraph& g, const VertexSet& a,
                                  const VertexSet& b, const Rational& eps,
                                  std::int64_t size_cap = 12);

/// Exact gap measurement behind the canonical witness: at level r, for
/// parent cells (i, j) of level r-1, splits Z0 by the (i, j) sides and
/// intersects Z1 with A_{j,i} / B_{j,i}. On full cells the two measured
/// densities differ by exactly delta.
struct CanonicalGap {
    VertexSet z_a, z_b;       // Z0 split by the level-r sides of parent i
    VertexSet z_prime;        // Z1 intersected with one side of parent j
    DensityValue d_a, d_b;    // densities from z_prime into each half
    Rational gap;             // |d_a - d_b|
    bool a_side_prime = true; // which side of parent j formed z_prime
};

/// Searches levels 1..s for a canonical irregularity witness for the pair
/// (Z0, Z1). Fires only when the measured gap exceeds 2*eps and all three
/// witness sets clear the eps size thresholds, which forces one side to
/// deviate from d(Z0, Z1) by more than eps. Sound by construction: it
/// never returns `regular`, only `irregular` with a checked witness or
/// `unknown`.
PairVerdict canonical_witness_search(const LevelWeightedGraph& g, const PartitionTower& t,
                                     const VertexSet& z0, const VertexSet& z1,
                                     const Rational& eps);

/// The gap measurement itself, exposed for identity checks. Returns the
/// candidate built from the given side of parent j (a_side_prime), without
/// any size filtering. Empty intersections yield std::nullopt.
std::optional<CanonicalGap> canonical_gap(const LevelWeightedGraph& g, const PartitionTower& t,
                                          int r, std::int32_t i, std::int32_t j,
                                          const VertexSet& z0, const VertexSet& z1,
                                          bool a_side_prime);

enum class AuditStrategy { exhaustive, canonical, both };

enum class NicenessVerdict { nice, not_nice, inconclusive };

struct NicenessReport {
    NicenessVerdict verdict = NicenessVerdict::inconclusive;
    std::int64_t k = 0;
    Rational eps;
    std::vector<std::int64_t> irregular_with; // per part, count of partners
                                              // in an irregular pair
    std::int64_t irregular_pairs = 0;         // unordered pairs found irregular
    std::int64_t unknown_pairs = 0;           // canonical-only: pairs left open
    std::vector<std::pair<std::int64_t, std::int64_t>> witness_pairs;
    std::vector<Witness> witnesses;           // parallel to witness_pairs
};

/// eps-niceness audit: every part must sit in an irregular pair with at
/// most eps*k parts (a part pairs with itself too; the same-part pair
/// counts once). The exhaustive strategy is exact and can return any
/// verdict; the canonical strategy can only certify not_nice or report
/// inconclusive. `both` runs exhaustively and cross-checks every canonical
/// witness against the exhaustive verdict. Requires a balanced
/// equipartition and, for canonical audits, the instance tower.
NicenessReport niceness_audit(const LevelWeightedGraph& g, const Equipartition& z,
                              const Rational& eps, AuditStrategy strategy,
                              const PartitionTower* t = nullptr,
                              std::int64_t size_cap = 12);

struct BoundsReport {
    Rational epsilon;
    Rational delta;
    int s = 0;
    std::int64_t kappa = 512;
    std::vector<std::string> sizes_decimal; // m_0..m_s in decimal
    std::string m_s_decimal;
    std::size_t m_s_bits = 0;               // bit length of m_s
    std::string note;
};

/// Tower growth implied by an audit precision: delta = 30*sqrt(epsilon),
/// s = floor(1/delta), sizes by the doubling recurrence at the given kappa.
/// Errors: "epsilon required" upstream, "epsilon too large" when s = 0.
BoundsReport bounds_report(const Rational& epsilon, std::int64_t kappa = 512);

struct DemoLevelOutcome {
    int level = 0;                 // partition X_level audited
    std::int64_t parts = 0;
    NicenessVerdict verdict = NicenessVerdict::inconclusive;
    std::int64_t irregular_pairs = 0;
    Rational threshold;            // eps * k, the allowance per part
};

struct DemoReport {
    ConstructionParams params;
    Rational eps_audit;
    bool identities_pass = false;
    std::int64_t half_density_checks = 0;
    std::int64_t half_density_failures = 0;
    std::int64_t tail_density_checks = 0;
    std::int64_t tail_density_failures = 0;
    bool refinement_chain_pass = false;   // every level 0-refines its parent
    std::vector<DemoLevelOutcome> level_audits;
    bool all_coarse_levels_not_nice = false;
    std::int64_t m_s = 0;
    std::int64_t min_parts_bound = 0;     // ceil(m_s / 2)
    std::string conclusion;
};

/// End-to-end demonstration: builds the instance, verifies the exact
/// density identities, then shows by canonical witnesses that every coarse
/// level X_0..X_{s-1} fails the eps-niceness audit; any partition that
/// (1/2)-refines X_s must have at least m_s/2 parts.
DemoReport lower_bound_demo(const ConstructionParams& p, const Rational& eps_audit,
                            std::int64_t tail_trials = 50, std::int64_t max_retries = 100000);

} // namespace regforge

#endif
