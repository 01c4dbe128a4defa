#ifndef REGFORGE_SAMPLER_HPP
#define REGFORGE_SAMPLER_HPP

#include <cstdint>
#include <string>

#include "regforge/bitmatrix.hpp"
#include "regforge/graph.hpp"
#include "regforge/rational.hpp"

namespace regforge {

/// Unweighted simple graph drawn from a weighted instance: each unordered
/// pair {u, v}, u < v, appears independently with probability equal to its
/// weight. No self-loops. Deterministic in (instance, seed).
struct SampledGraph {
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    BitMatrix adj; // symmetric, zero diagonal
    std::int64_t edges = 0;

    bool operator==(const SampledGraph& o) const {
        return n == o.n && seed == o.seed && adj == o.adj;
    }
};

/// Exact Bernoulli draws: weight c*delta with delta = dn/dd turns into
/// "uniform draw in [0, dd) < c*dn", so weight-0 pairs never appear and
/// weight-1 pairs always do. One draw per pair in fixed (u, v) order keeps
/// the stream aligned across graphs of equal size.
SampledGraph sample_graph(const LevelWeightedGraph& g, std::uint64_t seed);

/// ceil(20 * zeta^-2 * ln n): the subset size at which sampled densities
/// concentrate within zeta of the weighted ones. Natural log, evaluated in
/// double precision (the ceiling is insensitive to the rounding here).
std::int64_t concentration_threshold(std::int64_t n, const Rational& zeta);

struct DeviationAudit {
    bool pass = false;
    std::int64_t threshold = 0;   // subset size used
    std::int64_t trials = 0;
    Rational max_deviation;       // max over trials of |d_sampled - d_weighted|
    std::int64_t worst_trial = -1;
    Rational zeta;
};

/// Draws `trials` independent pairs (A, B) of uniformly random subsets of
/// exactly threshold vertices each and compares sampled vs weighted density
/// on them; densities exclude the diagonal (the sampled graph has no
/// self-loops) while keeping the |A|*|B| denominator. pass iff every
/// deviation is <= zeta, exactly. Errors: "n too small for zeta" when the
/// threshold exceeds n. Trials run in parallel with per-trial substreams;
/// `deviation_audit_serial` is the reference and produces identical output.
DeviationAudit deviation_audit(const LevelWeightedGraph& g, const SampledGraph& sample,
                               const Rational& zeta, std::int64_t trials, std::uint64_t seed);
DeviationAudit deviation_audit_serial(const LevelWeightedGraph& g, const SampledGraph& sample,
                                      const Rational& zeta, std::int64_t trials,
                                      std::uint64_t seed);

/// Audit with an explicit subset size, bypassing the threshold formula.
DeviationAudit deviation_audit_at(const LevelWeightedGraph& g, const SampledGraph& sample,
                                  const Rational& zeta, std::int64_t subset_size,
                                  std::int64_t trials, std::uint64_t seed, bool parallel);

} // namespace regforge

#endif
