#include "regforge/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "regforge/rng.hpp"
#include "regforge/vertex_set.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace regforge {

SampledGraph sample_graph(const LevelWeightedGraph& g, std::uint64_t seed) {
    SampledGraph out;
    out.n = g.n();
    out.seed = seed;
    out.adj = BitMatrix(g.n());
    SplitMix64 rng(derive_seed(seed, "edge-sample", 0));
    std::uint64_t dd = std::uint64_t(g.delta().den());
    std::int64_t dn = g.delta().num();
    for (std::int64_t u = 0; u < g.n(); ++u)
        for (std::int64_t v = u + 1; v < g.n(); ++v) {
            std::uint64_t draw = rng.bounded(dd);
            // P(edge) = count*dn/dd, exact; count*dn <= dd since s*delta <= 1
            if (draw < std::uint64_t(g.count(u, v)) * std::uint64_t(dn)) {
                out.adj.set(u, v);
                out.adj.set(v, u);
                ++out.edges;
            }
        }
    return out;
}

std::int64_t concentration_threshold(std::int64_t n, const Rational& zeta) {
    if (n < 2) throw std::invalid_argument("threshold: n must be at least 2");
    if (zeta.num() <= 0) throw std::invalid_argument("threshold: zeta must be positive");
    double z = zeta.to_double();
    return std::int64_t(std::ceil(20.0 / (z * z) * std::log(double(n))));
}

namespace {

struct TrialOutcome {
    Rational deviation;
    bool valid = false;
};

TrialOutcome run_trial(const LevelWeightedGraph& g, const SampledGraph& sample,
                       std::int64_t subset_size, std::uint64_t seed, std::int64_t trial) {
    SplitMix64 rng(derive_seed(seed, "audit-trial", std::uint64_t(trial)));
    auto a = VertexSet::of(sample_sorted_subset(rng, g.n(), subset_size), g.n());
    auto b = VertexSet::of(sample_sorted_subset(rng, g.n(), subset_size), g.n());

    // both densities drop the diagonal (the sample has no self-loops) but
    // keep the full |A|*|B| denominator, so they are directly comparable
    std::int64_t w_act = activation_sum(g, g.full_range(), a, b);
    std::int64_t diag = 0;
    auto inter = a.intersect(b);
    for (std::int32_t v : inter) diag += g.count(v, v);

    auto bmask = b.mask(sample.n);
    std::int64_t edges = 0;
    for (std::int32_t u : a) edges += sample.adj.row_masked_popcount(u, bmask.data());

    DensityValue dw{w_act - diag, a.size() * b.size(), g.delta()};
    DensityValue ds{edges, a.size() * b.size(), Rational::from_int(1)};
    TrialOutcome out;
    out.deviation = abs_diff(dw, ds);
    out.valid = true;
    return out;
}

} // namespace

DeviationAudit deviation_audit_at(const LevelWeightedGraph& g, const SampledGraph& sample,
                                  const Rational& zeta, std::int64_t subset_size,
                                  std::int64_t trials, std::uint64_t seed, bool parallel) {
    if (sample.n != g.n()) throw std::invalid_argument("audit: sample size mismatch");
    if (trials < 1) throw std::invalid_argument("audit: trials must be positive");
    if (subset_size > g.n())
        throw std::invalid_argument("n too small for zeta: threshold " +
                                    std::to_string(subset_size) + " exceeds n=" +
                                    std::to_string(g.n()));
    if (subset_size < 1) throw std::invalid_argument("audit: subset size must be positive");

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < trials; ++k)
            outcomes[std::size_t(k)] = run_trial(g, sample, subset_size, seed, k);
    } else {
        for (std::int64_t k = 0; k < trials; ++k)
            outcomes[std::size_t(k)] = run_trial(g, sample, subset_size, seed, k);
    }

    DeviationAudit audit;
    audit.threshold = subset_size;
    audit.trials = trials;
    audit.zeta = zeta;
    for (std::int64_t k = 0; k < trials; ++k) {
        const auto& o = outcomes[std::size_t(k)];
        if (audit.worst_trial < 0 || o.deviation > audit.max_deviation) {
            audit.max_deviation = o.deviation;
            audit.worst_trial = k;
        }
    }
    audit.pass = !(audit.max_deviation > zeta);
    return audit;
}

DeviationAudit deviation_audit(const LevelWeightedGraph& g, const SampledGraph& sample,
                               const Rational& zeta, std::int64_t trials, std::uint64_t seed) {
    return deviation_audit_at(g, sample, zeta, concentration_threshold(g.n(), zeta), trials,
                              seed, true);
}

DeviationAudit deviation_audit_serial(const LevelWeightedGraph& g, const SampledGraph& sample,
                                      const Rational& zeta, std::int64_t trials,
                                      std::uint64_t seed) {
    return deviation_audit_at(g, sample, zeta, concentration_threshold(g.n(), zeta), trials,
                              seed, false);
}

} // namespace regforge
