#ifndef REGFORGE_IO_HPP
#define REGFORGE_IO_HPP

#include <string>

#include "regforge/bipartitions.hpp"
#include "regforge/equipartition.hpp"
#include "regforge/graph.hpp"
#include "regforge/sampler.hpp"
#include "regforge/tower.hpp"

namespace regforge {

/// Text formats. All writers emit exactly what the corresponding reader
/// accepts; loaders validate and throw std::runtime_error with a message
/// starting "malformed <kind> file" on any structural problem.
///
///   graph matrix:  REGFORGE-GRAPH v1 n=<n> s=<s> delta=<num>/<den>
///                  + n lines of n space-separated counts
///   descriptor:    REGFORGE-GRAPHDESC v1 mode=<coupled|custom>
///                  epsilon=<num/den|none> delta=<num/den> s=<s>
///                  kappa=<k> n=<n> seed=<u64>   (regenerated on load)
///   sequence:      REGFORGE-BISEQ v1 m=<m> M=<M> c=<num>/<den>
///                  + m bitstrings, '1' = element in A
///   tower:         REGFORGE-TOWER v1 + params line + per level
///                  "level <r> M=<M>" + bitstrings
///   sample:        REGFORGE-SAMPLE v1 n=<n> seed=<seed> + "u v" edges
///   partition:     REGFORGE-PART v1 n=<n> k=<k> + n part indices

void write_graph_matrix(const std::string& path, const LevelWeightedGraph& g);
void write_graph_descriptor(const std::string& path, const ConstructionParams& p);
/// Dispatches on the header: a matrix file loads as aggregate counts, a
/// descriptor rebuilds the tower and returns the leveled instance.
LevelWeightedGraph read_graph(const std::string& path);

void write_biseq(const std::string& path, const BipartitionSequence& s);
/// Re-verifies balance at the stored c so the `verified` flag is honest.
BipartitionSequence read_biseq(const std::string& path);

void write_tower(const std::string& path, const PartitionTower& t);
PartitionTower read_tower(const std::string& path);

void write_sample(const std::string& path, const SampledGraph& s);
SampledGraph read_sample(const std::string& path);

void write_partition(const std::string& path, const Equipartition& p);
Equipartition read_partition(const std::string& path);

} // namespace regforge

#endif
