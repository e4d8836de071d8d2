#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "contagion/generators.hpp"
#include "contagion/graph.hpp"
#include "contagion/metrics.hpp"

namespace contagion {

/// Yule species/genus process: each step a uniform existing species spawns a
/// new one, founding a new genus with probability alpha_yule. Distinct from
/// the transmission alpha.
struct YuleParams {
    double alpha_yule = 0.5;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
};

/// Histogram over group sizes: counts[k] = number of genera (or cliques)
/// holding exactly k members. Zero-size groups are never recorded.
struct OccupancyHistogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t runs = 1;

    std::uint64_t total_members() const;
    std::uint64_t group_count() const;
    void merge(const OccupancyHistogram& other);
};

/// Simulates the process exactly as stated; step 1 founds the first genus.
/// Accepts alpha_yule in (0, 1]; alpha_yule = 1 degenerates to singletons.
OccupancyHistogram yule_process(const YuleParams& params);

/// Infected-per-clique counts under the given partition (cliques with zero
/// infected excluded).
OccupancyHistogram clique_occupancy(const CliquePartition& partition,
                                    const VertexSet& infected);

/// Histogram of infected cliquish degrees: a clique with c infected vertices
/// contributes c vertices of cliquish degree c-1. Degree-0 entries (singleton
/// cliques) are kept in the histogram but drop out of log binning.
DegreeHistogram cliquish_degree_histogram(const OccupancyHistogram& occupancy);

struct ExhaustiveResult {
    double conductance = 0.0;
    RationalCut exact;
    std::vector<NodeId> witness;
};

/// Exact minimum conductance over all size-`size` subsets. Guarded to
/// |V| <= 20.
ExhaustiveResult exhaustive_min_conductance(const Graph& g, NodeId size);

/// Total variation distance between the normalized size distributions.
double total_variation(const OccupancyHistogram& a, const OccupancyHistogram& b);

}  // namespace contagion
