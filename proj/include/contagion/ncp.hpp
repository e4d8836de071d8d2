#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contagion/graph.hpp"

namespace contagion {

/// Tuning for the NCP upper-bound search. Seeds cycle through the volume
/// targets; each (seed, teleport) pair runs one push + sweep whose support
/// volume is bounded by roughly twice the target. An empty target list gets
/// a geometric ladder up to half the graph volume.
struct NcpConfig {
    double bin_ratio = 1.1;
    int seed_count = 32;
    std::vector<double> teleports = {0.2, 0.05, 0.01};
    std::vector<double> volume_targets;
    std::uint64_t seed = 0;
};

struct NcpBin {
    std::uint32_t size = 0;  // representative set size for the bin
    double conductance = 0.0;
    std::vector<NodeId> witness;
    std::string method;  // "whisker", "sweep", or "component"
};

/// Per-size-bin minimum conductance found, with a concrete witness set per
/// bin. Values are upper bounds on the true NCP.
struct NcpCurve {
    std::vector<NcpBin> bins;  // ascending by size
    bool lcc_only = false;     // spectral search restricted to the largest component
    NodeId node_count = 0;
    double bin_ratio = 1.1;

    /// Best value among bins whose representative size falls in [lo, hi];
    /// returns +inf when none do.
    double best_in_size_range(double lo, double hi) const;
    /// The bin whose size range contains `size` (nearest populated bin at or
    /// below, falling back to the closest above). Returns nullptr if empty.
    const NcpBin* bin_for_size(std::uint32_t size) const;
};

/// Upper-bound network community profile from two candidate families:
/// bridge-hung whiskers (plus unions of whiskers off the core) and
/// degree-normalized personalized-ranking sweep cuts from random seeds.
NcpCurve ncp_heuristic(const Graph& g, const NcpConfig& config);

}  // namespace contagion
