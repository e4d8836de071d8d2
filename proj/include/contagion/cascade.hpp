#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "contagion/graph.hpp"

namespace contagion {

enum class CascadeModel { retig, ret, retmiv, retwe, forest_fire };

std::string to_string(CascadeModel model);
CascadeModel cascade_model_from_string(const std::string& name);

/// Transmission parameters. m counts the total infected set including the
/// initial seed(s); alpha/beta/gamma follow the per-round edge semantics of
/// the four models; p is the forest-fire burning probability.
struct CascadeParams {
    std::size_t m = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    NodeId s = 1;
    double p = 0.0;
    CascadeModel model = CascadeModel::ret;

    /// Throws std::invalid_argument on any violated precondition.
    void validate(NodeId graph_nodes) const;
};

/// The contagious network H plus provenance. H vertices are renumbered
/// densely; to_underlying maps them back to the potential graph's IDs.
/// For retig the order is ascending underlying ID; for the round-based
/// models it is join order. A stalled run carries the partial result.
struct InfectedGraph {
    Graph subgraph;
    std::vector<NodeId> to_underlying;
    std::uint64_t rounds_elapsed = 0;
    CascadeModel model = CascadeModel::ret;
    CascadeParams params;
    std::uint64_t seed = 0;
    std::size_t target_size = 0;
    bool stalled = false;
    /// Edges added by triadic exploration (H IDs, u < v). Only retwe fills
    /// this; such edges may be absent from the potential graph.
    std::vector<std::pair<NodeId, NodeId>> exploration_edges;

    std::size_t size() const { return to_underlying.size(); }
};

/// Strictly increasing infected-count checkpoints, last <= m.
using SnapshotSchedule = std::vector<std::size_t>;
void validate_schedule(const SnapshotSchedule& schedule, std::size_t m);

/// Random-edge-transmission induced graph: grow I one vertex at a time by a
/// uniform draw from the cut E(I, ~I), then return the induced subgraph.
InfectedGraph retig(const Graph& g, std::size_t m, std::uint64_t seed);

/// Random edge transmission (s = 1) / multiple initial vertices (s > 1).
/// Synchronous rounds over start-of-round membership: internal undiscovered
/// edges appear with probability alpha, boundary edges (plus their outside
/// endpoint) with probability beta. Stops at the end of the first round with
/// |V_H| >= m; final-round overshoot is kept.
InfectedGraph ret(const Graph& g, std::size_t m, double alpha, double beta,
                  NodeId s, std::uint64_t seed);

/// ret plus triadic exploration: each round, every open wedge u-w-v of H
/// closes independently with probability gamma (per intermediary w).
InfectedGraph retwe(const Graph& g, std::size_t m, double alpha, double beta,
                    double gamma, std::uint64_t seed);

/// Draws the number of neighbors burned through a node.
using BurnDistribution = std::function<unsigned(std::mt19937_64&)>;

/// Undirected forest fire: each arrival links a uniform ambassador, then
/// burns breadth-first, linking k_w ~ burn(mean (1-p)^-1) of each reached
/// node's neighbors, never linking the same node twice.
Graph forest_fire(NodeId n, double p, std::uint64_t seed);
Graph forest_fire(NodeId n, double p, std::uint64_t seed,
                  const BurnDistribution& burn,
                  const SnapshotSchedule* schedule,
                  std::vector<Graph>* snapshots_out);

/// One continuing run capturing an InfectedGraph the first time |V_H|
/// reaches each checkpoint (for the round models: at the end of the crossing
/// round). A stalled run returns the snapshots reached plus a final partial
/// snapshot flagged stalled.
std::vector<InfectedGraph> run_with_snapshots(const Graph& g,
                                              const CascadeParams& params,
                                              const SnapshotSchedule& schedule,
                                              std::uint64_t seed);

}  // namespace contagion
