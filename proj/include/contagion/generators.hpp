#pragma once

#include <cstdint>
#include <string>

#include "contagion/graph.hpp"

namespace contagion {

/// Watts-Strogatz ring lattice with independent per-edge rewiring. Edges are
/// visited in canonical (u, offset) order; a rewired edge keeps endpoint u
/// and moves v to a uniform non-neighbor. Edge count is exactly n*d/2 for
/// every r.
Graph watts_strogatz(NodeId n, NodeId d, double r, std::uint64_t seed);

/// n/d disjoint cliques of size d, then the same per-edge rewiring as
/// watts_strogatz. Edge count is n*(d-1)/2.
Graph planted_community(NodeId n, NodeId d, double r, std::uint64_t seed);

/// Union of n/k planted cliques (consecutive ID blocks of size k) and an
/// (r*k)-regular random graph on all n nodes; overlapping edges merge.
Graph planted_clique_model(NodeId n, NodeId k, double r, std::uint64_t seed);

/// Random d-regular graph by stub pairing. Conflicting stubs are re-paired;
/// a full restart happens only when the remaining stubs admit no valid pair.
Graph random_regular(NodeId n, NodeId d, std::uint64_t seed);

enum class BaselineKind { erdos_renyi, preferential_attachment, complete };

/// Baseline models the cascade results are contrasted against.
/// erdos_renyi: G(n, p) with p = d/(n-1); preferential_attachment: each new
/// node attaches d/2 edges proportionally to degree, seeded from a
/// (d/2+1)-clique; complete: K_n (d ignored).
Graph baseline_graph(BaselineKind kind, NodeId n, NodeId d, std::uint64_t seed);

BaselineKind baseline_kind_from_string(const std::string& name);

/// Clique layout used by planted_community / planted_clique_model: clique i
/// holds vertices [i*k, (i+1)*k).
struct CliquePartition {
    NodeId n = 0;
    NodeId k = 1;
    NodeId clique_of(NodeId v) const { return v / k; }
    NodeId clique_count() const { return k == 0 ? 0 : n / k; }
};

}  // namespace contagion
