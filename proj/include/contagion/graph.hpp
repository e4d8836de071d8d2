#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace contagion {

using NodeId = std::uint32_t;
using EdgeCount = std::uint64_t;

constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Immutable undirected simple graph in CSR form. Neighbor lists are sorted,
/// so iteration order is deterministic for a fixed construction order.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list. Duplicate pairs are merged; self-loops and
    /// out-of-range endpoints throw std::invalid_argument.
    static Graph from_edges(NodeId node_count,
                            std::span<const std::pair<NodeId, NodeId>> edges);

    /// Builds from per-node neighbor lists (takes ownership). Lists are
    /// sorted and de-duplicated; symmetry and absence of self-loops are
    /// verified.
    static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

    NodeId node_count() const { return node_count_; }
    EdgeCount edge_count() const { return edge_count_; }

    NodeId degree(NodeId v) const {
        return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]);
    }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v],
                adjacency_.data() + offsets_[v + 1]};
    }

    bool has_edge(NodeId u, NodeId v) const;

    /// Total degree (= 2 * edge_count for a consistent graph).
    EdgeCount total_degree() const { return 2 * edge_count_; }

    /// Calls f(u, v) once per edge with u < v.
    template <typename F>
    void for_each_edge(F&& f) const {
        for (NodeId u = 0; u < node_count_; ++u) {
            for (NodeId v : neighbors(u)) {
                if (u < v) f(u, v);
            }
        }
    }

    /// Full invariant check: sorted unique neighbor lists, no self-loops,
    /// symmetry, and edge_count == sum(degree)/2. Throws std::logic_error.
    void validate() const;

private:
    NodeId node_count_ = 0;
    EdgeCount edge_count_ = 0;
    std::vector<std::uint64_t> offsets_ = {0};
    std::vector<NodeId> adjacency_;
};

/// A subset of the vertices of some graph, stored sorted and duplicate-free.
class VertexSet {
public:
    VertexSet() = default;

    /// Validates members < universe and normalizes to sorted unique order.
    static VertexSet of(NodeId universe, std::vector<NodeId> members);

    NodeId universe() const { return universe_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::span<const NodeId> members() const { return members_; }
    bool contains(NodeId v) const;

private:
    NodeId universe_ = 0;
    std::vector<NodeId> members_;
};

struct InducedSubgraph {
    Graph graph;
    /// Maps new (dense) IDs back to the IDs in the source graph, ascending.
    std::vector<NodeId> to_underlying;
};

/// Subgraph induced on s, renumbered to 0..|s|-1 with a remap table.
InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s);

/// Edge-list text format: `u v` per line, `#` comments, with an optional
/// `# nodes=N` comment declaring the node count (needed for isolated
/// vertices).
Graph read_edge_list(const std::filesystem::path& path);
void write_edge_list(const Graph& g, const std::filesystem::path& path);
std::string edge_list_string(const Graph& g);

}  // namespace contagion
