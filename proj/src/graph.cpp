#include "contagion/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace contagion {

Graph Graph::from_edges(NodeId node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw std::invalid_argument(
                "edge endpoint " + std::to_string(std::max(u, v)) +
                " out of range for node count " + std::to_string(node_count));
        }
        if (u == v) {
            throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        }
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return from_adjacency(std::move(adj));
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
    const auto n = static_cast<NodeId>(adjacency.size());
    Graph g;
    g.node_count_ = n;
    g.offsets_.assign(n + 1, 0);

    std::uint64_t total = 0;
    for (NodeId u = 0; u < n; ++u) {
        auto& nbrs = adjacency[u];
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        for (NodeId v : nbrs) {
            if (v >= n) {
                throw std::invalid_argument("neighbor " + std::to_string(v) +
                                            " out of range");
            }
            if (v == u) {
                throw std::invalid_argument("self-loop at vertex " +
                                            std::to_string(u));
            }
        }
        total += nbrs.size();
        g.offsets_[u + 1] = total;
    }
    g.adjacency_.resize(total);
    for (NodeId u = 0; u < n; ++u) {
        std::copy(adjacency[u].begin(), adjacency[u].end(),
                  g.adjacency_.begin() + g.offsets_[u]);
        adjacency[u].clear();
        adjacency[u].shrink_to_fit();
    }
    if (total % 2 != 0) {
        throw std::invalid_argument("adjacency is not symmetric (odd endpoint count)");
    }
    g.edge_count_ = total / 2;
    g.validate();
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Graph::validate() const {
    std::uint64_t total = 0;
    for (NodeId u = 0; u < node_count_; ++u) {
        auto nbrs = neighbors(u);
        total += nbrs.size();
        NodeId prev = kNoNode;
        for (NodeId v : nbrs) {
            if (v == u) throw std::logic_error("self-loop at " + std::to_string(u));
            if (v >= node_count_) throw std::logic_error("neighbor out of range");
            if (prev != kNoNode && v <= prev) {
                throw std::logic_error("neighbor list not sorted/unique at " +
                                       std::to_string(u));
            }
            prev = v;
            if (v > u && !has_edge(v, u)) {
                throw std::logic_error("asymmetric edge (" + std::to_string(u) +
                                       "," + std::to_string(v) + ")");
            }
        }
    }
    if (total != 2 * edge_count_) {
        throw std::logic_error("edge count inconsistent with total degree");
    }
}

VertexSet VertexSet::of(NodeId universe, std::vector<NodeId> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.back() >= universe) {
        throw std::invalid_argument("vertex " + std::to_string(members.back()) +
                                    " outside universe of size " +
                                    std::to_string(universe));
    }
    VertexSet s;
    s.universe_ = universe;
    s.members_ = std::move(members);
    return s;
}

bool VertexSet::contains(NodeId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
    if (s.universe() != g.node_count()) {
        throw std::invalid_argument("vertex set universe does not match graph");
    }
    const auto members = s.members();
    std::vector<NodeId> new_id(g.node_count(), kNoNode);
    for (std::size_t i = 0; i < members.size(); ++i) {
        new_id[members[i]] = static_cast<NodeId>(i);
    }
    std::vector<std::vector<NodeId>> adj(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (NodeId v : g.neighbors(members[i])) {
            if (new_id[v] != kNoNode) adj[i].push_back(new_id[v]);
        }
    }
    InducedSubgraph out;
    out.graph = Graph::from_adjacency(std::move(adj));
    out.to_underlying.assign(members.begin(), members.end());
    return out;
}

namespace {

void parse_edge_line(const std::string& line, std::size_t lineno,
                     std::vector<std::pair<NodeId, NodeId>>& edges,
                     long long& declared_nodes) {
    if (line.empty()) return;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) return;
    if (line[start] == '#') {
        auto pos = line.find("nodes=", start);
        if (pos != std::string::npos) {
            declared_nodes = std::stoll(line.substr(pos + 6));
        }
        return;
    }
    std::istringstream in(line);
    long long u = -1, v = -1;
    if (!(in >> u >> v) || u < 0 || v < 0) {
        throw std::runtime_error("malformed edge list line " +
                                 std::to_string(lineno) + ": " + line);
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
}

}  // namespace

Graph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::pair<NodeId, NodeId>> edges;
    long long declared_nodes = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        parse_edge_line(line, lineno, edges, declared_nodes);
    }
    long long max_id = -1;
    for (const auto& [u, v] : edges) {
        max_id = std::max(max_id, static_cast<long long>(std::max(u, v)));
    }
    long long n = std::max(declared_nodes, max_id + 1);
    return Graph::from_edges(static_cast<NodeId>(std::max(n, 0LL)), edges);
}

std::string edge_list_string(const Graph& g) {
    std::string out = "# nodes=" + std::to_string(g.node_count()) + "\n";
    char buf[32];
    g.for_each_edge([&](NodeId u, NodeId v) {
        int len = std::snprintf(buf, sizeof(buf), "%u %u\n", u, v);
        out.append(buf, static_cast<std::size_t>(len));
    });
    return out;
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << edge_list_string(g);
}

}  // namespace contagion
