#include "doctest.h"

#include <fstream>
#include <random>

#include "contagion/graph.hpp"

using namespace contagion;

namespace {

Graph path3() {
    std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}};
    return Graph::from_edges(3, edges);
}

Graph cycle(NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, edges);
}

Graph clique(NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return Graph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("build_from_edges constructs a path") {
    Graph g = path3();
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(2, 1));
    CHECK(!g.has_edge(0, 2));
}

TEST_CASE("duplicate edges merge") {
    std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 0}};
    Graph g = Graph::from_edges(3, edges);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("construction errors") {
    std::vector<std::pair<NodeId, NodeId>> out_of_range{{0, 2}};
    CHECK_THROWS_AS(Graph::from_edges(2, out_of_range), std::invalid_argument);
    std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), std::invalid_argument);
}

TEST_CASE("induced subgraph of K4 on three vertices is K3") {
    Graph g = clique(4);
    auto sub = induced_subgraph(g, VertexSet::of(4, {0, 1, 2}));
    CHECK(sub.graph.node_count() == 3);
    CHECK(sub.graph.edge_count() == 3);
    CHECK(sub.to_underlying == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("induced subgraph on all vertices copies the graph") {
    Graph g = cycle(7);
    std::vector<NodeId> all;
    for (NodeId v = 0; v < 7; ++v) all.push_back(v);
    auto sub = induced_subgraph(g, VertexSet::of(7, all));
    CHECK(sub.graph.edge_count() == g.edge_count());
    for (NodeId v = 0; v < 7; ++v) CHECK(sub.graph.degree(v) == g.degree(v));
}

TEST_CASE("induced subgraph of C6 on {0,1,3,4} is two disjoint edges") {
    Graph g = cycle(6);
    auto sub = induced_subgraph(g, VertexSet::of(6, {0, 1, 3, 4}));
    CHECK(sub.graph.node_count() == 4);
    CHECK(sub.graph.edge_count() == 2);
    CHECK(sub.graph.has_edge(0, 1));  // remapped 0,1 -> old 0,1
    CHECK(sub.graph.has_edge(2, 3));  // remapped 2,3 -> old 3,4
}

TEST_CASE("induced subgraph rejects mismatched vertex set") {
    Graph g = cycle(6);
    CHECK_THROWS_AS(induced_subgraph(g, VertexSet::of(5, {0, 1})), std::invalid_argument);
}

TEST_CASE("random graphs satisfy invariants") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        NodeId n = 2 + rng() % 40;
        std::vector<std::pair<NodeId, NodeId>> edges;
        std::uniform_int_distribution<NodeId> pick(0, n - 1);
        for (int e = 0; e < 80; ++e) {
            NodeId u = pick(rng), v = pick(rng);
            if (u != v) edges.emplace_back(u, v);
        }
        Graph g = Graph::from_edges(n, edges);
        CHECK_NOTHROW(g.validate());
        std::uint64_t total = 0;
        for (NodeId v = 0; v < n; ++v) total += g.degree(v);
        CHECK(total == 2 * g.edge_count());
    }
}

TEST_CASE("edge list round trip preserves the graph") {
    Graph g = cycle(9);
    auto text = edge_list_string(g);
    CHECK(text.rfind("# nodes=9", 0) == 0);
    auto tmp = std::filesystem::temp_directory_path() / "contagion_graph_rt.edges";
    write_edge_list(g, tmp);
    Graph back = read_edge_list(tmp);
    CHECK(back.node_count() == 9);
    CHECK(edge_list_string(back) == text);
    std::filesystem::remove(tmp);
}

TEST_CASE("edge list reader honors nodes declaration and comments") {
    auto tmp = std::filesystem::temp_directory_path() / "contagion_graph_decl.edges";
    {
        std::ofstream out(tmp);
        out << "# a comment\n# nodes=5\n0 1\n\n3 1\n";
    }
    Graph g = read_edge_list(tmp);
    CHECK(g.node_count() == 5);  // includes isolated vertices 2 and 4
    CHECK(g.edge_count() == 2);
    std::filesystem::remove(tmp);
}
