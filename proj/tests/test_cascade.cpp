#include "doctest.h"

#include <algorithm>
#include <set>

#include "contagion/cascade.hpp"
#include "contagion/generators.hpp"

using namespace contagion;

namespace {

Graph cycle(NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, edges);
}

Graph path(NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

Graph two_triangles() {
    std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}, {0, 2},
                                                 {3, 4}, {4, 5}, {3, 5}};
    return Graph::from_edges(6, edges);
}

bool maps_into(const InfectedGraph& h, const Graph& g) {
    std::set<std::pair<NodeId, NodeId>> exploration(h.exploration_edges.begin(),
                                                    h.exploration_edges.end());
    bool ok = true;
    h.subgraph.for_each_edge([&](NodeId u, NodeId v) {
        if (exploration.count({std::min(u, v), std::max(u, v)})) return;
        if (!g.has_edge(h.to_underlying[u], h.to_underlying[v])) ok = false;
    });
    return ok;
}

}  // namespace

TEST_CASE("retig full infection reproduces the graph") {
    Graph g = watts_strogatz(64, 4, 0.2, 11);
    auto h = retig(g, 64, 5);
    CHECK(!h.stalled);
    CHECK(h.size() == 64);
    CHECK(h.subgraph.edge_count() == g.edge_count());
    for (NodeId v = 0; v < 64; ++v) {
        CHECK(h.subgraph.degree(v) == g.degree(h.to_underlying[v]));
    }
}

TEST_CASE("retig on a cycle grows a contiguous arc") {
    Graph g = cycle(10);
    auto h = retig(g, 5, 17);
    CHECK(h.size() == 5);
    CHECK(h.subgraph.edge_count() == 4);  // a 4-edge path
    // Degrees of a path: two ends of degree 1, three middles of degree 2.
    std::vector<int> deg_counts(3, 0);
    for (NodeId v = 0; v < 5; ++v) ++deg_counts[h.subgraph.degree(v)];
    CHECK(deg_counts[1] == 2);
    CHECK(deg_counts[2] == 3);
    // Contiguity on the ring: the complement of the arc is also contiguous.
    std::set<NodeId> members(h.to_underlying.begin(), h.to_underlying.end());
    int boundary = 0;
    for (NodeId v = 0; v < 10; ++v) {
        if (members.count(v) != members.count((v + 1) % 10)) ++boundary;
    }
    CHECK(boundary == 2);
}

TEST_CASE("retig stalls when its component is exhausted") {
    Graph g = two_triangles();
    auto h = retig(g, 5, 21);
    CHECK(h.stalled);
    CHECK(h.size() == 3);
    CHECK(h.target_size == 5);
}

TEST_CASE("retig edges always map into the potential graph") {
    Graph g = planted_community(60, 6, 0.3, 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto h = retig(g, 30, seed);
        CHECK(maps_into(h, g));
        NodeId max_h = 0, max_g = 0;
        for (NodeId v = 0; v < h.subgraph.node_count(); ++v)
            max_h = std::max(max_h, h.subgraph.degree(v));
        for (NodeId v = 0; v < g.node_count(); ++v) max_g = std::max(max_g, g.degree(v));
        CHECK(max_h <= max_g);
        // Single-seed growth along cut edges keeps the infected set connected.
        std::vector<std::uint8_t> seen(h.size(), 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t visited = 0;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            ++visited;
            for (NodeId w : h.subgraph.neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        CHECK(visited == h.size());
    }
}

TEST_CASE("ret with alpha=beta=1 grows BFS balls") {
    Graph g = path(9);
    CascadeParams params;
    params.model = CascadeModel::ret;
    params.m = 9;
    params.alpha = 1.0;
    params.beta = 1.0;
    auto snaps = run_with_snapshots(g, params, {9}, 3);
    const auto& h = snaps.back();
    CHECK(h.size() == 9);
    CHECK(!h.stalled);
    // Seed vertex is h id 0; the ball radius equals the rounds elapsed.
    NodeId seed_vertex = h.to_underlying[0];
    NodeId ecc = std::max(seed_vertex, static_cast<NodeId>(8 - seed_vertex));
    CHECK(h.rounds_elapsed == ecc);
    // Vertices joined at least one round ago have all their path edges.
    CHECK(maps_into(h, g));
    CHECK(h.subgraph.edge_count() == 8);
}

TEST_CASE("ret with beta=0 discovers only internal seed edges in one round") {
    Graph g = two_triangles();
    CascadeParams params;
    params.model = CascadeModel::retmiv;
    params.s = 3;
    params.m = 3;
    params.alpha = 1.0;
    params.beta = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto snaps = run_with_snapshots(g, params, {3}, seed);
        const auto& h = snaps.back();
        CHECK(h.size() == 3);
        CHECK(h.rounds_elapsed == 1);
        CHECK(!h.stalled);  // m reached exactly by the seeds
        // With alpha=1 every potential edge among the seeds is discovered.
        std::uint64_t expect = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                if (g.has_edge(h.to_underlying[i], h.to_underlying[j])) ++expect;
            }
        }
        CHECK(h.subgraph.edge_count() == expect);
    }
}

TEST_CASE("ret stalls when beta is zero and m is unreachable") {
    Graph g = two_triangles();
    auto h = ret(g, 6, 0.5, 0.0, 1, 9);
    CHECK(h.stalled);
    CHECK(h.size() == 1);
}

TEST_CASE("retmiv can stall on a disconnected graph") {
    Graph g = two_triangles();
    bool saw_stall = false, saw_finish = false;
    for (std::uint64_t seed = 0; seed < 40 && !(saw_stall && saw_finish); ++seed) {
        auto h = ret(g, 6, 1.0, 1.0, 2, seed);
        if (h.stalled) {
            saw_stall = true;
            CHECK(h.size() == 3);  // both seeds landed in one triangle
        } else {
            saw_finish = true;
            CHECK(h.size() == 6);
        }
    }
    CHECK(saw_stall);
    CHECK(saw_finish);
}

TEST_CASE("ret is deterministic for a fixed seed") {
    Graph g = watts_strogatz(500, 8, 0.1, 77);
    auto a = ret(g, 200, 0.7, 0.05, 1, 31);
    auto b = ret(g, 200, 0.7, 0.05, 1, 31);
    CHECK(edge_list_string(a.subgraph) == edge_list_string(b.subgraph));
    CHECK(a.to_underlying == b.to_underlying);
    CHECK(a.rounds_elapsed == b.rounds_elapsed);
}

TEST_CASE("retwe with gamma=0 matches ret exactly") {
    Graph g = watts_strogatz(300, 6, 0.2, 5);
    auto a = ret(g, 120, 0.6, 0.05, 1, 8);
    auto b = retwe(g, 120, 0.6, 0.05, 0.0, 8);
    CHECK(edge_list_string(a.subgraph) == edge_list_string(b.subgraph));
    CHECK(b.exploration_edges.empty());
}

TEST_CASE("retwe closes forced wedges") {
    Graph g = path(4);
    auto h = retwe(g, 4, 1.0, 1.0, 1.0, 12);
    CHECK(h.size() == 4);
    CHECK(!h.exploration_edges.empty());
    // Every exploration edge is flagged and absent from G or a closure.
    for (auto [hu, hv] : h.exploration_edges) {
        CHECK(hu < hv);
    }
    // The path has only 3 real edges; anything beyond them is exploration.
    CHECK(h.subgraph.edge_count() ==
          3 + h.exploration_edges.size());
    CHECK(maps_into(h, g));
}

TEST_CASE("retwe at the default exploration rate stays close to ret") {
    Graph g = watts_strogatz(2000, 10, 0.1, 21);
    auto h = retwe(g, 600, 0.7, 0.01, 0.001, 33);
    CHECK(h.size() >= 600);
    CHECK(maps_into(h, g));
    // A 0.001-per-wedge-per-round rate adds few ties relative to the cascade.
    CHECK(h.exploration_edges.size() < h.subgraph.edge_count() / 4);
}

TEST_CASE("retwe exploration edges may leave the potential graph") {
    // On a long path with forced closure, some wedge u-w-v closes with
    // (u, v) at ring distance 2, which is not a path edge.
    Graph g = path(6);
    auto h = retwe(g, 6, 1.0, 1.0, 1.0, 4);
    bool has_non_g_edge = false;
    for (auto [hu, hv] : h.exploration_edges) {
        if (!g.has_edge(h.to_underlying[hu], h.to_underlying[hv])) has_non_g_edge = true;
    }
    CHECK(has_non_g_edge);
}

TEST_CASE("snapshots nest and the final one matches a direct run") {
    Graph g = watts_strogatz(2000, 10, 0.1, 13);
    CascadeParams params;
    params.model = CascadeModel::ret;
    params.m = 1000;
    params.alpha = 0.7;
    params.beta = 0.05;
    auto snaps = run_with_snapshots(g, params, {100, 500, 1000}, 99);
    REQUIRE(snaps.size() == 3);
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        CHECK(snaps[i].size() <= snaps[i + 1].size());
        std::set<NodeId> small(snaps[i].to_underlying.begin(), snaps[i].to_underlying.end());
        std::set<NodeId> big(snaps[i + 1].to_underlying.begin(), snaps[i + 1].to_underlying.end());
        for (NodeId v : small) CHECK(big.count(v) == 1);
        // Edges only accumulate as well (H ids are stable across snapshots).
        bool edges_nested = true;
        snaps[i].subgraph.for_each_edge([&](NodeId u, NodeId v) {
            if (!snaps[i + 1].subgraph.has_edge(u, v)) edges_nested = false;
        });
        CHECK(edges_nested);
    }
    auto direct = ret(g, 1000, 0.7, 0.05, 1, 99);
    CHECK(edge_list_string(direct.subgraph) == edge_list_string(snaps.back().subgraph));

    SUBCASE("schedule validation") {
        CHECK_THROWS_AS(run_with_snapshots(g, params, {500, 100}, 1), std::invalid_argument);
        CHECK_THROWS_AS(run_with_snapshots(g, params, {500, 2000}, 1), std::invalid_argument);
        CHECK_THROWS_AS(run_with_snapshots(g, params, {}, 1), std::invalid_argument);
    }
}

TEST_CASE("retig snapshots are captured at exact sizes") {
    Graph g = watts_strogatz(500, 6, 0.05, 3);
    CascadeParams params;
    params.model = CascadeModel::retig;
    params.m = 400;
    auto snaps = run_with_snapshots(g, params, {50, 200, 400}, 5);
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].size() == 50);
    CHECK(snaps[1].size() == 200);
    CHECK(snaps[2].size() == 400);
}

TEST_CASE("forest fire basics") {
    Graph g2 = forest_fire(2, 0.5, 1);
    CHECK(g2.node_count() == 2);
    CHECK(g2.edge_count() == 1);

    Graph g = forest_fire(500, 0.3, 42);
    CHECK(g.node_count() == 500);
    CHECK_NOTHROW(g.validate());
    // Connected by construction: every arrival links at least once.
    std::vector<std::uint8_t> seen(500, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t visited = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++visited;
        for (NodeId w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    CHECK(visited == 500);

    CHECK_THROWS_AS(forest_fire(10, 1.0, 1), std::invalid_argument);
    Graph again = forest_fire(500, 0.3, 42);
    CHECK(edge_list_string(g) == edge_list_string(again));
}

TEST_CASE("forest fire snapshots grow with the schedule") {
    SnapshotSchedule schedule{10, 100, 300};
    std::vector<Graph> snaps;
    Graph g = forest_fire(300, 0.4, 9, {}, &schedule, &snaps);
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].node_count() == 10);
    CHECK(snaps[1].node_count() == 100);
    CHECK(snaps[2].node_count() == 300);
    CHECK(snaps[2].edge_count() == g.edge_count());
}

TEST_CASE("cascade parameter validation") {
    Graph g = cycle(10);
    CHECK_THROWS_AS(retig(g, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(retig(g, 11, 1), std::invalid_argument);
    CHECK_THROWS_AS(ret(g, 5, 1.5, 0.1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ret(g, 5, 0.5, 0.1, 7, 1), std::invalid_argument);  // s > m
}
