#include "contagion/ncp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "contagion/metrics.hpp"

namespace contagion {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Non-recursive bridge finding (Tarjan lowlink).
std::vector<std::pair<NodeId, NodeId>> find_bridges(const Graph& g) {
    const NodeId n = g.node_count();
    std::vector<std::uint32_t> disc(n, 0), low(n, 0);
    std::vector<NodeId> parent(n, kNoNode);
    std::vector<std::uint32_t> edge_pos(n, 0);
    std::vector<std::pair<NodeId, NodeId>> bridges;
    std::vector<NodeId> stack;
    std::uint32_t timer = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (disc[root] != 0) continue;
        stack.push_back(root);
        disc[root] = low[root] = ++timer;
        while (!stack.empty()) {
            NodeId v = stack.back();
            auto nbrs = g.neighbors(v);
            bool descended = false;
            while (edge_pos[v] < nbrs.size()) {
                NodeId w = nbrs[edge_pos[v]++];
                if (disc[w] == 0) {
                    parent[w] = v;
                    disc[w] = low[w] = ++timer;
                    stack.push_back(w);
                    descended = true;
                    break;
                }
                if (w != parent[v]) low[v] = std::min(low[v], disc[w]);
            }
            if (descended) continue;
            stack.pop_back();
            NodeId p = parent[v];
            if (p != kNoNode) {
                low[p] = std::min(low[p], low[v]);
                if (low[v] > disc[p]) bridges.emplace_back(p, v);
            }
        }
    }
    return bridges;
}

struct BinKey {
    int index;
};

class BinCollector {
public:
    BinCollector(NodeId n, double ratio, EdgeCount total_degree)
        : n_(n), log_ratio_(std::log(ratio)), total_degree_(total_degree) {}

    std::uint32_t max_size() const { return n_ / 2; }

    /// Submits a candidate set described by (size, cut, volume). The witness
    /// materializer runs only when the candidate improves its bin.
    template <typename MakeWitness>
    void submit(std::uint64_t size, std::uint64_t cut, std::uint64_t vol,
                const char* method, MakeWitness&& make_witness) {
        if (size == 0 || size > max_size()) return;
        std::uint64_t min_vol = std::min(vol, total_degree_ - vol);
        if (min_vol == 0) return;  // conductance undefined
        int bin = static_cast<int>(std::log(static_cast<double>(size)) / log_ratio_);
        auto it = best_.find(bin);
        // Exact rational comparison cut/min_vol < best.cut/best.min_vol.
        if (it != best_.end()) {
            const auto& b = it->second;
            auto lhs = static_cast<unsigned __int128>(cut) * b.min_vol;
            auto rhs = static_cast<unsigned __int128>(b.cut) * min_vol;
            if (lhs >= rhs) return;
        }
        Entry e;
        e.size = static_cast<std::uint32_t>(size);
        e.cut = cut;
        e.min_vol = min_vol;
        e.method = method;
        e.witness = make_witness();
        best_[bin] = std::move(e);
    }

    NcpCurve finish(double ratio) && {
        NcpCurve curve;
        curve.node_count = n_;
        curve.bin_ratio = ratio;
        for (auto& [bin, e] : best_) {
            NcpBin out;
            out.size = e.size;
            out.conductance = static_cast<double>(e.cut) / static_cast<double>(e.min_vol);
            out.witness = std::move(e.witness);
            out.method = e.method;
            curve.bins.push_back(std::move(out));
        }
        std::sort(curve.bins.begin(), curve.bins.end(),
                  [](const NcpBin& a, const NcpBin& b) { return a.size < b.size; });
        return curve;
    }

private:
    struct Entry {
        std::uint32_t size = 0;
        std::uint64_t cut = 0;
        std::uint64_t min_vol = 0;
        const char* method = "";
        std::vector<NodeId> witness;
    };
    NodeId n_;
    double log_ratio_;
    EdgeCount total_degree_;
    std::map<int, Entry> best_;
};

/// Whisker decomposition: label the components left after removing bridges,
/// hang them on a forest via the bridges, root each tree at its
/// highest-volume component, and submit every bridge-hung subtree plus
/// volume-sorted prefix unions of the whiskers directly under the roots.
void whisker_candidates(const Graph& g, BinCollector& bins) {
    auto bridges = find_bridges(g);
    std::unordered_set<std::uint64_t> bridge_set;
    bridge_set.reserve(bridges.size() * 2);
    for (auto [u, v] : bridges) bridge_set.insert(edge_key(u, v));

    const NodeId n = g.node_count();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::vector<std::vector<NodeId>> comp_nodes;
    std::vector<std::uint64_t> comp_vol;
    std::vector<NodeId> stack;
    for (NodeId v0 = 0; v0 < n; ++v0) {
        if (comp[v0] != UINT32_MAX) continue;
        auto id = static_cast<std::uint32_t>(comp_nodes.size());
        comp_nodes.emplace_back();
        comp_vol.push_back(0);
        comp[v0] = id;
        stack.push_back(v0);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp_nodes[id].push_back(v);
            comp_vol[id] += g.degree(v);
            for (NodeId w : g.neighbors(v)) {
                if (comp[w] == UINT32_MAX && !bridge_set.count(edge_key(v, w))) {
                    comp[w] = id;
                    stack.push_back(w);
                }
            }
        }
    }
    const auto comp_count = static_cast<std::uint32_t>(comp_nodes.size());

    // Whole connected components are candidates too (zero cut).
    {
        std::vector<std::uint32_t> cc(n, UINT32_MAX);
        for (NodeId v0 = 0; v0 < n; ++v0) {
            if (cc[v0] != UINT32_MAX) continue;
            std::vector<NodeId> nodes;
            std::uint64_t vol = 0;
            cc[v0] = 1;
            stack.push_back(v0);
            while (!stack.empty()) {
                NodeId v = stack.back();
                stack.pop_back();
                nodes.push_back(v);
                vol += g.degree(v);
                for (NodeId w : g.neighbors(v)) {
                    if (cc[w] == UINT32_MAX) {
                        cc[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            if (nodes.size() < n) {
                bins.submit(nodes.size(), 0, vol, "component",
                            [&] { return nodes; });
            }
        }
    }
    if (bridges.empty()) return;

    // Bridge forest over components.
    std::vector<std::vector<std::uint32_t>> tree(comp_count);
    for (auto [u, v] : bridges) {
        std::uint32_t a = comp[u], b = comp[v];
        if (a == b) continue;
        tree[a].push_back(b);
        tree[b].push_back(a);
    }
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> tree_parent(comp_count, UINT32_MAX);
    std::vector<std::uint8_t> seen(comp_count, 0);
    std::vector<std::uint64_t> sub_vol(comp_vol);
    std::vector<std::uint64_t> sub_size(comp_count);
    for (std::uint32_t c = 0; c < comp_count; ++c) sub_size[c] = comp_nodes[c].size();

    for (std::uint32_t c0 = 0; c0 < comp_count; ++c0) {
        if (seen[c0]) continue;
        // Collect this tree, then re-root at its highest-volume component.
        std::vector<std::uint32_t> members;
        std::vector<std::uint32_t> bfs{c0};
        seen[c0] = 1;
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            members.push_back(bfs[i]);
            for (std::uint32_t d : tree[bfs[i]]) {
                if (!seen[d]) {
                    seen[d] = 1;
                    bfs.push_back(d);
                }
            }
        }
        std::uint32_t root = members.front();
        for (std::uint32_t c : members) {
            if (comp_vol[c] > comp_vol[root]) root = c;
        }
        std::vector<std::uint32_t> dfs{root};
        tree_parent[root] = root;
        std::vector<std::uint32_t> local_order;
        while (!dfs.empty()) {
            std::uint32_t c = dfs.back();
            dfs.pop_back();
            local_order.push_back(c);
            for (std::uint32_t d : tree[c]) {
                if (tree_parent[d] == UINT32_MAX) {
                    tree_parent[d] = c;
                    dfs.push_back(d);
                }
            }
        }
        for (auto it = local_order.rbegin(); it != local_order.rend(); ++it) {
            std::uint32_t c = *it;
            if (tree_parent[c] != c) {
                sub_vol[tree_parent[c]] += sub_vol[c];
                sub_size[tree_parent[c]] += sub_size[c];
            }
        }

        auto collect_subtree = [&](std::uint32_t top) {
            std::vector<NodeId> nodes;
            std::vector<std::uint32_t> work{top};
            while (!work.empty()) {
                std::uint32_t c = work.back();
                work.pop_back();
                nodes.insert(nodes.end(), comp_nodes[c].begin(), comp_nodes[c].end());
                for (std::uint32_t d : tree[c]) {
                    if (tree_parent[d] == c) work.push_back(d);
                }
            }
            return nodes;
        };

        std::vector<std::uint32_t> root_children;
        for (std::uint32_t c : members) {
            if (c == root) continue;
            // Subtree below the bridge (tree_parent[c], c): cut is exactly 1.
            bins.submit(sub_size[c], 1, sub_vol[c], "whisker",
                        [&] { return collect_subtree(c); });
            if (tree_parent[c] == root) root_children.push_back(c);
        }

        // Prefix unions of the whiskers hanging directly off the core; the
        // union of t whiskers is cut by exactly t bridges.
        std::sort(root_children.begin(), root_children.end(),
                  [&](std::uint32_t a, std::uint32_t b) {
                      if (sub_vol[a] != sub_vol[b]) return sub_vol[a] > sub_vol[b];
                      return a < b;
                  });
        std::uint64_t union_size = 0, union_vol = 0;
        std::vector<NodeId> union_nodes;
        for (std::size_t t = 0; t < root_children.size(); ++t) {
            union_size += sub_size[root_children[t]];
            union_vol += sub_vol[root_children[t]];
            if (union_size > bins.max_size()) break;
            auto part = collect_subtree(root_children[t]);
            union_nodes.insert(union_nodes.end(), part.begin(), part.end());
            if (t == 0) continue;  // single whisker already submitted
            bins.submit(union_size, t + 1, union_vol, "whisker",
                        [&] { return union_nodes; });
        }
    }
}

/// Degree-normalized personalized-ranking push (lazy approximation with
/// teleport probability `teleport` and residual threshold eps * degree).
void push_scores(const Graph& g, NodeId seed_vertex, double teleport, double eps,
                 std::vector<double>& score, std::vector<double>& residual,
                 std::vector<NodeId>& touched) {
    touched.clear();
    std::vector<NodeId> queue;

    auto ensure = [&](NodeId v) {
        if (residual[v] == 0.0 && score[v] == 0.0) touched.push_back(v);
    };

    static thread_local std::vector<std::uint8_t> in_queue;
    if (in_queue.size() < g.node_count()) in_queue.assign(g.node_count(), 0);

    ensure(seed_vertex);
    residual[seed_vertex] = 1.0;
    queue.push_back(seed_vertex);
    in_queue[seed_vertex] = 1;
    while (!queue.empty()) {
        NodeId v = queue.back();
        queue.pop_back();
        in_queue[v] = 0;
        double r = residual[v];
        NodeId deg = g.degree(v);
        if (deg == 0) {
            score[v] += r;
            residual[v] = 0.0;
            continue;
        }
        if (r < eps * deg) continue;
        score[v] += teleport * r;
        double push_out = (1.0 - teleport) * r;
        residual[v] = push_out / 2.0;
        double share = push_out / (2.0 * deg);
        for (NodeId w : g.neighbors(v)) {
            ensure(w);
            residual[w] += share;
            if (!in_queue[w] && residual[w] >= eps * g.degree(w) && g.degree(w) > 0) {
                in_queue[w] = 1;
                queue.push_back(w);
            }
        }
        if (residual[v] >= eps * deg && !in_queue[v]) {
            in_queue[v] = 1;
            queue.push_back(v);
        }
    }
}

void sweep_candidates(const Graph& g, const std::vector<NodeId>& support,
                      const std::vector<double>& score, BinCollector& bins,
                      std::vector<std::uint8_t>& in_prefix) {
    std::vector<std::pair<double, NodeId>> ordered;
    ordered.reserve(support.size());
    for (NodeId v : support) {
        if (score[v] > 0.0 && g.degree(v) > 0) {
            ordered.emplace_back(score[v] / g.degree(v), v);
        }
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::uint64_t cut = 0, vol = 0;
    std::vector<NodeId> prefix;
    prefix.reserve(ordered.size());
    for (const auto& [val, v] : ordered) {
        vol += g.degree(v);
        std::uint64_t internal = 0;
        for (NodeId w : g.neighbors(v)) {
            if (in_prefix[w]) ++internal;
        }
        cut += g.degree(v) - 2 * internal;
        in_prefix[v] = 1;
        prefix.push_back(v);
        if (prefix.size() >= g.node_count()) break;
        bins.submit(prefix.size(), cut, vol, "sweep", [&] { return prefix; });
    }
    for (NodeId v : prefix) in_prefix[v] = 0;
}

}  // namespace

double NcpCurve::best_in_size_range(double lo, double hi) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : bins) {
        if (b.size >= lo && b.size <= hi) best = std::min(best, b.conductance);
    }
    return best;
}

const NcpBin* NcpCurve::bin_for_size(std::uint32_t size) const {
    const NcpBin* below = nullptr;
    const NcpBin* above = nullptr;
    for (const auto& b : bins) {
        if (b.size <= size) below = &b;
        if (b.size >= size && !above) above = &b;
    }
    return below ? below : above;
}

NcpCurve ncp_heuristic(const Graph& g, const NcpConfig& config) {
    if (config.bin_ratio <= 1.0) throw std::invalid_argument("bin_ratio must exceed 1");
    if (g.node_count() < 2 || g.edge_count() == 0) {
        throw std::invalid_argument("ncp_heuristic needs a graph with at least one edge");
    }
    BinCollector bins(g.node_count(), config.bin_ratio, g.total_degree());

    whisker_candidates(g, bins);

    auto lcc = largest_component(g);
    const bool disconnected = lcc.size() < g.node_count();

    std::vector<double> targets = config.volume_targets;
    if (targets.empty()) {
        double half_vol = static_cast<double>(g.total_degree()) / 2.0;
        for (double t = 1000.0; t < half_vol; t *= 10.0) targets.push_back(t);
        targets.push_back(half_vol);
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::size_t> pick(0, lcc.size() - 1);
    std::vector<double> score(g.node_count(), 0.0);
    std::vector<double> residual(g.node_count(), 0.0);
    std::vector<NodeId> touched;
    std::vector<std::uint8_t> in_prefix(g.node_count(), 0);

    for (int i = 0; i < config.seed_count; ++i) {
        NodeId seed_vertex = lcc[pick(rng)];
        double target = targets[i % targets.size()];
        for (double teleport : config.teleports) {
            double eps = 1.0 / std::max(2.0 * target, 64.0);
            push_scores(g, seed_vertex, teleport, eps, score, residual, touched);
            sweep_candidates(g, touched, score, bins, in_prefix);
            for (NodeId v : touched) {
                score[v] = 0.0;
                residual[v] = 0.0;
            }
        }
    }

    NcpCurve curve = std::move(bins).finish(config.bin_ratio);
    curve.lcc_only = disconnected;
    return curve;
}

}  // namespace contagion
