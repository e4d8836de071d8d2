#include "contagion/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace contagion {

namespace {

using Rng = std::mt19937_64;

bool adjacent(const std::vector<std::vector<NodeId>>& adj, NodeId u, NodeId v) {
    const auto& nbrs = adj[u];
    return std::find(nbrs.begin(), nbrs.end(), v) != nbrs.end();
}

void add_edge(std::vector<std::vector<NodeId>>& adj, NodeId u, NodeId v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
}

void remove_neighbor(std::vector<NodeId>& nbrs, NodeId v) {
    auto it = std::find(nbrs.begin(), nbrs.end(), v);
    if (it != nbrs.end()) {
        *it = nbrs.back();
        nbrs.pop_back();
    }
}

/// Rewires (u, v) to (u, v') with v' uniform over non-neighbors of u.
/// Skipped when u is already adjacent to every other vertex.
void maybe_rewire(std::vector<std::vector<NodeId>>& adj, NodeId n, NodeId u,
                  NodeId v, double r, Rng& rng) {
    if (!std::bernoulli_distribution(r)(rng)) return;
    if (adj[u].size() >= static_cast<std::size_t>(n) - 1) return;
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    NodeId fresh;
    do {
        fresh = pick(rng);
    } while (fresh == u || adjacent(adj, u, fresh));
    remove_neighbor(adj[u], v);
    remove_neighbor(adj[v], u);
    add_edge(adj, u, fresh);
}

}  // namespace

Graph watts_strogatz(NodeId n, NodeId d, double r, std::uint64_t seed) {
    if (d % 2 != 0 || d < 2 || d >= n) {
        throw std::invalid_argument("watts_strogatz requires even d with 2 <= d < n");
    }
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("rewiring probability outside [0,1]");

    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId off = 1; off <= d / 2; ++off) {
            add_edge(adj, u, (u + off) % n);
        }
    }
    Rng rng(seed);
    if (r > 0.0) {
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId off = 1; off <= d / 2; ++off) {
                NodeId v = (u + off) % n;
                if (!adjacent(adj, u, v)) continue;  // already rewired away
                maybe_rewire(adj, n, u, v, r, rng);
            }
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

Graph planted_community(NodeId n, NodeId d, double r, std::uint64_t seed) {
    if (d < 2 || n % d != 0) {
        throw std::invalid_argument("planted_community requires d >= 2 dividing n");
    }
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("rewiring probability outside [0,1]");

    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId base = 0; base < n; base += d) {
        for (NodeId i = 0; i < d; ++i) {
            for (NodeId j = i + 1; j < d; ++j) {
                add_edge(adj, base + i, base + j);
            }
        }
    }
    Rng rng(seed);
    if (r > 0.0) {
        for (NodeId base = 0; base < n; base += d) {
            for (NodeId i = 0; i < d; ++i) {
                for (NodeId j = i + 1; j < d; ++j) {
                    NodeId u = base + i, v = base + j;
                    if (!adjacent(adj, u, v)) continue;
                    maybe_rewire(adj, n, u, v, r, rng);
                }
            }
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

namespace {

/// Pairs degree stubs into a simple d-regular graph. Conflicting stubs go to
/// a retry pool; when the pool stops shrinking the whole pairing restarts.
std::vector<std::vector<NodeId>> pair_stubs(NodeId n, NodeId d, Rng& rng) {
    std::vector<NodeId> stubs(static_cast<std::size_t>(n) * d);
    for (NodeId v = 0; v < n; ++v) {
        std::fill_n(stubs.begin() + static_cast<std::size_t>(v) * d, d, v);
    }
    std::shuffle(stubs.begin(), stubs.end(), rng);

    std::vector<std::vector<NodeId>> adj(n);
    for (auto& a : adj) a.reserve(d);
    std::vector<NodeId> pending;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        NodeId u = stubs[i], v = stubs[i + 1];
        if (u == v || adjacent(adj, u, v)) {
            pending.push_back(u);
            pending.push_back(v);
        } else {
            add_edge(adj, u, v);
        }
    }
    while (!pending.empty()) {
        std::shuffle(pending.begin(), pending.end(), rng);
        std::vector<NodeId> next;
        for (std::size_t i = 0; i + 1 < pending.size(); i += 2) {
            NodeId u = pending[i], v = pending[i + 1];
            if (u == v || adjacent(adj, u, v)) {
                next.push_back(u);
                next.push_back(v);
            } else {
                add_edge(adj, u, v);
            }
        }
        if (next.size() == pending.size()) {
            // No progress; check whether any valid pair remains at all.
            bool stuck = true;
            for (std::size_t i = 0; i < next.size() && stuck; ++i) {
                for (std::size_t j = i + 1; j < next.size(); ++j) {
                    if (next[i] != next[j] && !adjacent(adj, next[i], next[j])) {
                        stuck = false;
                        break;
                    }
                }
            }
            if (stuck) return {};  // dead end, caller restarts
        }
        pending = std::move(next);
    }
    return adj;
}

}  // namespace

Graph random_regular(NodeId n, NodeId d, std::uint64_t seed) {
    if (d >= n) throw std::invalid_argument("random_regular requires d < n");
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
        throw std::invalid_argument("random_regular requires n*d even");
    }
    if (d == 0) return Graph::from_adjacency(std::vector<std::vector<NodeId>>(n));

    Rng rng(seed);
    constexpr int kMaxRestarts = 64;
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        auto adj = pair_stubs(n, d, rng);
        if (!adj.empty()) return Graph::from_adjacency(std::move(adj));
    }
    throw std::runtime_error("random_regular: stub pairing failed after restarts");
}

Graph planted_clique_model(NodeId n, NodeId k, double r, std::uint64_t seed) {
    if (k < 1 || n % k != 0) {
        throw std::invalid_argument("planted_clique_model requires k dividing n");
    }
    double rk = r * k;
    auto reg_degree = static_cast<NodeId>(rk + 0.5);
    if (std::abs(rk - reg_degree) > 1e-9) {
        throw std::invalid_argument("planted_clique_model requires r*k integral, got " +
                                    std::to_string(rk));
    }
    if (reg_degree >= n) throw std::invalid_argument("planted_clique_model requires r*k < n");

    // Regular layer first: its stub pairing is independent of the cliques.
    Rng rng(seed);
    std::vector<std::vector<NodeId>> adj(n);
    if (reg_degree > 0) {
        if ((static_cast<std::uint64_t>(n) * reg_degree) % 2 != 0) {
            throw std::invalid_argument("planted_clique_model: n*r*k must be even");
        }
        constexpr int kMaxRestarts = 64;
        int attempt = 0;
        for (; attempt < kMaxRestarts; ++attempt) {
            adj = pair_stubs(n, reg_degree, rng);
            if (!adj.empty()) break;
        }
        if (adj.empty()) {
            throw std::runtime_error("planted_clique_model: regular layer pairing failed");
        }
    }
    for (NodeId base = 0; base < n; base += k) {
        for (NodeId i = 0; i < k; ++i) {
            for (NodeId j = i + 1; j < k; ++j) {
                adj[base + i].push_back(base + j);
                adj[base + j].push_back(base + i);
            }
        }
    }
    // from_adjacency merges the clique/regular overlaps.
    return Graph::from_adjacency(std::move(adj));
}

namespace {

Graph complete_graph(NodeId n);

Graph erdos_renyi(NodeId n, NodeId d, std::uint64_t seed) {
    if (n < 2) return Graph::from_adjacency(std::vector<std::vector<NodeId>>(n));
    double p = static_cast<double>(d) / (n - 1);
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("erdos_renyi: p = d/(n-1) outside [0,1]");
    }
    if (p >= 1.0) return complete_graph(n);
    std::vector<std::vector<NodeId>> adj(n);
    if (p == 0.0) return Graph::from_adjacency(std::move(adj));

    // Geometric skipping over the lexicographic (u < v) pair sequence.
    Rng rng(seed);
    const double log1mp = std::log1p(-p);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t pos = 0;  // 1-based rank of the next sampled pair
    while (true) {
        double u = unit(rng);
        pos += 1 + static_cast<std::uint64_t>(std::floor(std::log(1.0 - u) / log1mp));
        if (pos > total) break;
        std::uint64_t idx = pos - 1;
        // pairs_before(row) = row*(2n-row-1)/2; find the largest row <= idx.
        auto row = static_cast<NodeId>(
            (2.0 * n - 1 - std::sqrt((2.0 * n - 1) * (2.0 * n - 1) - 8.0 * idx)) / 2.0);
        auto pairs_before = [n](std::uint64_t r) {
            return r * (2ULL * n - r - 1) / 2;
        };
        while (pairs_before(row + 1) <= idx) ++row;
        while (row > 0 && pairs_before(row) > idx) --row;
        auto col = static_cast<NodeId>(row + 1 + (idx - pairs_before(row)));
        add_edge(adj, row, col);
    }
    return Graph::from_adjacency(std::move(adj));
}

Graph preferential_attachment(NodeId n, NodeId d, std::uint64_t seed) {
    if (d < 2 || d % 2 != 0) {
        throw std::invalid_argument("preferential_attachment requires even d >= 2");
    }
    NodeId half = d / 2;
    NodeId seed_size = half + 1;
    if (n < seed_size) {
        throw std::invalid_argument("preferential_attachment requires n >= d/2 + 1");
    }
    std::vector<std::vector<NodeId>> adj(n);
    std::vector<NodeId> endpoints;  // degree-proportional sampling pool
    endpoints.reserve(2 * static_cast<std::size_t>(n) * half);
    for (NodeId i = 0; i < seed_size; ++i) {
        for (NodeId j = i + 1; j < seed_size; ++j) {
            add_edge(adj, i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    Rng rng(seed);
    std::vector<NodeId> chosen;
    for (NodeId v = seed_size; v < n; ++v) {
        chosen.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (chosen.size() < half) {
            NodeId target = endpoints[pick(rng)];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end()) {
                chosen.push_back(target);
            }
        }
        for (NodeId target : chosen) {
            add_edge(adj, v, target);
            endpoints.push_back(v);
            endpoints.push_back(target);
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

Graph complete_graph(NodeId n) {
    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId i = 0; i < n; ++i) {
        adj[i].reserve(n - 1);
        for (NodeId j = 0; j < n; ++j) {
            if (j != i) adj[i].push_back(j);
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

}  // namespace

Graph baseline_graph(BaselineKind kind, NodeId n, NodeId d, std::uint64_t seed) {
    switch (kind) {
        case BaselineKind::erdos_renyi:
            return erdos_renyi(n, d, seed);
        case BaselineKind::preferential_attachment:
            return preferential_attachment(n, d, seed);
        case BaselineKind::complete:
            return complete_graph(n);
    }
    throw std::invalid_argument("unknown baseline kind");
}

BaselineKind baseline_kind_from_string(const std::string& name) {
    if (name == "er" || name == "erdos_renyi") return BaselineKind::erdos_renyi;
    if (name == "pa" || name == "preferential_attachment") {
        return BaselineKind::preferential_attachment;
    }
    if (name == "complete") return BaselineKind::complete;
    throw std::invalid_argument("unknown baseline model: " + name);
}

}  // namespace contagion
