#include "contagion/cascade.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace contagion {

std::string to_string(CascadeModel model) {
    switch (model) {
        case CascadeModel::retig: return "retig";
        case CascadeModel::ret: return "ret";
        case CascadeModel::retmiv: return "retmiv";
        case CascadeModel::retwe: return "retwe";
        case CascadeModel::forest_fire: return "forestfire";
    }
    return "?";
}

CascadeModel cascade_model_from_string(const std::string& name) {
    if (name == "retig") return CascadeModel::retig;
    if (name == "ret") return CascadeModel::ret;
    if (name == "retmiv") return CascadeModel::retmiv;
    if (name == "retwe") return CascadeModel::retwe;
    if (name == "forestfire" || name == "forest_fire") return CascadeModel::forest_fire;
    throw std::invalid_argument("unknown cascade model: " + name);
}

void CascadeParams::validate(NodeId graph_nodes) const {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma)) {
        throw std::invalid_argument("cascade probabilities must lie in [0,1]");
    }
    if (m < 1) throw std::invalid_argument("cascade target m must be >= 1");
    if (model == CascadeModel::forest_fire) {
        if (p < 0.0 || p >= 1.0) {
            throw std::invalid_argument("forest fire requires 0 <= p < 1");
        }
        return;
    }
    if (m > graph_nodes) {
        throw std::invalid_argument("cascade target m exceeds graph size");
    }
    NodeId seeds = (model == CascadeModel::retmiv) ? s : 1;
    if (seeds < 1 || seeds > m) {
        throw std::invalid_argument("seed count must satisfy 1 <= s <= m");
    }
}

void validate_schedule(const SnapshotSchedule& schedule, std::size_t m) {
    if (schedule.empty()) throw std::invalid_argument("empty snapshot schedule");
    std::size_t prev = 0;
    for (std::size_t c : schedule) {
        if (c <= prev) throw std::invalid_argument("snapshot schedule must be strictly increasing");
        prev = c;
    }
    if (schedule.back() > m) {
        throw std::invalid_argument("snapshot checkpoint exceeds cascade target");
    }
}

namespace {

using Rng = std::mt19937_64;

InfectedGraph make_retig_snapshot(const Graph& g, const std::vector<NodeId>& infected,
                                  std::uint64_t steps, const CascadeParams& params,
                                  std::uint64_t seed, std::size_t target, bool stalled) {
    auto sub = induced_subgraph(g, VertexSet::of(g.node_count(), infected));
    InfectedGraph out;
    out.subgraph = std::move(sub.graph);
    out.to_underlying = std::move(sub.to_underlying);
    out.rounds_elapsed = steps;
    out.model = CascadeModel::retig;
    out.params = params;
    out.seed = seed;
    out.target_size = target;
    out.stalled = stalled;
    return out;
}

std::vector<InfectedGraph> retig_run(const Graph& g, const CascadeParams& params,
                                     const SnapshotSchedule& schedule,
                                     std::uint64_t seed) {
    params.validate(g.node_count());
    validate_schedule(schedule, params.m);
    const std::size_t m = params.m;

    Rng rng(seed);
    std::vector<std::uint8_t> infected(g.node_count(), 0);
    std::vector<NodeId> order;
    order.reserve(m);
    // Cut entries (inside, outside); entries whose outside endpoint has been
    // infected since insertion are dropped lazily on draw.
    std::vector<std::pair<NodeId, NodeId>> cut;

    auto infect = [&](NodeId v) {
        infected[v] = 1;
        order.push_back(v);
        for (NodeId w : g.neighbors(v)) {
            if (!infected[w]) cut.emplace_back(v, w);
        }
    };

    NodeId v0 = std::uniform_int_distribution<NodeId>(0, g.node_count() - 1)(rng);
    infect(v0);

    std::vector<InfectedGraph> snaps;
    std::size_t next_cp = 0;
    std::uint64_t steps = 0;
    auto capture_due = [&](bool stalled) {
        while (next_cp < schedule.size() && order.size() >= schedule[next_cp]) {
            snaps.push_back(make_retig_snapshot(g, order, steps, params, seed,
                                                schedule[next_cp], false));
            ++next_cp;
        }
        if (stalled) {
            snaps.push_back(make_retig_snapshot(g, order, steps, params, seed, m, true));
        }
    };
    capture_due(false);

    while (order.size() < m) {
        bool drew = false;
        while (!cut.empty()) {
            std::size_t idx =
                std::uniform_int_distribution<std::size_t>(0, cut.size() - 1)(rng);
            auto [u, v] = cut[idx];
            cut[idx] = cut.back();
            cut.pop_back();
            if (infected[v]) continue;  // stale entry
            infect(v);
            ++steps;
            drew = true;
            break;
        }
        if (!drew) {
            capture_due(true);  // component exhausted before reaching m
            return snaps;
        }
        capture_due(false);
    }
    return snaps;
}

/// Round-based engine shared by ret / retmiv / retwe.
class RoundEngine {
public:
    RoundEngine(const Graph& g, const CascadeParams& params, std::uint64_t seed)
        : g_(g), params_(params), seed_(seed), rng_(seed),
          h_of_(g.node_count(), kNoNode),
          join_round_(g.node_count(), 0) {}

    std::vector<InfectedGraph> run(const SnapshotSchedule& schedule) {
        params_.validate(g_.node_count());
        validate_schedule(schedule, params_.m);
        const std::size_t m = params_.m;
        const NodeId seeds = (params_.model == CascadeModel::retmiv) ? params_.s : 1;
        sample_seeds(seeds);

        std::vector<InfectedGraph> snaps;
        std::size_t next_cp = 0;
        std::uint64_t round = 0;
        bool stalled = false;
        // Rounds are synchronous sweeps, so "the first moment a checkpoint is
        // reached" is the end of the round that crosses it; mid-sweep states
        // mix swept and unswept frontier. A one-entry schedule therefore
        // matches a direct engine run. The stop check runs after a completed
        // round, so even m == s runs one round of internal-edge discovery.
        while (true) {
            ++round;
            run_round(round);
            while (next_cp < schedule.size() && members_.size() >= schedule[next_cp]) {
                snaps.push_back(capture(round, schedule[next_cp], false));
                ++next_cp;
            }
            if (members_.size() >= m) break;
            if (cut_.empty() || params_.beta == 0.0) {
                stalled = true;  // no boundary left: m is unreachable
                break;
            }
        }
        if (stalled) snaps.push_back(capture(round, m, true));
        return snaps;
    }

private:
    void sample_seeds(NodeId seeds) {
        std::uniform_int_distribution<NodeId> pick(0, g_.node_count() - 1);
        while (members_.size() < seeds) {
            NodeId v = pick(rng_);
            if (h_of_[v] == kNoNode) join(v, 0);
        }
    }

    bool h_has_edge(NodeId hu, NodeId hv) const {
        const auto& a = h_adj_[hu].size() <= h_adj_[hv].size() ? h_adj_[hu] : h_adj_[hv];
        NodeId want = h_adj_[hu].size() <= h_adj_[hv].size() ? hv : hu;
        return std::find(a.begin(), a.end(), want) != a.end();
    }

    void add_h_edge(NodeId hu, NodeId hv) {
        h_adj_[hu].push_back(hv);
        h_adj_[hv].push_back(hu);
    }

    /// Registers v as infected in the given round: assigns its H ID, queues
    /// undiscovered internal candidates toward already-infected neighbors,
    /// and appends new cut entries toward uninfected ones.
    NodeId join(NodeId v, std::uint64_t round) {
        auto hv = static_cast<NodeId>(members_.size());
        members_.push_back(v);
        h_of_[v] = hv;
        join_round_[v] = round;
        h_adj_.emplace_back();
        for (NodeId x : g_.neighbors(v)) {
            if (h_of_[x] != kNoNode) {
                pending_.emplace_back(h_of_[x], hv);
            } else {
                cut_.emplace_back(v, x);
            }
        }
        return hv;
    }

    void run_round(std::uint64_t round) {
        std::vector<std::uint32_t> wedge_lens;
        const bool explore = params_.model == CascadeModel::retwe && params_.gamma > 0.0;
        if (explore) {
            wedge_lens.reserve(h_adj_.size());
            for (const auto& nbrs : h_adj_) {
                wedge_lens.push_back(static_cast<std::uint32_t>(nbrs.size()));
            }
        }
        alpha_phase();
        beta_phase(round);
        if (explore) gamma_phase(wedge_lens);
    }

    /// One alpha trial per pending internal candidate; successes and edges
    /// discovered through other phases leave the queue.
    void alpha_phase() {
        std::bernoulli_distribution coin(params_.alpha);
        std::size_t w = 0;
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            auto [hu, hv] = pending_[i];
            if (h_has_edge(hu, hv)) continue;
            if (coin(rng_)) {
                add_h_edge(hu, hv);
            } else {
                pending_[w++] = pending_[i];
            }
        }
        pending_.resize(w);
    }

    /// Sweeps the cut entries that existed at round start. Every edge whose
    /// outside endpoint was outside at round start gets exactly one beta
    /// trial; entries added during the round wait for the next one.
    void beta_phase(std::uint64_t round) {
        std::bernoulli_distribution coin(params_.beta);
        const std::size_t len0 = cut_.size();
        std::size_t w = 0;
        for (std::size_t i = 0; i < len0; ++i) {
            auto [u, v] = cut_[i];
            if (h_of_[v] != kNoNode && join_round_[v] < round) continue;  // stale
            bool joined_this_round = h_of_[v] != kNoNode;
            if (coin(rng_)) {
                NodeId hv = joined_this_round ? h_of_[v] : join(v, round);
                NodeId hu = h_of_[u];
                if (!h_has_edge(hu, hv)) add_h_edge(hu, hv);
                continue;
            }
            if (joined_this_round) continue;  // now internal; pending has it
            cut_[w++] = cut_[i];
        }
        for (std::size_t i = len0; i < cut_.size(); ++i) cut_[w++] = cut_[i];
        cut_.resize(w);
    }

    /// Flips every wedge of the round-start H once with probability gamma,
    /// by geometric skipping through the implicit wedge sequence; closed
    /// pairs hit by the sampler are no-ops.
    void gamma_phase(const std::vector<std::uint32_t>& lens) {
        std::vector<std::uint64_t> prefix(lens.size() + 1, 0);
        for (std::size_t h = 0; h < lens.size(); ++h) {
            std::uint64_t L = lens[h];
            prefix[h + 1] = prefix[h] + L * (L - 1) / 2;
        }
        const std::uint64_t total = prefix.back();
        if (total == 0) return;

        const double gamma = params_.gamma;
        std::geometric_distribution<std::uint64_t> skip(gamma);
        std::uint64_t pos = 0;
        bool first = true;
        while (true) {
            std::uint64_t jump = (gamma >= 1.0) ? 0 : skip(rng_);
            pos += jump + (first ? 0 : 1);
            first = false;
            if (pos >= total) break;
            auto center = static_cast<std::size_t>(
                std::upper_bound(prefix.begin(), prefix.end(), pos) - prefix.begin() - 1);
            std::uint64_t j = pos - prefix[center];
            std::uint32_t a = 0;
            std::uint32_t row = lens[center] - 1;
            while (j >= row) {
                j -= row;
                ++a;
                --row;
            }
            std::uint32_t b = a + 1 + static_cast<std::uint32_t>(j);
            NodeId hu = h_adj_[center][a];
            NodeId hv = h_adj_[center][b];
            if (!h_has_edge(hu, hv)) {
                add_h_edge(hu, hv);
                exploration_.emplace_back(std::min(hu, hv), std::max(hu, hv));
            }
        }
    }

    InfectedGraph capture(std::uint64_t rounds, std::size_t target, bool stalled) {
        std::vector<std::vector<NodeId>> adj(h_adj_.begin(), h_adj_.end());
        InfectedGraph out;
        out.subgraph = Graph::from_adjacency(std::move(adj));
        out.to_underlying = members_;
        out.rounds_elapsed = rounds;
        out.model = params_.model;
        out.params = params_;
        out.seed = seed_;
        out.target_size = target;
        out.stalled = stalled;
        out.exploration_edges = exploration_;
        return out;
    }

    const Graph& g_;
    CascadeParams params_;
    std::uint64_t seed_;
    Rng rng_;
    std::vector<NodeId> members_;            // H id -> underlying id
    std::vector<NodeId> h_of_;               // underlying id -> H id
    std::vector<std::uint64_t> join_round_;  // valid where h_of_ is set
    std::vector<std::vector<NodeId>> h_adj_;
    std::vector<std::pair<NodeId, NodeId>> pending_;  // H-id internal candidates
    std::vector<std::pair<NodeId, NodeId>> cut_;      // (inside, outside) underlying ids
    std::vector<std::pair<NodeId, NodeId>> exploration_;
};

}  // namespace

InfectedGraph retig(const Graph& g, std::size_t m, std::uint64_t seed) {
    CascadeParams params;
    params.model = CascadeModel::retig;
    params.m = m;
    return retig_run(g, params, {m}, seed).back();
}

InfectedGraph ret(const Graph& g, std::size_t m, double alpha, double beta,
                  NodeId s, std::uint64_t seed) {
    CascadeParams params;
    params.model = (s > 1) ? CascadeModel::retmiv : CascadeModel::ret;
    params.m = m;
    params.alpha = alpha;
    params.beta = beta;
    params.s = s;
    return RoundEngine(g, params, seed).run({m}).back();
}

InfectedGraph retwe(const Graph& g, std::size_t m, double alpha, double beta,
                    double gamma, std::uint64_t seed) {
    CascadeParams params;
    params.model = CascadeModel::retwe;
    params.m = m;
    params.alpha = alpha;
    params.beta = beta;
    params.gamma = gamma;
    return RoundEngine(g, params, seed).run({m}).back();
}

std::vector<InfectedGraph> run_with_snapshots(const Graph& g,
                                              const CascadeParams& params,
                                              const SnapshotSchedule& schedule,
                                              std::uint64_t seed) {
    switch (params.model) {
        case CascadeModel::retig:
            return retig_run(g, params, schedule, seed);
        case CascadeModel::ret:
        case CascadeModel::retmiv:
        case CascadeModel::retwe:
            return RoundEngine(g, params, seed).run(schedule);
        case CascadeModel::forest_fire:
            throw std::invalid_argument(
                "forest fire is generative; use forest_fire(n, p, seed)");
    }
    throw std::invalid_argument("unknown cascade model");
}

Graph forest_fire(NodeId n, double p, std::uint64_t seed) {
    return forest_fire(n, p, seed, {}, nullptr, nullptr);
}

Graph forest_fire(NodeId n, double p, std::uint64_t seed,
                  const BurnDistribution& burn,
                  const SnapshotSchedule* schedule,
                  std::vector<Graph>* snapshots_out) {
    if (n < 1) throw std::invalid_argument("forest_fire requires n >= 1");
    if (p < 0.0 || p >= 1.0) throw std::invalid_argument("forest_fire requires 0 <= p < 1");
    if (schedule) validate_schedule(*schedule, n);

    Rng rng(seed);
    BurnDistribution draw = burn;
    if (!draw) {
        // Geometric count of extra burns with mean (1-p)^{-1}.
        double q = (1.0 - p) / (2.0 - p);
        draw = [q](Rng& r) {
            return static_cast<unsigned>(std::geometric_distribution<unsigned>(q)(r));
        };
    }

    std::vector<std::vector<NodeId>> adj(n);
    std::vector<NodeId> linked_stamp(n, kNoNode);
    std::vector<NodeId> queue;
    std::vector<NodeId> candidates;
    std::size_t next_cp = 0;
    auto checkpoint = [&](NodeId size) {
        if (!schedule || !snapshots_out) return;
        while (next_cp < schedule->size() && size >= (*schedule)[next_cp]) {
            std::vector<std::vector<NodeId>> prefix(adj.begin(), adj.begin() + size);
            snapshots_out->push_back(Graph::from_adjacency(std::move(prefix)));
            ++next_cp;
        }
    };
    checkpoint(1);

    for (NodeId v = 1; v < n; ++v) {
        NodeId u0 = std::uniform_int_distribution<NodeId>(0, v - 1)(rng);
        queue.clear();
        queue.push_back(u0);
        linked_stamp[u0] = v;
        adj[v].push_back(u0);
        adj[u0].push_back(v);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            NodeId w = queue[qi];
            unsigned k = draw(rng);
            if (k == 0) continue;
            candidates.clear();
            for (NodeId x : adj[w]) {
                if (x != v && linked_stamp[x] != v) candidates.push_back(x);
            }
            unsigned take = std::min<std::size_t>(k, candidates.size());
            for (unsigned t = 0; t < take; ++t) {
                std::size_t pick = std::uniform_int_distribution<std::size_t>(
                    t, candidates.size() - 1)(rng);
                std::swap(candidates[t], candidates[pick]);
                NodeId x = candidates[t];
                linked_stamp[x] = v;
                adj[v].push_back(x);
                adj[x].push_back(v);
                queue.push_back(x);
            }
        }
        checkpoint(v + 1);
    }
    return Graph::from_adjacency(std::move(adj));
}

}  // namespace contagion
