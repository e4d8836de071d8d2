#include "contagion/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace contagion {

std::uint64_t OccupancyHistogram::total_members() const {
    std::uint64_t total = 0;
    for (const auto& [size, groups] : counts) total += size * groups;
    return total;
}

std::uint64_t OccupancyHistogram::group_count() const {
    std::uint64_t total = 0;
    for (const auto& [size, groups] : counts) total += groups;
    return total;
}

void OccupancyHistogram::merge(const OccupancyHistogram& other) {
    for (const auto& [size, groups] : other.counts) counts[size] += groups;
    runs += other.runs;
}

OccupancyHistogram yule_process(const YuleParams& params) {
    if (params.steps < 1) throw std::invalid_argument("yule_process requires steps >= 1");
    if (!(params.alpha_yule > 0.0 && params.alpha_yule <= 1.0)) {
        throw std::invalid_argument("yule_process requires alpha in (0, 1]");
    }
    std::mt19937_64 rng(params.seed);
    std::bernoulli_distribution new_genus(params.alpha_yule);

    std::vector<std::uint32_t> genus_of;   // species -> genus
    std::vector<std::uint64_t> genus_size;
    genus_of.reserve(params.steps);
    genus_of.push_back(0);  // first species founds the first genus
    genus_size.push_back(1);
    for (std::uint64_t step = 1; step < params.steps; ++step) {
        std::uint64_t parent =
            std::uniform_int_distribution<std::uint64_t>(0, genus_of.size() - 1)(rng);
        if (new_genus(rng)) {
            genus_of.push_back(static_cast<std::uint32_t>(genus_size.size()));
            genus_size.push_back(1);
        } else {
            std::uint32_t genus = genus_of[parent];
            genus_of.push_back(genus);
            ++genus_size[genus];
        }
    }
    OccupancyHistogram hist;
    for (std::uint64_t size : genus_size) ++hist.counts[size];
    return hist;
}

OccupancyHistogram clique_occupancy(const CliquePartition& partition,
                                    const VertexSet& infected) {
    if (partition.k == 0 || partition.n % partition.k != 0) {
        throw std::invalid_argument("partition does not cover the vertex set evenly");
    }
    if (!infected.empty() && infected.members().back() >= partition.n) {
        throw std::invalid_argument("infected vertex outside the partitioned range");
    }
    std::vector<std::uint64_t> per_clique(partition.clique_count(), 0);
    for (NodeId v : infected.members()) ++per_clique[partition.clique_of(v)];
    OccupancyHistogram hist;
    for (std::uint64_t c : per_clique) {
        if (c > 0) ++hist.counts[c];
    }
    return hist;
}

DegreeHistogram cliquish_degree_histogram(const OccupancyHistogram& occupancy) {
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const auto& [size, groups] : occupancy.counts) {
        counts[static_cast<std::uint32_t>(size - 1)] += size * groups;
    }
    return DegreeHistogram::from_counts(counts);
}

ExhaustiveResult exhaustive_min_conductance(const Graph& g, NodeId size) {
    const NodeId n = g.node_count();
    if (n > 20) throw std::invalid_argument("exhaustive_min_conductance limited to 20 vertices");
    if (size < 1 || size >= n) throw std::invalid_argument("subset size must be in [1, n)");

    std::vector<NodeId> degree(n);
    std::uint64_t total = 0;
    for (NodeId v = 0; v < n; ++v) {
        degree[v] = g.degree(v);
        total += degree[v];
    }

    ExhaustiveResult best;
    bool found = false;
    // Gosper's hack over all n-bit masks of popcount `size`.
    std::uint32_t mask = (1u << size) - 1;
    const std::uint32_t limit = 1u << n;
    std::vector<NodeId> members;
    while (mask < limit) {
        std::uint64_t vol = 0, cut = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (!(mask >> v & 1u)) continue;
            vol += degree[v];
            for (NodeId w : g.neighbors(v)) {
                if (!(mask >> w & 1u)) ++cut;
            }
        }
        std::uint64_t min_vol = std::min(vol, total - vol);
        if (min_vol > 0) {
            bool better = !found;
            if (found) {
                auto lhs = static_cast<unsigned __int128>(cut) * best.exact.min_side_volume;
                auto rhs = static_cast<unsigned __int128>(best.exact.cut) * min_vol;
                better = lhs < rhs;
            }
            if (better) {
                found = true;
                best.exact = {cut, min_vol};
                members.clear();
                for (NodeId v = 0; v < n; ++v) {
                    if (mask >> v & 1u) members.push_back(v);
                }
            }
        }
        std::uint32_t c = mask & -mask;
        std::uint32_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    if (!found) {
        throw std::domain_error("conductance undefined for every subset of this size");
    }
    best.conductance = best.exact.value();
    best.witness = std::move(members);
    return best;
}

double total_variation(const OccupancyHistogram& a, const OccupancyHistogram& b) {
    double na = static_cast<double>(a.group_count());
    double nb = static_cast<double>(b.group_count());
    if (na == 0 || nb == 0) throw std::invalid_argument("empty histogram");
    double tv = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            tv += static_cast<double>(ia->second) / na;
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            tv += static_cast<double>(ib->second) / nb;
            ++ib;
        } else {
            tv += std::abs(static_cast<double>(ia->second) / na -
                           static_cast<double>(ib->second) / nb);
            ++ia;
            ++ib;
        }
    }
    return tv / 2.0;
}

}  // namespace contagion
