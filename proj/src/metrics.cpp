#include "contagion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace contagion {

DegreeHistogram DegreeHistogram::of(const Graph& g) {
    DegreeHistogram h;
    h.node_count = g.node_count();
    h.total_degree = g.total_degree();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeId d = g.degree(v);
        if (d >= h.counts.size()) h.counts.resize(d + 1, 0);
        ++h.counts[d];
    }
    return h;
}

DegreeHistogram DegreeHistogram::from_counts(
    const std::map<std::uint32_t, std::uint64_t>& counts) {
    DegreeHistogram h;
    for (const auto& [degree, count] : counts) {
        if (degree >= h.counts.size()) h.counts.resize(degree + 1, 0);
        h.counts[degree] += count;
        h.node_count += count;
        h.total_degree += static_cast<std::uint64_t>(degree) * count;
    }
    return h;
}

void DegreeHistogram::add(const DegreeHistogram& other) {
    if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t d = 0; d < other.counts.size(); ++d) counts[d] += other.counts[d];
    node_count += other.node_count;
    total_degree += other.total_degree;
}

std::vector<BinnedPoint> log_binned(const DegreeHistogram& hist, double ratio) {
    if (ratio <= 1.0) throw std::invalid_argument("log binning requires ratio > 1");
    std::vector<BinnedPoint> points;
    const std::uint64_t max_d = hist.max_degree();
    std::uint64_t lo = 1;
    while (lo <= max_d) {
        auto hi = static_cast<std::uint64_t>(lo * ratio);
        if (hi <= lo) hi = lo + 1;
        BinnedPoint p;
        p.lo = static_cast<std::uint32_t>(lo);
        p.hi = static_cast<std::uint32_t>(std::min<std::uint64_t>(hi, max_d + 1));
        for (std::uint64_t d = lo; d < hi && d < hist.counts.size(); ++d) {
            p.count += hist.counts[d];
        }
        if (p.count > 0) {
            // Geometric mean of the first and last integer keeps single-degree
            // bins centered on the degree itself.
            p.center = std::sqrt(static_cast<double>(lo) * static_cast<double>(hi - 1));
            p.density = static_cast<double>(p.count) / static_cast<double>(hi - lo);
            points.push_back(p);
        }
        lo = hi;
    }
    return points;
}

SlopeFit fit_power_law_slope(std::span<const BinnedPoint> points, double x_min,
                             double x_max) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : points) {
        if (p.center >= x_min && p.center <= x_max && p.density > 0.0) {
            xy.emplace_back(std::log(p.center), std::log(p.density));
        }
    }
    if (xy.size() < 3) {
        throw std::domain_error("power-law fit undefined: fewer than 3 populated bins in range");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(xy.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::domain_error("power-law fit undefined: degenerate x range");
    SlopeFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.exponent * sx) / n;
    double ss = 0;
    for (auto [x, y] : xy) {
        double r = y - (fit.intercept + fit.exponent * x);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.x_min = x_min;
    fit.x_max = x_max;
    fit.points_used = static_cast<int>(xy.size());
    return fit;
}

namespace {

/// Hurwitz zeta zeta(a, x0) = sum_{k>=x0} k^-a via truncated sum plus
/// Euler-Maclaurin tail, together with its derivative in a.
struct ZetaPair {
    double value;
    double dvalue;  // d/da (note: = -sum k^-a ln k)
};

ZetaPair hurwitz_with_derivative(double a, std::uint64_t x0) {
    const std::uint64_t cutoff = x0 + 2000;
    double v = 0, dv = 0;
    for (std::uint64_t k = x0; k < cutoff; ++k) {
        double lk = std::log(static_cast<double>(k));
        double t = std::exp(-a * lk);
        v += t;
        dv -= t * lk;
    }
    // Tail: integral_{cutoff}^inf x^-a dx = c^{1-a}/(a-1), plus half-term.
    double c = static_cast<double>(cutoff);
    double lc = std::log(c);
    double tail = std::exp((1.0 - a) * lc) / (a - 1.0);
    double dtail = -tail * (lc + 1.0 / (a - 1.0));
    double half = 0.5 * std::exp(-a * lc);
    v += tail + half;
    dv += dtail - half * lc;
    return {v, dv};
}

}  // namespace

double mle_exponent(const DegreeHistogram& hist, std::uint32_t x_min) {
    if (x_min < 1) throw std::invalid_argument("mle_exponent requires x_min >= 1");
    std::uint64_t n = 0;
    double sum_log = 0;
    for (std::uint64_t d = x_min; d < hist.counts.size(); ++d) {
        if (hist.counts[d] == 0) continue;
        n += hist.counts[d];
        sum_log += static_cast<double>(hist.counts[d]) * std::log(static_cast<double>(d));
    }
    if (n < 2) throw std::domain_error("mle_exponent: not enough observations");
    const double mean_log = sum_log / static_cast<double>(n);
    // Solve -zeta'(a,x_min)/zeta(a,x_min) == mean_log for a by bisection.
    auto excess = [&](double a) {
        auto z = hurwitz_with_derivative(a, x_min);
        return -z.dvalue / z.value - mean_log;
    };
    double lo = 1.0001, hi = 20.0;
    if (excess(lo) < 0.0) throw std::domain_error("mle_exponent: data too flat for a power law");
    if (excess(hi) > 0.0) return -hi;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return -0.5 * (lo + hi);
}

SlopeFit analyze_degree_power_law(const DegreeHistogram& hist, double ratio,
                                  double x_min, double x_max) {
    auto points = log_binned(hist, ratio);
    SlopeFit fit = fit_power_law_slope(points, x_min, x_max);
    try {
        fit.exponent_mle = mle_exponent(hist, static_cast<std::uint32_t>(std::ceil(x_min)));
    } catch (const std::domain_error&) {
        fit.exponent_mle = std::nullopt;
    }
    return fit;
}

std::vector<NodeId> largest_component(const Graph& g) {
    std::vector<std::uint32_t> comp(g.node_count(), UINT32_MAX);
    std::vector<NodeId> stack;
    std::uint32_t comp_id = 0;
    std::uint32_t best_id = 0;
    std::uint64_t best_size = 0;
    for (NodeId v0 = 0; v0 < g.node_count(); ++v0) {
        if (comp[v0] != UINT32_MAX) continue;
        std::uint64_t size = 0;
        stack.push_back(v0);
        comp[v0] = comp_id;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v)) {
                if (comp[w] == UINT32_MAX) {
                    comp[w] = comp_id;
                    stack.push_back(w);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_id = comp_id;
        }
        ++comp_id;
    }
    std::vector<NodeId> out;
    out.reserve(best_size);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (comp[v] == best_id) out.push_back(v);
    }
    return out;
}

namespace {

/// BFS from src over the component; appends distance counts into hist and
/// returns the eccentricity within the component.
std::uint32_t bfs_distances(const Graph& g, NodeId src, std::vector<std::uint32_t>& dist,
                            std::vector<NodeId>& frontier, std::vector<NodeId>& next,
                            std::vector<std::uint64_t>& hist) {
    dist[src] = 0;
    frontier.clear();
    frontier.push_back(src);
    std::uint32_t level = 0;
    while (!frontier.empty()) {
        next.clear();
        ++level;
        for (NodeId v : frontier) {
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] == UINT32_MAX) {
                    dist[w] = level;
                    next.push_back(w);
                }
            }
        }
        if (!next.empty()) {
            if (level >= hist.size()) hist.resize(level + 1, 0);
            hist[level] += next.size();
        }
        std::swap(frontier, next);
    }
    return level - 1;
}

}  // namespace

DiameterReport diameter(const Graph& g, std::optional<std::uint32_t> sample_sources,
                        std::uint64_t seed) {
    if (g.node_count() == 0) throw std::invalid_argument("diameter of empty graph");
    auto comp = largest_component(g);
    DiameterReport report;
    report.component_size = static_cast<NodeId>(comp.size());
    report.exact = !sample_sources.has_value();
    if (comp.size() == 1) {
        report.sample_pairs = 0;
        return report;
    }

    std::vector<NodeId> sources;
    if (sample_sources) {
        if (*sample_sources < 1) throw std::invalid_argument("need at least one BFS source");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, comp.size() - 1);
        std::uint32_t k = std::min<std::uint64_t>(*sample_sources, comp.size());
        for (std::uint32_t i = 0; i < k; ++i) sources.push_back(comp[pick(rng)]);
    } else {
        sources = comp;
    }

    std::vector<std::uint32_t> dist(g.node_count(), UINT32_MAX);
    std::vector<NodeId> frontier, next;
    std::vector<std::uint64_t> hist;  // hist[h] = #ordered pairs at distance h
    std::uint32_t diam = 0;
    for (NodeId src : sources) {
        std::fill(dist.begin(), dist.end(), UINT32_MAX);
        diam = std::max(diam, bfs_distances(g, src, dist, frontier, next, hist));
    }
    report.diameter = diam;

    std::uint64_t total = 0;
    for (std::uint64_t c : hist) total += c;
    report.sample_pairs = total;
    std::uint64_t need = static_cast<std::uint64_t>(std::ceil(0.9 * static_cast<double>(total)));
    std::uint64_t cum = 0;
    for (std::uint32_t h = 1; h < hist.size(); ++h) {
        std::uint64_t prev = cum;
        cum += hist[h];
        if (cum >= need) {
            double frac = (0.9 * static_cast<double>(total) - static_cast<double>(prev)) /
                          static_cast<double>(hist[h]);
            report.effective_diameter_90 = (h - 1) + std::max(0.0, frac);
            break;
        }
    }
    return report;
}

std::vector<std::pair<std::size_t, double>> densification_series(
    std::span<const InfectedGraph> snapshots) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(snapshots.size());
    for (const auto& snap : snapshots) {
        std::size_t v = snap.subgraph.node_count();
        double avg = v == 0 ? 0.0
                            : 2.0 * static_cast<double>(snap.subgraph.edge_count()) /
                                  static_cast<double>(v);
        out.emplace_back(v, avg);
    }
    return out;
}

RationalCut conductance_rational(const Graph& g, const VertexSet& s) {
    if (s.universe() != g.node_count()) {
        throw std::invalid_argument("vertex set universe does not match graph");
    }
    if (s.empty() || s.size() == g.node_count()) {
        throw std::invalid_argument("conductance requires a proper nonempty subset");
    }
    std::vector<std::uint8_t> in_s(g.node_count(), 0);
    for (NodeId v : s.members()) in_s[v] = 1;
    std::uint64_t cut = 0, vol = 0;
    for (NodeId v : s.members()) {
        vol += g.degree(v);
        for (NodeId w : g.neighbors(v)) {
            if (!in_s[w]) ++cut;
        }
    }
    std::uint64_t vol_rest = g.total_degree() - vol;
    std::uint64_t min_vol = std::min(vol, vol_rest);
    if (min_vol == 0) {
        throw std::domain_error("conductance undefined: one side has zero total degree");
    }
    return {cut, min_vol};
}

double conductance(const Graph& g, const VertexSet& s) {
    return conductance_rational(g, s).value();
}

}  // namespace contagion
