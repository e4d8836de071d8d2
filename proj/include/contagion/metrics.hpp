#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/graph.hpp"

namespace contagion {

/// Degree counts indexed by degree. sum(counts) == node_count and
/// sum(degree * count) == 2 * edge_count.
struct DegreeHistogram {
    std::vector<std::uint64_t> counts;  // counts[d] = #vertices of degree d
    std::uint64_t node_count = 0;
    std::uint64_t total_degree = 0;

    static DegreeHistogram of(const Graph& g);
    /// Builds from (degree, count) pairs, e.g. parsed CSVs or cliquish
    /// degrees.
    static DegreeHistogram from_counts(const std::map<std::uint32_t, std::uint64_t>& counts);
    void add(const DegreeHistogram& other);
    std::uint64_t max_degree() const { return counts.empty() ? 0 : counts.size() - 1; }
};

/// One multiplicative bin over integer degrees [lo, hi).
struct BinnedPoint {
    double center = 0.0;   // geometric mean of the first and last integer
    double density = 0.0;  // count / (hi - lo), per unit degree
    std::uint64_t count = 0;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

/// Multiplicative binning of the histogram over degrees >= 1 (degree 0 is
/// not representable on a log axis). Bin edges grow by `ratio` but never by
/// less than one integer; empty bins are omitted.
std::vector<BinnedPoint> log_binned(const DegreeHistogram& hist, double ratio);

struct SlopeFit {
    double exponent = 0.0;   // least-squares slope in log-log space
    double intercept = 0.0;  // ln(density) at ln(degree) = 0
    double rms_residual = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    int points_used = 0;
    std::string method = "logbin-ls";
    std::optional<double> exponent_mle;  // discrete MLE cross-check
};

/// Least-squares line through (ln center, ln density) for binned points with
/// centers inside [x_min, x_max]. Throws std::domain_error when fewer than
/// three populated bins fall in range (e.g. regular graphs).
SlopeFit fit_power_law_slope(std::span<const BinnedPoint> points, double x_min,
                             double x_max);

/// Exact discrete power-law MLE over raw degrees >= x_min (zeta-function
/// likelihood solved by bisection). Returns the exponent (negative).
double mle_exponent(const DegreeHistogram& hist, std::uint32_t x_min);

/// Convenience: bins, fits over [x_min, x_max], and attaches the MLE
/// cross-check.
SlopeFit analyze_degree_power_law(const DegreeHistogram& hist, double ratio,
                                  double x_min, double x_max);

struct DiameterReport {
    bool exact = false;
    std::uint32_t diameter = 0;
    double effective_diameter_90 = 0.0;
    std::uint64_t sample_pairs = 0;
    NodeId component_size = 0;  // analysis runs on the largest component
};

/// Exact mode (sample_sources empty) runs BFS from every vertex of the
/// largest component; sampled mode from `k` uniform sources, making the
/// diameter a lower bound. The 90% effective diameter interpolates the
/// pairwise-distance distribution.
DiameterReport diameter(const Graph& g, std::optional<std::uint32_t> sample_sources,
                        std::uint64_t seed = 0);

/// (|V_H|, 2|E_H|/|V_H|) per snapshot.
std::vector<std::pair<std::size_t, double>> densification_series(
    std::span<const InfectedGraph> snapshots);

/// Conductance as an exact integer ratio: cut size over the smaller side's
/// total degree.
struct RationalCut {
    std::uint64_t cut = 0;
    std::uint64_t min_side_volume = 0;
    double value() const {
        return static_cast<double>(cut) / static_cast<double>(min_side_volume);
    }
};

/// Throws std::invalid_argument for empty/full sets, std::domain_error when
/// the smaller side has zero total degree.
RationalCut conductance_rational(const Graph& g, const VertexSet& s);
double conductance(const Graph& g, const VertexSet& s);

/// Largest-component vertex list (ascending IDs).
std::vector<NodeId> largest_component(const Graph& g);

}  // namespace contagion
