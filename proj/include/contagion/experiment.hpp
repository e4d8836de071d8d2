#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/graph.hpp"
#include "contagion/metrics.hpp"
#include "contagion/ncp.hpp"

namespace contagion {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kPrngId = "std::mt19937_64";
inline constexpr const char* kOutputRootEnv = "CONTAGION_LAB_OUTPUT_ROOT";

enum class GeneratorModel { ws, pc, pcm, er, pa, complete };
std::string to_string(GeneratorModel model);
GeneratorModel generator_model_from_string(const std::string& name);

struct GeneratorSpec {
    GeneratorModel model = GeneratorModel::ws;
    NodeId n = 0;
    NodeId d = 0;
    NodeId k = 0;     // pcm clique size
    double r = 0.0;   // rewiring probability
    std::optional<std::uint64_t> seed;  // defaults to base_seed
};

enum class MetricScope { none, snapshots, underlying, both };

struct FitSpec {
    double x_min = 3.0;
    double x_max = 80.0;
    double ratio = 1.1;
};

struct MetricsSelection {
    MetricScope degrees = MetricScope::none;
    std::optional<FitSpec> fit;
    MetricScope ncp = MetricScope::none;
    std::optional<std::size_t> ncp_snapshot_size;  // set by `ncp = size:<k>`
    int ncp_seeds = 32;
    std::optional<std::uint32_t> diameter_samples;  // nullopt when diameter off
    bool diameter_exact = false;
    bool densify = false;
    bool occupancy = false;
};

/// One reproducible pipeline: generate -> cascade (with snapshots) ->
/// metrics -> CSVs. Run i uses cascade seed base_seed + i.
struct ExperimentConfig {
    std::string name;
    GeneratorSpec generator;
    CascadeParams cascade;
    SnapshotSchedule snapshots;
    MetricsSelection metrics;
    int run_count = 1;
    std::uint64_t base_seed = 0;
    int workers = 0;  // 0 = hardware concurrency
    std::filesystem::path output_dir;

    std::uint64_t generator_seed() const {
        return generator.seed.value_or(base_seed);
    }
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Every violated precondition, one message per violation; empty means valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Canonical text form: parse(dump(c)) reproduces c, and the manifest hash
/// is taken over this text.
std::string dump_config(const ExperimentConfig& config);

/// Bundled figure configs by name (fig1b-desk, fig2-desk, ...).
const std::map<std::string, std::string>& bundled_configs();

struct RunRecord {
    int index = 0;
    std::uint64_t seed = 0;
    bool stalled = false;
    bool failed = false;
    std::string error;
    std::vector<std::size_t> snapshot_sizes;
    std::uint64_t rounds = 0;
    std::vector<std::string> files;  // relative to the experiment directory
};

struct Manifest {
    std::string config_name;
    std::string config_hash;
    std::string config_text;
    std::uint64_t base_seed = 0;
    std::uint64_t generator_seed = 0;
    std::vector<RunRecord> runs;
    std::vector<std::string> underlying_files;
    std::vector<std::string> aggregate_files;
    std::vector<std::string> plot_files;
    bool all_ok = false;

    std::string to_json() const;
};

/// Executes the full pipeline; returns the manifest (also written to
/// manifest.json). Runs execute in parallel up to the worker count; a
/// failing run is recorded without aborting its siblings.
Manifest run_experiment(const ExperimentConfig& config);

/// Merges degree CSVs (schema degree,count) into one log-binned plot table
/// with a density column per input and an optional guideline column from
/// the fit. Returns the output path.
std::filesystem::path emit_degree_plot_data(
    const std::vector<std::filesystem::path>& degree_csvs,
    const std::vector<std::string>& labels, double ratio,
    const std::optional<SlopeFit>& fit, const std::filesystem::path& out_path);

/// Merges NCP CSVs (schema bin_size,conductance,witness_size,method) into a
/// table keyed by bin size with one column per input.
std::filesystem::path emit_ncp_plot_data(
    const std::vector<std::filesystem::path>& ncp_csvs,
    const std::vector<std::string>& labels, const std::filesystem::path& out_path);

/// Merges per-run series CSVs (diameter.csv or densify.csv) into one table
/// keyed by size with a column per run.
std::filesystem::path emit_series_plot_data(
    const std::vector<std::filesystem::path>& csvs,
    const std::vector<std::string>& labels, const std::string& input_header,
    const std::string& value_column, const std::filesystem::path& out_path);

/// FNV-1a 64 over the canonical config text, hex-encoded.
std::string config_hash(const std::string& canonical_text);

/// Sidecar metadata (model, params, seed, rounds, sizes, stall flag, and the
/// mapping back to underlying IDs) as pretty JSON.
void write_snapshot_meta(const std::filesystem::path& path, const InfectedGraph& snap);

}  // namespace contagion
