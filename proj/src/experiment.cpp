#include "contagion/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "contagion/csv.hpp"
#include "contagion/generators.hpp"
#include "contagion/oracles.hpp"

namespace contagion {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(GeneratorModel model) {
    switch (model) {
        case GeneratorModel::ws: return "ws";
        case GeneratorModel::pc: return "pc";
        case GeneratorModel::pcm: return "pcm";
        case GeneratorModel::er: return "er";
        case GeneratorModel::pa: return "pa";
        case GeneratorModel::complete: return "complete";
    }
    return "?";
}

GeneratorModel generator_model_from_string(const std::string& name) {
    if (name == "ws") return GeneratorModel::ws;
    if (name == "pc") return GeneratorModel::pc;
    if (name == "pcm") return GeneratorModel::pcm;
    if (name == "er") return GeneratorModel::er;
    if (name == "pa") return GeneratorModel::pa;
    if (name == "complete") return GeneratorModel::complete;
    throw std::invalid_argument("unknown generator model: " + name);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string scope_to_string(MetricScope s) {
    switch (s) {
        case MetricScope::none: return "none";
        case MetricScope::snapshots: return "snapshots";
        case MetricScope::underlying: return "underlying";
        case MetricScope::both: return "both";
    }
    return "?";
}

struct ConfigReader {
    std::vector<std::string> errors;

    std::uint64_t u64(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            auto v = std::stoull(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            errors.push_back(key + ": expected a non-negative integer, got '" + value + "'");
            return 0;
        }
    }

    double real(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            errors.push_back(key + ": expected a number, got '" + value + "'");
            return 0.0;
        }
    }

    bool boolean(const std::string& key, const std::string& value) {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        errors.push_back(key + ": expected true/false, got '" + value + "'");
        return false;
    }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    ConfigReader reader;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                reader.errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            reader.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string qual = section.empty() ? key : section + "." + key;

        if (qual == "name") {
            cfg.name = value;
        } else if (qual == "generator.model") {
            try {
                cfg.generator.model = generator_model_from_string(value);
            } catch (const std::exception& e) {
                reader.errors.push_back(e.what());
            }
        } else if (qual == "generator.n") {
            cfg.generator.n = static_cast<NodeId>(reader.u64(qual, value));
        } else if (qual == "generator.d") {
            cfg.generator.d = static_cast<NodeId>(reader.u64(qual, value));
        } else if (qual == "generator.k") {
            cfg.generator.k = static_cast<NodeId>(reader.u64(qual, value));
        } else if (qual == "generator.r") {
            cfg.generator.r = reader.real(qual, value);
        } else if (qual == "generator.seed") {
            cfg.generator.seed = reader.u64(qual, value);
        } else if (qual == "cascade.model") {
            try {
                cfg.cascade.model = cascade_model_from_string(value);
            } catch (const std::exception& e) {
                reader.errors.push_back(e.what());
            }
        } else if (qual == "cascade.m") {
            cfg.cascade.m = reader.u64(qual, value);
        } else if (qual == "cascade.alpha") {
            cfg.cascade.alpha = reader.real(qual, value);
        } else if (qual == "cascade.beta") {
            cfg.cascade.beta = reader.real(qual, value);
        } else if (qual == "cascade.gamma") {
            cfg.cascade.gamma = reader.real(qual, value);
        } else if (qual == "cascade.s") {
            cfg.cascade.s = static_cast<NodeId>(reader.u64(qual, value));
        } else if (qual == "cascade.p") {
            cfg.cascade.p = reader.real(qual, value);
        } else if (qual == "snapshots.sizes") {
            cfg.snapshots.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.snapshots.push_back(reader.u64(qual, item));
            }
        } else if (qual == "metrics.degrees") {
            if (value == "none") cfg.metrics.degrees = MetricScope::none;
            else if (value == "snapshots") cfg.metrics.degrees = MetricScope::snapshots;
            else if (value == "underlying") cfg.metrics.degrees = MetricScope::underlying;
            else if (value == "both") cfg.metrics.degrees = MetricScope::both;
            else reader.errors.push_back("metrics.degrees: unknown scope '" + value + "'");
        } else if (qual == "metrics.fit") {
            FitSpec fit;
            if (std::sscanf(value.c_str(), "%lf:%lf:%lf", &fit.x_min, &fit.x_max,
                            &fit.ratio) == 3) {
                cfg.metrics.fit = fit;
            } else {
                reader.errors.push_back("metrics.fit: expected x_min:x_max:ratio, got '" + value + "'");
            }
        } else if (qual == "metrics.ncp") {
            if (value == "none") cfg.metrics.ncp = MetricScope::none;
            else if (value == "final") cfg.metrics.ncp = MetricScope::snapshots;
            else if (value == "underlying") cfg.metrics.ncp = MetricScope::underlying;
            else if (value == "both") cfg.metrics.ncp = MetricScope::both;
            else if (value.rfind("size:", 0) == 0) {
                cfg.metrics.ncp = MetricScope::snapshots;
                cfg.metrics.ncp_snapshot_size = reader.u64(qual, value.substr(5));
            } else {
                reader.errors.push_back("metrics.ncp: unknown value '" + value + "'");
            }
        } else if (qual == "metrics.ncp_seeds") {
            cfg.metrics.ncp_seeds = static_cast<int>(reader.u64(qual, value));
        } else if (qual == "metrics.diameter") {
            if (value == "none") {
                cfg.metrics.diameter_samples.reset();
                cfg.metrics.diameter_exact = false;
            } else if (value == "exact") {
                cfg.metrics.diameter_exact = true;
                cfg.metrics.diameter_samples.reset();
            } else if (value.rfind("sampled:", 0) == 0) {
                cfg.metrics.diameter_exact = false;
                cfg.metrics.diameter_samples =
                    static_cast<std::uint32_t>(reader.u64(qual, value.substr(8)));
            } else {
                reader.errors.push_back("metrics.diameter: expected none|exact|sampled:<k>");
            }
        } else if (qual == "metrics.densify") {
            cfg.metrics.densify = reader.boolean(qual, value);
        } else if (qual == "metrics.occupancy") {
            cfg.metrics.occupancy = reader.boolean(qual, value);
        } else if (qual == "run.count") {
            cfg.run_count = static_cast<int>(reader.u64(qual, value));
        } else if (qual == "run.base_seed") {
            cfg.base_seed = reader.u64(qual, value);
        } else if (qual == "run.workers") {
            cfg.workers = static_cast<int>(reader.u64(qual, value));
        } else if (qual == "run.output") {
            cfg.output_dir = value;
        } else {
            reader.errors.push_back("unknown config key: " + qual);
        }
    }
    if (!reader.errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : reader.errors) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> bad;
    const auto& g = cfg.generator;
    if (g.n < 1) bad.push_back("generator.n must be >= 1");
    switch (g.model) {
        case GeneratorModel::ws:
            if (g.d % 2 != 0 || g.d < 2 || g.d >= g.n)
                bad.push_back("ws requires even d with 2 <= d < n");
            break;
        case GeneratorModel::pc:
            if (g.d < 2 || g.n % std::max<NodeId>(g.d, 1) != 0)
                bad.push_back("pc requires d >= 2 dividing n");
            break;
        case GeneratorModel::pcm: {
            if (g.k < 1 || g.n % std::max<NodeId>(g.k, 1) != 0)
                bad.push_back("pcm requires k >= 1 dividing n");
            double rk = g.r * g.k;
            if (std::abs(rk - std::round(rk)) > 1e-9)
                bad.push_back("pcm requires r*k integral");
            else if (rk >= g.n)
                bad.push_back("pcm requires r*k < n");
            break;
        }
        case GeneratorModel::er:
            if (g.n >= 2 && g.d > g.n - 1) bad.push_back("er requires d <= n-1");
            break;
        case GeneratorModel::pa:
            if (g.d < 2 || g.d % 2 != 0) bad.push_back("pa requires even d >= 2");
            else if (g.n < g.d / 2 + 1) bad.push_back("pa requires n >= d/2 + 1");
            break;
        case GeneratorModel::complete:
            break;
    }
    if ((g.model == GeneratorModel::ws || g.model == GeneratorModel::pc ||
         g.model == GeneratorModel::pcm) &&
        (g.r < 0.0 || g.r > 1.0)) {
        bad.push_back("generator.r must lie in [0,1]");
    }

    const auto& c = cfg.cascade;
    if (c.model == CascadeModel::forest_fire) {
        bad.push_back("experiment configs drive transmission models; run forest fire via the cascade command");
    } else {
        try {
            c.validate(g.n);
        } catch (const std::exception& e) {
            bad.push_back(e.what());
        }
    }
    try {
        validate_schedule(cfg.snapshots, c.m);
    } catch (const std::exception& e) {
        bad.push_back(e.what());
    }

    const auto& m = cfg.metrics;
    if (m.fit) {
        if (m.fit->x_min < 1) bad.push_back("metrics.fit x_min must be >= 1");
        if (m.fit->x_max <= m.fit->x_min) bad.push_back("metrics.fit needs x_max > x_min");
        if (m.fit->ratio <= 1.0) bad.push_back("metrics.fit ratio must exceed 1");
    }
    if (m.ncp_seeds < 1) bad.push_back("metrics.ncp_seeds must be >= 1");
    if (m.ncp_snapshot_size &&
        std::find(cfg.snapshots.begin(), cfg.snapshots.end(), *m.ncp_snapshot_size) ==
            cfg.snapshots.end()) {
        bad.push_back("metrics.ncp size target is not a snapshot checkpoint");
    }
    if (m.diameter_samples && *m.diameter_samples < 1)
        bad.push_back("metrics.diameter sample count must be >= 1");
    if (m.occupancy && g.model != GeneratorModel::pc && g.model != GeneratorModel::pcm)
        bad.push_back("metrics.occupancy requires a pc or pcm generator");

    if (cfg.run_count < 1) bad.push_back("run.count must be >= 1");
    if (cfg.workers < 0) bad.push_back("run.workers must be >= 0");
    return bad;
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "name = " << cfg.name << "\n";
    out << "[generator]\n";
    out << "model = " << to_string(cfg.generator.model) << "\n";
    out << "n = " << cfg.generator.n << "\n";
    out << "d = " << cfg.generator.d << "\n";
    out << "k = " << cfg.generator.k << "\n";
    out << "r = " << fmt_double(cfg.generator.r) << "\n";
    if (cfg.generator.seed) out << "seed = " << *cfg.generator.seed << "\n";
    out << "[cascade]\n";
    out << "model = " << to_string(cfg.cascade.model) << "\n";
    out << "m = " << cfg.cascade.m << "\n";
    out << "alpha = " << fmt_double(cfg.cascade.alpha) << "\n";
    out << "beta = " << fmt_double(cfg.cascade.beta) << "\n";
    out << "gamma = " << fmt_double(cfg.cascade.gamma) << "\n";
    out << "s = " << cfg.cascade.s << "\n";
    out << "p = " << fmt_double(cfg.cascade.p) << "\n";
    out << "[snapshots]\n";
    out << "sizes = ";
    for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) {
        if (i) out << ",";
        out << cfg.snapshots[i];
    }
    out << "\n[metrics]\n";
    out << "degrees = " << scope_to_string(cfg.metrics.degrees) << "\n";
    if (cfg.metrics.fit) {
        out << "fit = " << fmt_double(cfg.metrics.fit->x_min) << ":"
            << fmt_double(cfg.metrics.fit->x_max) << ":" << fmt_double(cfg.metrics.fit->ratio)
            << "\n";
    }
    if (cfg.metrics.ncp_snapshot_size) {
        out << "ncp = size:" << *cfg.metrics.ncp_snapshot_size << "\n";
    } else if (cfg.metrics.ncp == MetricScope::snapshots) {
        out << "ncp = final\n";
    } else {
        out << "ncp = " << scope_to_string(cfg.metrics.ncp) << "\n";
    }
    out << "ncp_seeds = " << cfg.metrics.ncp_seeds << "\n";
    if (cfg.metrics.diameter_exact) {
        out << "diameter = exact\n";
    } else if (cfg.metrics.diameter_samples) {
        out << "diameter = sampled:" << *cfg.metrics.diameter_samples << "\n";
    } else {
        out << "diameter = none\n";
    }
    out << "densify = " << (cfg.metrics.densify ? "true" : "false") << "\n";
    out << "occupancy = " << (cfg.metrics.occupancy ? "true" : "false") << "\n";
    out << "[run]\n";
    out << "count = " << cfg.run_count << "\n";
    out << "base_seed = " << cfg.base_seed << "\n";
    out << "workers = " << cfg.workers << "\n";
    return out.str();
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

Graph build_generator(const GeneratorSpec& spec, std::uint64_t seed) {
    switch (spec.model) {
        case GeneratorModel::ws:
            return watts_strogatz(spec.n, spec.d, spec.r, seed);
        case GeneratorModel::pc:
            return planted_community(spec.n, spec.d, spec.r, seed);
        case GeneratorModel::pcm:
            return planted_clique_model(spec.n, spec.k, spec.r, seed);
        case GeneratorModel::er:
            return baseline_graph(BaselineKind::erdos_renyi, spec.n, spec.d, seed);
        case GeneratorModel::pa:
            return baseline_graph(BaselineKind::preferential_attachment, spec.n, spec.d, seed);
        case GeneratorModel::complete:
            return baseline_graph(BaselineKind::complete, spec.n, spec.d, seed);
    }
    throw std::invalid_argument("unknown generator model");
}

std::vector<CsvRow> degree_rows(const DegreeHistogram& hist) {
    std::vector<CsvRow> rows;
    for (std::size_t d = 0; d < hist.counts.size(); ++d) {
        if (hist.counts[d] == 0) continue;
        rows.push_back({std::to_string(d), std::to_string(hist.counts[d])});
    }
    return rows;
}

std::vector<CsvRow> ncp_rows(const NcpCurve& curve) {
    std::vector<CsvRow> rows;
    for (const auto& bin : curve.bins) {
        rows.push_back({std::to_string(bin.size), fmt_double(bin.conductance),
                        std::to_string(bin.witness.size()), bin.method});
    }
    return rows;
}

json params_json(const CascadeParams& p) {
    json j;
    j["model"] = to_string(p.model);
    j["m"] = p.m;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["s"] = p.s;
    j["p"] = p.p;
    return j;
}

}  // namespace

void write_snapshot_meta(const fs::path& path, const InfectedGraph& snap) {
    json j;
    j["model"] = to_string(snap.model);
    j["params"] = params_json(snap.params);
    j["seed"] = snap.seed;
    j["rounds"] = snap.rounds_elapsed;
    j["target_size"] = snap.target_size;
    j["actual_size"] = snap.size();
    j["edge_count"] = snap.subgraph.edge_count();
    j["stalled"] = snap.stalled;
    j["exploration_edge_count"] = snap.exploration_edges.size();
    j["to_underlying"] = snap.to_underlying;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

namespace {

NcpConfig ncp_config_for(const ExperimentConfig& cfg, std::uint64_t seed) {
    NcpConfig nc;
    nc.seed_count = cfg.metrics.ncp_seeds;
    nc.seed = seed;
    return nc;
}

struct RunOutputs {
    RunRecord record;
    std::map<std::size_t, DegreeHistogram> degrees;  // by snapshot target
    OccupancyHistogram occupancy;
    bool has_occupancy = false;
};

std::string run_dir_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%04d", index);
    return buf;
}

}  // namespace

Manifest run_experiment(const ExperimentConfig& cfg) {
    auto violations = validate_config(cfg);
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::invalid_argument(msg);
    }
    if (cfg.output_dir.empty()) {
        throw std::invalid_argument("experiment output directory is not set");
    }
    const fs::path out_root = cfg.output_dir;
    fs::create_directories(out_root);

    Manifest manifest;
    manifest.config_name = cfg.name;
    manifest.config_text = dump_config(cfg);
    manifest.config_hash = config_hash(manifest.config_text);
    manifest.base_seed = cfg.base_seed;
    manifest.generator_seed = cfg.generator_seed();

    const Graph graph = build_generator(cfg.generator, cfg.generator_seed());

    // Underlying-graph metrics, once, before the run farm starts.
    const auto& sel = cfg.metrics;
    if (sel.degrees == MetricScope::underlying || sel.degrees == MetricScope::both ||
        sel.ncp == MetricScope::underlying || sel.ncp == MetricScope::both) {
        fs::create_directories(out_root / "underlying");
    }
    DegreeHistogram underlying_degrees;
    bool have_underlying_degrees = false;
    if (sel.degrees == MetricScope::underlying || sel.degrees == MetricScope::both) {
        underlying_degrees = DegreeHistogram::of(graph);
        have_underlying_degrees = true;
        write_csv(out_root / "underlying/degrees.csv", "degree,count",
                  degree_rows(underlying_degrees));
        manifest.underlying_files.push_back("underlying/degrees.csv");
    }
    if (sel.ncp == MetricScope::underlying || sel.ncp == MetricScope::both) {
        auto curve = ncp_heuristic(graph, ncp_config_for(cfg, cfg.generator_seed()));
        write_csv(out_root / "underlying/ncp.csv", "bin_size,conductance,witness_size,method",
                  ncp_rows(curve));
        manifest.underlying_files.push_back("underlying/ncp.csv");
    }

    // Run farm.
    std::vector<RunOutputs> outputs(cfg.run_count);
    std::atomic<int> next_run{0};
    auto do_run = [&](int index) {
        RunOutputs out;
        out.record.index = index;
        const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(index);
        out.record.seed = run_seed;
        const fs::path run_dir = out_root / run_dir_name(index);
        fs::create_directories(run_dir);
        auto rel = [&](const fs::path& p) { return fs::relative(p, out_root).generic_string(); };

        auto snapshots = run_with_snapshots(graph, cfg.cascade, cfg.snapshots, run_seed);
        std::vector<CsvRow> densify_rows, diameter_rows;
        for (const auto& snap : snapshots) {
            out.record.stalled |= snap.stalled;
            out.record.snapshot_sizes.push_back(snap.size());
            out.record.rounds = snap.rounds_elapsed;
            std::string stem = "snap_" + std::to_string(snap.target_size) +
                               (snap.stalled ? "_partial" : "");
            write_edge_list(snap.subgraph, run_dir / (stem + ".edges"));
            write_snapshot_meta(run_dir / (stem + ".meta.json"), snap);
            out.record.files.push_back(rel(run_dir / (stem + ".edges")));
            out.record.files.push_back(rel(run_dir / (stem + ".meta.json")));

            if (sel.degrees == MetricScope::snapshots || sel.degrees == MetricScope::both) {
                auto hist = DegreeHistogram::of(snap.subgraph);
                auto path = run_dir / ("degrees_" + std::to_string(snap.target_size) + ".csv");
                write_csv(path, "degree,count", degree_rows(hist));
                out.record.files.push_back(rel(path));
                if (!snap.stalled) out.degrees[snap.target_size] = std::move(hist);
            }
            if (sel.densify) {
                double avg = snap.size() == 0 ? 0.0
                                              : 2.0 * static_cast<double>(snap.subgraph.edge_count()) /
                                                    static_cast<double>(snap.size());
                densify_rows.push_back({std::to_string(snap.size()), fmt_double(avg)});
            }
            if (sel.diameter_exact || sel.diameter_samples) {
                auto report = diameter(snap.subgraph,
                                       sel.diameter_exact
                                           ? std::optional<std::uint32_t>{}
                                           : sel.diameter_samples,
                                       run_seed);
                diameter_rows.push_back({std::to_string(snap.size()),
                                         std::to_string(report.diameter),
                                         fmt_double(report.effective_diameter_90)});
            }
        }
        if (sel.densify) {
            write_csv(run_dir / "densify.csv", "size,avg_degree", densify_rows);
            out.record.files.push_back(rel(run_dir / "densify.csv"));
        }
        if (sel.diameter_exact || sel.diameter_samples) {
            write_csv(run_dir / "diameter.csv", "size,diameter,effective_diameter_90",
                      diameter_rows);
            out.record.files.push_back(rel(run_dir / "diameter.csv"));
        }
        if (sel.ncp == MetricScope::snapshots || sel.ncp == MetricScope::both) {
            std::size_t want = sel.ncp_snapshot_size.value_or(cfg.snapshots.back());
            for (const auto& snap : snapshots) {
                if (snap.target_size == want && !snap.stalled) {
                    auto curve = ncp_heuristic(snap.subgraph, ncp_config_for(cfg, run_seed));
                    auto path = run_dir / ("ncp_" + std::to_string(want) + ".csv");
                    write_csv(path, "bin_size,conductance,witness_size,method",
                              ncp_rows(curve));
                    out.record.files.push_back(rel(path));
                    break;
                }
            }
        }
        if (sel.occupancy && !snapshots.empty()) {
            const auto& last = snapshots.back();
            CliquePartition part{cfg.generator.n,
                                 cfg.generator.model == GeneratorModel::pcm ? cfg.generator.k
                                                                            : cfg.generator.d};
            auto infected = VertexSet::of(cfg.generator.n, last.to_underlying);
            out.occupancy = clique_occupancy(part, infected);
            out.has_occupancy = true;
            std::vector<CsvRow> occ_rows;
            for (const auto& [size, cliques] : out.occupancy.counts) {
                occ_rows.push_back({std::to_string(size), std::to_string(cliques)});
            }
            write_csv(run_dir / "occupancy.csv", "size,count", occ_rows);
            out.record.files.push_back(rel(run_dir / "occupancy.csv"));
        }
        return out;
    };

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.run_count));
    auto worker_loop = [&] {
        while (true) {
            int index = next_run.fetch_add(1);
            if (index >= cfg.run_count) break;
            try {
                outputs[index] = do_run(index);
            } catch (const std::exception& e) {
                outputs[index].record.index = index;
                outputs[index].record.seed = cfg.base_seed + static_cast<std::uint64_t>(index);
                outputs[index].record.failed = true;
                outputs[index].record.error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
        for (auto& t : pool) t.join();
    }

    // Aggregates across runs.
    fs::create_directories(out_root / "aggregate");
    auto agg_rel = [&](const fs::path& p) { return fs::relative(p, out_root).generic_string(); };
    std::map<std::size_t, DegreeHistogram> agg_degrees;
    for (const auto& out : outputs) {
        for (const auto& [target, hist] : out.degrees) agg_degrees[target].add(hist);
    }
    std::vector<std::pair<std::string, fs::path>> degree_plot_inputs;
    for (const auto& [target, hist] : agg_degrees) {
        auto path = out_root / "aggregate" / ("degrees_" + std::to_string(target) + ".csv");
        write_csv(path, "degree,count", degree_rows(hist));
        manifest.aggregate_files.push_back(agg_rel(path));
        degree_plot_inputs.emplace_back("snap_" + std::to_string(target), path);
    }

    OccupancyHistogram agg_occupancy;
    bool have_occupancy = false;
    DegreeHistogram cliquish;
    for (const auto& out : outputs) {
        if (!out.has_occupancy) continue;
        if (!have_occupancy) {
            agg_occupancy = out.occupancy;
            have_occupancy = true;
        } else {
            agg_occupancy.merge(out.occupancy);
        }
    }
    if (have_occupancy) {
        std::vector<CsvRow> rows;
        for (const auto& [size, cliques] : agg_occupancy.counts) {
            rows.push_back({std::to_string(size), std::to_string(cliques)});
        }
        auto occ_path = out_root / "aggregate/occupancy.csv";
        write_csv(occ_path, "size,count", rows);
        manifest.aggregate_files.push_back(agg_rel(occ_path));
        cliquish = cliquish_degree_histogram(agg_occupancy);
        auto cd_path = out_root / "aggregate/cliquish_degrees.csv";
        write_csv(cd_path, "degree,count", degree_rows(cliquish));
        manifest.aggregate_files.push_back(agg_rel(cd_path));
    }

    std::optional<SlopeFit> final_fit;
    if (sel.fit) {
        std::vector<CsvRow> fit_rows;
        auto add_fit = [&](const std::string& label, const DegreeHistogram& hist) {
            CsvRow row{label, "", "", "", "", "", "ok"};
            try {
                SlopeFit fit = analyze_degree_power_law(hist, sel.fit->ratio, sel.fit->x_min,
                                                        sel.fit->x_max);
                row[1] = fmt_double(fit.exponent);
                row[2] = fmt_double(fit.intercept);
                row[3] = fmt_double(fit.rms_residual);
                row[4] = std::to_string(fit.points_used);
                row[5] = fit.exponent_mle ? fmt_double(*fit.exponent_mle) : "";
                if (label == "snap_" + std::to_string(cfg.snapshots.back())) final_fit = fit;
            } catch (const std::domain_error&) {
                row[6] = "undefined";
            }
            fit_rows.push_back(std::move(row));
        };
        for (const auto& [target, hist] : agg_degrees) {
            add_fit("snap_" + std::to_string(target), hist);
        }
        if (have_underlying_degrees) add_fit("underlying", underlying_degrees);
        if (have_occupancy) add_fit("cliquish", cliquish);
        if (!fit_rows.empty()) {
            auto path = out_root / "aggregate/fit.csv";
            write_csv(path,
                      "label,exponent,intercept,rms_residual,points_used,exponent_mle,status",
                      fit_rows);
            manifest.aggregate_files.push_back(agg_rel(path));
        }
    }

    // Plot tables.
    fs::create_directories(out_root / "plots");
    if (!degree_plot_inputs.empty()) {
        std::vector<fs::path> paths;
        std::vector<std::string> labels;
        for (auto& [label, path] : degree_plot_inputs) {
            labels.push_back(label);
            paths.push_back(path);
        }
        if (have_underlying_degrees) {
            labels.push_back("underlying");
            paths.push_back(out_root / "underlying/degrees.csv");
        }
        double ratio = sel.fit ? sel.fit->ratio : 1.1;
        auto plot = emit_degree_plot_data(paths, labels, ratio, final_fit,
                                          out_root / "plots/degrees.csv");
        manifest.plot_files.push_back(agg_rel(plot));
    }
    {
        std::vector<fs::path> ncp_paths;
        std::vector<std::string> ncp_labels;
        if (sel.ncp == MetricScope::underlying || sel.ncp == MetricScope::both) {
            ncp_paths.push_back(out_root / "underlying/ncp.csv");
            ncp_labels.push_back("underlying");
        }
        if (sel.ncp == MetricScope::snapshots || sel.ncp == MetricScope::both) {
            std::size_t want = sel.ncp_snapshot_size.value_or(cfg.snapshots.back());
            for (const auto& out : outputs) {
                std::string name = run_dir_name(out.record.index) + "/ncp_" +
                                   std::to_string(want) + ".csv";
                if (fs::exists(out_root / name)) {
                    ncp_paths.push_back(out_root / name);
                    ncp_labels.push_back(run_dir_name(out.record.index));
                }
            }
        }
        if (!ncp_paths.empty()) {
            auto plot = emit_ncp_plot_data(ncp_paths, ncp_labels, out_root / "plots/ncp.csv");
            manifest.plot_files.push_back(agg_rel(plot));
        }
    }
    auto emit_series = [&](const std::string& file, const std::string& header,
                           const std::string& value_col, const std::string& plot_name) {
        std::vector<fs::path> paths;
        std::vector<std::string> labels;
        for (const auto& out : outputs) {
            fs::path p = out_root / run_dir_name(out.record.index) / file;
            if (fs::exists(p)) {
                paths.push_back(p);
                labels.push_back(run_dir_name(out.record.index));
            }
        }
        if (!paths.empty()) {
            auto plot = emit_series_plot_data(paths, labels, header, value_col,
                                              out_root / "plots" / plot_name);
            manifest.plot_files.push_back(agg_rel(plot));
        }
    };
    if (sel.densify) emit_series("densify.csv", "size,avg_degree", "avg_degree", "densify.csv");
    if (sel.diameter_exact || sel.diameter_samples) {
        emit_series("diameter.csv", "size,diameter,effective_diameter_90",
                    "effective_diameter_90", "diameter.csv");
    }

    manifest.all_ok = true;
    for (auto& out : outputs) {
        manifest.all_ok = manifest.all_ok && !out.record.failed && !out.record.stalled;
        manifest.runs.push_back(std::move(out.record));
    }

    std::ofstream mf(out_root / "manifest.json", std::ios::binary);
    mf << manifest.to_json() << "\n";
    return manifest;
}

std::string Manifest::to_json() const {
    json j;
    j["artifact"] = "contagion-lab";
    j["version"] = kVersion;
    j["prng"] = kPrngId;
    j["config_name"] = config_name;
    j["config_hash"] = config_hash;
    j["config_text"] = config_text;
    j["base_seed"] = base_seed;
    j["generator_seed"] = generator_seed;
    j["seed_rule"] = "run_seed = base_seed + run_index";
    j["all_ok"] = all_ok;
    j["underlying_files"] = underlying_files;
    j["aggregate_files"] = aggregate_files;
    j["plot_files"] = plot_files;
    json runs_json = json::array();
    for (const auto& r : runs) {
        json rj;
        rj["index"] = r.index;
        rj["seed"] = r.seed;
        rj["stalled"] = r.stalled;
        rj["failed"] = r.failed;
        if (r.failed) rj["error"] = r.error;
        rj["snapshot_sizes"] = r.snapshot_sizes;
        rj["rounds"] = r.rounds;
        rj["files"] = r.files;
        runs_json.push_back(rj);
    }
    j["runs"] = runs_json;
    return j.dump(2);
}

std::filesystem::path emit_degree_plot_data(
    const std::vector<fs::path>& degree_csvs, const std::vector<std::string>& labels,
    double ratio, const std::optional<SlopeFit>& fit, const fs::path& out_path) {
    if (degree_csvs.size() != labels.size()) {
        throw std::invalid_argument("emit_degree_plot_data: labels/paths size mismatch");
    }
    std::map<double, CsvRow> by_center;  // center -> partial row
    std::string header = "bin_center";
    for (std::size_t i = 0; i < degree_csvs.size(); ++i) {
        header += ",density_" + labels[i];
        auto rows = read_csv_checked(degree_csvs[i], "degree,count");
        std::map<std::uint32_t, std::uint64_t> counts;
        for (const auto& row : rows) {
            counts[static_cast<std::uint32_t>(std::stoul(row.at(0)))] += std::stoull(row.at(1));
        }
        auto hist = DegreeHistogram::from_counts(counts);
        for (const auto& point : log_binned(hist, ratio)) {
            auto& out_row = by_center[point.center];
            out_row.resize(degree_csvs.size() + 1);
            out_row[0] = fmt_double(point.center);
            out_row[i + 1] = fmt_double(point.density);
        }
    }
    if (fit) header += ",guideline";
    std::vector<CsvRow> rows;
    for (auto& [center, row] : by_center) {
        row.resize(degree_csvs.size() + 1);
        if (fit) {
            row.push_back(fmt_double(std::exp(fit->intercept) *
                                     std::pow(center, fit->exponent)));
        }
        rows.push_back(std::move(row));
    }
    write_csv(out_path, header, rows);
    return out_path;
}

std::filesystem::path emit_ncp_plot_data(const std::vector<fs::path>& ncp_csvs,
                                         const std::vector<std::string>& labels,
                                         const fs::path& out_path) {
    if (ncp_csvs.size() != labels.size()) {
        throw std::invalid_argument("emit_ncp_plot_data: labels/paths size mismatch");
    }
    std::map<std::uint64_t, CsvRow> by_size;
    std::string header = "size";
    for (std::size_t i = 0; i < ncp_csvs.size(); ++i) {
        header += "," + labels[i];
        auto rows = read_csv_checked(ncp_csvs[i], "bin_size,conductance,witness_size,method");
        for (const auto& row : rows) {
            auto& out_row = by_size[std::stoull(row.at(0))];
            out_row.resize(ncp_csvs.size() + 1);
            out_row[0] = row.at(0);
            out_row[i + 1] = row.at(1);
        }
    }
    std::vector<CsvRow> rows;
    for (auto& [size, row] : by_size) {
        row.resize(ncp_csvs.size() + 1);
        rows.push_back(std::move(row));
    }
    write_csv(out_path, header, rows);
    return out_path;
}

std::filesystem::path emit_series_plot_data(const std::vector<fs::path>& csvs,
                                            const std::vector<std::string>& labels,
                                            const std::string& input_header,
                                            const std::string& value_column,
                                            const fs::path& out_path) {
    if (csvs.size() != labels.size()) {
        throw std::invalid_argument("emit_series_plot_data: labels/paths size mismatch");
    }
    CsvRow header_cols;
    {
        std::istringstream in(input_header);
        std::string col;
        while (std::getline(in, col, ',')) header_cols.push_back(col);
    }
    auto value_idx = std::find(header_cols.begin(), header_cols.end(), value_column);
    if (value_idx == header_cols.end()) {
        throw std::invalid_argument("emit_series_plot_data: value column '" + value_column +
                                    "' not in schema '" + input_header + "'");
    }
    std::size_t vi = static_cast<std::size_t>(value_idx - header_cols.begin());

    std::map<std::uint64_t, CsvRow> by_size;
    std::string header = "size";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        header += "," + labels[i];
        auto rows = read_csv_checked(csvs[i], input_header);
        for (const auto& row : rows) {
            auto& out_row = by_size[std::stoull(row.at(0))];
            out_row.resize(csvs.size() + 1);
            out_row[0] = row.at(0);
            out_row[i + 1] = row.at(vi);
        }
    }
    std::vector<CsvRow> rows;
    for (auto& [size, row] : by_size) {
        row.resize(csvs.size() + 1);
        rows.push_back(std::move(row));
    }
    write_csv(out_path, header, rows);
    return out_path;
}

}  // namespace contagion
