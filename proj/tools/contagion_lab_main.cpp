// contagion-lab: generate potential networks, grow contagious networks over
// them, and measure degree / diameter / densification / NCP properties.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "contagion/cascade.hpp"
#include "contagion/csv.hpp"
#include "contagion/experiment.hpp"
#include "contagion/generators.hpp"
#include "contagion/metrics.hpp"
#include "contagion/ncp.hpp"
#include "contagion/oracles.hpp"

namespace fs = std::filesystem;
using namespace contagion;

namespace {

fs::path resolve_out(const std::string& out) {
    if (!out.empty()) return out;
    if (const char* root = std::getenv(kOutputRootEnv)) return root;
    return ".";
}

std::vector<CsvRow> degree_rows(const DegreeHistogram& hist) {
    std::vector<CsvRow> rows;
    for (std::size_t d = 0; d < hist.counts.size(); ++d) {
        if (hist.counts[d] > 0) rows.push_back({std::to_string(d), std::to_string(hist.counts[d])});
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

int cmd_generate(const std::string& model, NodeId n, NodeId d, NodeId k, double r,
                 std::uint64_t seed, const std::string& out) {
    Graph g;
    if (model == "ws") {
        g = watts_strogatz(n, d, r, seed);
    } else if (model == "pc") {
        g = planted_community(n, d, r, seed);
    } else if (model == "pcm") {
        g = planted_clique_model(n, k, r, seed);
    } else if (model == "er" || model == "pa" || model == "complete") {
        g = baseline_graph(baseline_kind_from_string(model), n, d, seed);
    } else {
        throw std::invalid_argument("unknown generator model: " + model);
    }
    write_edge_list(g, out);
    std::cout << "wrote " << out << " (" << g.node_count() << " nodes, " << g.edge_count()
              << " edges)\n";
    return 0;
}

int cmd_cascade(const std::string& model_name, const std::string& graph_path, std::size_t m,
                double alpha, double beta, double gamma, NodeId s, double p,
                std::uint64_t seed, const std::string& snapshots_arg,
                const std::string& out) {
    fs::path out_dir = resolve_out(out);
    fs::create_directories(out_dir);

    SnapshotSchedule schedule;
    if (!snapshots_arg.empty()) {
        std::istringstream in(snapshots_arg);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (!item.empty()) schedule.push_back(std::stoull(item));
        }
    }
    if (schedule.empty()) schedule.push_back(m);

    CascadeModel model = cascade_model_from_string(model_name);
    std::vector<InfectedGraph> snaps;
    if (model == CascadeModel::forest_fire) {
        std::vector<Graph> graphs;
        forest_fire(static_cast<NodeId>(m), p, seed, {}, &schedule, &graphs);
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            InfectedGraph snap;
            snap.subgraph = std::move(graphs[i]);
            snap.to_underlying.resize(snap.subgraph.node_count());
            for (NodeId v = 0; v < snap.subgraph.node_count(); ++v) snap.to_underlying[v] = v;
            snap.model = CascadeModel::forest_fire;
            snap.params.model = CascadeModel::forest_fire;
            snap.params.m = m;
            snap.params.p = p;
            snap.seed = seed;
            snap.target_size = schedule[i];
            snap.rounds_elapsed = snap.subgraph.node_count();
            snaps.push_back(std::move(snap));
        }
    } else {
        Graph g = read_edge_list(graph_path);
        CascadeParams params;
        params.model = model;
        params.m = m;
        params.alpha = alpha;
        params.beta = beta;
        params.gamma = gamma;
        params.s = s;
        snaps = run_with_snapshots(g, params, schedule, seed);
    }

    bool stalled = false;
    for (const auto& snap : snaps) {
        std::string stem = "snap_" + std::to_string(snap.target_size) +
                           (snap.stalled ? "_partial" : "");
        write_edge_list(snap.subgraph, out_dir / (stem + ".edges"));
        write_snapshot_meta(out_dir / (stem + ".meta.json"), snap);
        stalled |= snap.stalled;
        std::cout << stem << ": " << snap.size() << " nodes, " << snap.subgraph.edge_count()
                  << " edges, " << snap.rounds_elapsed << " rounds"
                  << (snap.stalled ? " [stalled]" : "") << "\n";
    }
    return stalled ? 2 : 0;
}

int cmd_metrics(const std::vector<std::string>& graph_paths, bool degrees, bool ncp,
                const std::string& diameter_arg, bool densify, int ncp_seeds,
                std::uint64_t seed, const std::string& out) {
    fs::path out_dir = resolve_out(out);
    fs::create_directories(out_dir);
    const bool many = graph_paths.size() > 1;

    std::vector<CsvRow> densify_rows;
    std::vector<CsvRow> diameter_rows;
    for (std::size_t i = 0; i < graph_paths.size(); ++i) {
        Graph g = read_edge_list(graph_paths[i]);
        std::string suffix = many ? "_" + fs::path(graph_paths[i]).stem().string() : "";
        if (degrees) {
            write_csv(out_dir / ("degrees" + suffix + ".csv"), "degree,count",
                      degree_rows(DegreeHistogram::of(g)));
        }
        if (ncp) {
            NcpConfig config;
            config.seed = seed;
            config.seed_count = ncp_seeds;
            write_csv(out_dir / ("ncp" + suffix + ".csv"),
                      "bin_size,conductance,witness_size,method", ncp_rows(ncp_heuristic(g, config)));
        }
        if (!diameter_arg.empty() && diameter_arg != "none") {
            std::optional<std::uint32_t> samples;
            if (diameter_arg.rfind("sampled:", 0) == 0) {
                samples = static_cast<std::uint32_t>(std::stoul(diameter_arg.substr(8)));
            } else if (diameter_arg != "exact") {
                throw std::invalid_argument("--diameter expects exact or sampled:<k>");
            }
            auto report = diameter(g, samples, seed);
            diameter_rows.push_back({std::to_string(g.node_count()),
                                     std::to_string(report.diameter),
                                     fmt_double(report.effective_diameter_90)});
        }
        if (densify) {
            double avg = g.node_count() == 0
                             ? 0.0
                             : 2.0 * static_cast<double>(g.edge_count()) / g.node_count();
            densify_rows.push_back({std::to_string(g.node_count()), fmt_double(avg)});
        }
    }
    if (!diameter_rows.empty()) {
        write_csv(out_dir / "diameter.csv", "size,diameter,effective_diameter_90", diameter_rows);
    }
    if (densify) {
        write_csv(out_dir / "densify.csv", "size,avg_degree", densify_rows);
    }
    return 0;
}

int cmd_oracle_yule(double alpha, std::uint64_t steps, std::uint64_t seed, int runs,
                    const std::string& out) {
    fs::path out_dir = resolve_out(out);
    fs::create_directories(out_dir);
    OccupancyHistogram merged;
    for (int i = 0; i < runs; ++i) {
        auto h = yule_process({alpha, steps, seed + static_cast<std::uint64_t>(i)});
        if (i == 0) {
            merged = h;
        } else {
            merged.merge(h);
        }
    }
    std::vector<CsvRow> rows;
    for (const auto& [size, genera] : merged.counts) {
        rows.push_back({std::to_string(size), std::to_string(genera)});
    }
    write_csv(out_dir / "yule.csv", "size,count", rows);
    std::cout << "wrote yule.csv (" << merged.group_count() << " genera over " << runs
              << " runs)\n";
    return 0;
}

int cmd_oracle_occupancy(NodeId n, NodeId k, const std::string& ids_path,
                         const std::string& out) {
    fs::path out_dir = resolve_out(out);
    fs::create_directories(out_dir);
    std::ifstream in(ids_path);
    if (!in) throw std::runtime_error("cannot open " + ids_path);
    std::vector<NodeId> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ids.push_back(static_cast<NodeId>(std::stoul(line)));
    }
    auto occ = clique_occupancy(CliquePartition{n, k}, VertexSet::of(n, ids));
    std::vector<CsvRow> rows;
    for (const auto& [size, cliques] : occ.counts) {
        rows.push_back({std::to_string(size), std::to_string(cliques)});
    }
    write_csv(out_dir / "occupancy.csv", "size,count", rows);
    write_csv(out_dir / "cliquish_degrees.csv", "degree,count",
              degree_rows(cliquish_degree_histogram(occ)));
    return 0;
}

int cmd_oracle_exact_ncp(const std::string& graph_path, long long size,
                         const std::string& out) {
    fs::path out_dir = resolve_out(out);
    fs::create_directories(out_dir);
    Graph g = read_edge_list(graph_path);
    std::vector<CsvRow> rows;
    auto add = [&](NodeId s) {
        auto best = exhaustive_min_conductance(g, s);
        rows.push_back({std::to_string(s), fmt_double(best.conductance),
                        std::to_string(best.witness.size()), "exhaustive"});
    };
    if (size > 0) {
        add(static_cast<NodeId>(size));
    } else {
        for (NodeId s = 1; s <= g.node_count() / 2; ++s) add(s);
    }
    write_csv(out_dir / "ncp.csv", "bin_size,conductance,witness_size,method", rows);
    return 0;
}

int cmd_experiment(const std::string& config_arg, int workers, int runs_override,
                   const std::string& out) {
    std::string text;
    auto it = bundled_configs().find(config_arg);
    if (it != bundled_configs().end()) {
        text = it->second;
    } else {
        std::ifstream in(config_arg);
        if (!in) {
            throw std::runtime_error("config '" + config_arg +
                                     "' is neither bundled nor a readable file");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    auto cfg = parse_config(text);
    if (workers > 0) cfg.workers = workers;
    if (runs_override > 0) cfg.run_count = runs_override;
    fs::path root = resolve_out(out);
    cfg.output_dir = root / cfg.name;
    auto manifest = run_experiment(cfg);
    std::cout << "experiment " << cfg.name << ": " << manifest.runs.size() << " runs, "
              << (manifest.all_ok ? "all ok" : "flagged") << "; outputs in "
              << cfg.output_dir.string() << "\n";
    return manifest.all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contagion-lab: cascades over potential networks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a potential network");
    std::string gen_model, gen_out = "graph.edges";
    NodeId gen_n = 0, gen_d = 0, gen_k = 0;
    double gen_r = 0.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--model", gen_model, "ws|pc|pcm|er|pa|complete")->required();
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--d", gen_d, "degree parameter");
    gen->add_option("--k", gen_k, "clique size (pcm)");
    gen->add_option("--r", gen_r, "rewiring probability");
    gen->add_option("--seed", gen_seed, "PRNG seed");
    gen->add_option("--out", gen_out, "edge-list output path");

    // cascade
    auto* cas = app.add_subcommand("cascade", "Grow a contagious network");
    std::string cas_model, cas_graph, cas_snapshots, cas_out;
    std::size_t cas_m = 0;
    double cas_alpha = 0.7, cas_beta = 0.01, cas_gamma = 0.001, cas_p = 0.5;
    NodeId cas_s = 1;
    std::uint64_t cas_seed = 0;
    cas->add_option("--model", cas_model, "retig|ret|retmiv|retwe|forestfire")->required();
    cas->add_option("--graph", cas_graph, "potential graph edge list");
    cas->add_option("--m", cas_m, "target infected count (or node count for forestfire)")
        ->required();
    cas->add_option("--alpha", cas_alpha, "internal discovery probability");
    cas->add_option("--beta", cas_beta, "boundary transmission probability");
    cas->add_option("--gamma", cas_gamma, "exploration probability (retwe)");
    cas->add_option("--s", cas_s, "initial seed count (retmiv)");
    cas->add_option("--p", cas_p, "burning probability (forestfire)");
    cas->add_option("--seed", cas_seed, "PRNG seed");
    cas->add_option("--snapshots", cas_snapshots, "comma-separated infected-count checkpoints");
    cas->add_option("--out-dir", cas_out, "output directory");

    // metrics
    auto* met = app.add_subcommand("metrics", "Measure a graph");
    std::vector<std::string> met_graphs;
    bool met_degrees = false, met_ncp = false, met_densify = false;
    std::string met_diameter, met_out;
    int met_ncp_seeds = 32;
    std::uint64_t met_seed = 0;
    met->add_option("--graph", met_graphs, "edge list path (repeatable)")->required();
    met->add_flag("--degrees", met_degrees, "degree histogram");
    met->add_flag("--ncp", met_ncp, "network community profile");
    met->add_option("--diameter", met_diameter, "exact or sampled:<k>");
    met->add_flag("--densify", met_densify, "size / average-degree series");
    met->add_option("--ncp-seeds", met_ncp_seeds, "spectral seeds for the NCP search");
    met->add_option("--seed", met_seed, "PRNG seed for sampled metrics");
    met->add_option("--out", met_out, "output directory");

    // oracle
    auto* ora = app.add_subcommand("oracle", "Independent validation oracles");
    ora->require_subcommand(1);
    auto* yule = ora->add_subcommand("yule", "Yule species/genus process");
    double yule_alpha = 0.5;
    std::uint64_t yule_steps = 1000000, yule_seed = 0;
    int yule_runs = 1;
    std::string yule_out;
    yule->add_option("--alpha", yule_alpha, "new-genus probability")->required();
    yule->add_option("--steps", yule_steps, "species created per run")->required();
    yule->add_option("--seed", yule_seed, "base seed");
    yule->add_option("--runs", yule_runs, "independent runs to aggregate");
    yule->add_option("--out", yule_out, "output directory");

    auto* occ = ora->add_subcommand("occupancy", "Per-clique infected counts");
    NodeId occ_n = 0, occ_k = 0;
    std::string occ_ids, occ_out;
    occ->add_option("--n", occ_n, "partitioned vertex count")->required();
    occ->add_option("--k", occ_k, "clique size")->required();
    occ->add_option("--ids", occ_ids, "file of infected underlying IDs, one per line")
        ->required();
    occ->add_option("--out", occ_out, "output directory");

    auto* exact = ora->add_subcommand("exact-ncp", "Exhaustive minimum conductance");
    std::string exact_graph, exact_out;
    long long exact_size = 0;
    exact->add_option("--graph", exact_graph, "edge list path (<= 20 vertices)")->required();
    exact->add_option("--size", exact_size, "subset size (omit for all sizes up to n/2)");
    exact->add_option("--out", exact_out, "output directory");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a config-driven pipeline");
    std::string exp_config, exp_out;
    int exp_workers = 0, exp_runs = 0;
    bool exp_list = false;
    std::string exp_dump;
    exp->add_option("--config", exp_config, "bundled config name or file path");
    exp->add_option("--workers", exp_workers, "parallel run workers");
    exp->add_option("--runs", exp_runs, "override run count");
    exp->add_option("--out", exp_out, "output root (default $" + std::string(kOutputRootEnv) + ")");
    exp->add_flag("--list-configs", exp_list, "list bundled configs and exit");
    exp->add_option("--dump-config", exp_dump, "print a bundled config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_model, gen_n, gen_d, gen_k, gen_r, gen_seed, gen_out);
        }
        if (cas->parsed()) {
            if (cas_model != "forestfire" && cas_graph.empty()) {
                std::cerr << "cascade: --graph is required for graph-based models\n";
                return 1;
            }
            return cmd_cascade(cas_model, cas_graph, cas_m, cas_alpha, cas_beta, cas_gamma,
                               cas_s, cas_p, cas_seed, cas_snapshots, cas_out);
        }
        if (met->parsed()) {
            return cmd_metrics(met_graphs, met_degrees, met_ncp, met_diameter, met_densify,
                               met_ncp_seeds, met_seed, met_out);
        }
        if (ora->parsed()) {
            if (yule->parsed()) {
                return cmd_oracle_yule(yule_alpha, yule_steps, yule_seed, yule_runs, yule_out);
            }
            if (occ->parsed()) return cmd_oracle_occupancy(occ_n, occ_k, occ_ids, occ_out);
            if (exact->parsed()) return cmd_oracle_exact_ncp(exact_graph, exact_size, exact_out);
        }
        if (exp->parsed()) {
            if (exp_list) {
                for (const auto& [name, text] : bundled_configs()) std::cout << name << "\n";
                return 0;
            }
            if (!exp_dump.empty()) {
                auto it = bundled_configs().find(exp_dump);
                if (it == bundled_configs().end()) {
                    std::cerr << "no bundled config named '" << exp_dump << "'\n";
                    return 1;
                }
                std::cout << it->second;
                return 0;
            }
            if (exp_config.empty()) {
                std::cerr << "experiment: --config is required (or --list-configs)\n";
                return 1;
            }
            return cmd_experiment(exp_config, exp_workers, exp_runs, exp_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
