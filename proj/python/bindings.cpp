#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "contagion/cascade.hpp"
#include "contagion/experiment.hpp"
#include "contagion/generators.hpp"
#include "contagion/graph.hpp"
#include "contagion/metrics.hpp"
#include "contagion/ncp.hpp"
#include "contagion/oracles.hpp"

namespace py = pybind11;
using namespace contagion;

namespace {

py::dict fit_to_dict(const SlopeFit& fit) {
    py::dict d;
    d["exponent"] = fit.exponent;
    d["intercept"] = fit.intercept;
    d["rms_residual"] = fit.rms_residual;
    d["x_min"] = fit.x_min;
    d["x_max"] = fit.x_max;
    d["points_used"] = fit.points_used;
    d["method"] = fit.method;
    if (fit.exponent_mle) d["exponent_mle"] = *fit.exponent_mle;
    return d;
}

DegreeHistogram hist_of(const Graph& g) { return DegreeHistogram::of(g); }

py::dict hist_to_dict(const DegreeHistogram& hist) {
    py::dict d;
    for (std::size_t deg = 0; deg < hist.counts.size(); ++deg) {
        if (hist.counts[deg] > 0) d[py::int_(deg)] = hist.counts[deg];
    }
    return d;
}

CascadeParams make_params(const std::string& model, std::size_t m, double alpha, double beta,
                          double gamma, NodeId s) {
    CascadeParams p;
    p.model = cascade_model_from_string(model);
    p.m = m;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.s = s;
    return p;
}

}  // namespace

PYBIND11_MODULE(contagionlab, m) {
    m.doc() = "Cascade simulations over potential networks: generators, "
              "transmission models, and structural metrics.";
    m.attr("__version__") = kVersion;

    py::class_<Graph>(m, "Graph")
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree, py::arg("v"))
        .def("neighbors",
             [](const Graph& g, NodeId v) {
                 auto nbrs = g.neighbors(v);
                 return std::vector<NodeId>(nbrs.begin(), nbrs.end());
             },
             py::arg("v"))
        .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::pair<NodeId, NodeId>> edges;
                 g.for_each_edge([&](NodeId u, NodeId v) { edges.emplace_back(u, v); });
                 return edges;
             })
        .def("validate", &Graph::validate)
        .def_static("from_edges",
                    [](NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
                        return Graph::from_edges(n, edges);
                    },
                    py::arg("node_count"), py::arg("edges"))
        .def("__repr__", [](const Graph& g) {
            return "<Graph nodes=" + std::to_string(g.node_count()) +
                   " edges=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<InfectedGraph>(m, "InfectedGraph")
        .def_readonly("subgraph", &InfectedGraph::subgraph)
        .def_readonly("to_underlying", &InfectedGraph::to_underlying)
        .def_readonly("rounds_elapsed", &InfectedGraph::rounds_elapsed)
        .def_readonly("seed", &InfectedGraph::seed)
        .def_readonly("target_size", &InfectedGraph::target_size)
        .def_readonly("stalled", &InfectedGraph::stalled)
        .def_readonly("exploration_edges", &InfectedGraph::exploration_edges)
        .def_property_readonly("model",
                               [](const InfectedGraph& h) { return to_string(h.model); })
        .def_property_readonly("size", &InfectedGraph::size)
        .def("__repr__", [](const InfectedGraph& h) {
            return "<InfectedGraph model=" + to_string(h.model) +
                   " size=" + std::to_string(h.size()) +
                   (h.stalled ? " stalled" : "") + ">";
        });

    // Generators.
    m.def("watts_strogatz", &watts_strogatz, py::arg("n"), py::arg("d"), py::arg("r"),
          py::arg("seed"));
    m.def("planted_community", &planted_community, py::arg("n"), py::arg("d"), py::arg("r"),
          py::arg("seed"));
    m.def("planted_clique_model", &planted_clique_model, py::arg("n"), py::arg("k"),
          py::arg("r"), py::arg("seed"));
    m.def("random_regular", &random_regular, py::arg("n"), py::arg("d"), py::arg("seed"));
    m.def("baseline_graph",
          [](const std::string& kind, NodeId n, NodeId d, std::uint64_t seed) {
              return baseline_graph(baseline_kind_from_string(kind), n, d, seed);
          },
          py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("seed"));
    m.def("read_edge_list", &read_edge_list, py::arg("path"));
    m.def("write_edge_list", &write_edge_list, py::arg("graph"), py::arg("path"));

    // Cascade engines.
    m.def("retig", &retig, py::arg("g"), py::arg("m"), py::arg("seed"));
    m.def("ret", &ret, py::arg("g"), py::arg("m"), py::arg("alpha"), py::arg("beta"),
          py::arg("s") = 1, py::arg("seed") = 0);
    m.def("retwe", &retwe, py::arg("g"), py::arg("m"), py::arg("alpha"), py::arg("beta"),
          py::arg("gamma"), py::arg("seed") = 0);
    m.def("forest_fire",
          [](NodeId n, double p, std::uint64_t seed) { return forest_fire(n, p, seed); },
          py::arg("n"), py::arg("p"), py::arg("seed"));
    m.def("run_with_snapshots",
          [](const Graph& g, const std::string& model, std::size_t m, double alpha,
             double beta, double gamma, NodeId s, const SnapshotSchedule& schedule,
             std::uint64_t seed) {
              return run_with_snapshots(g, make_params(model, m, alpha, beta, gamma, s),
                                        schedule, seed);
          },
          py::arg("g"), py::arg("model"), py::arg("m"), py::arg("alpha") = 0.0,
          py::arg("beta") = 0.0, py::arg("gamma") = 0.0, py::arg("s") = 1,
          py::arg("schedule"), py::arg("seed") = 0);

    // Metrics.
    m.def("degree_histogram", [](const Graph& g) { return hist_to_dict(hist_of(g)); },
          py::arg("g"));
    m.def("log_binned",
          [](const py::dict& counts, double ratio) {
              std::map<std::uint32_t, std::uint64_t> c;
              for (auto item : counts) {
                  c[item.first.cast<std::uint32_t>()] = item.second.cast<std::uint64_t>();
              }
              auto points = log_binned(DegreeHistogram::from_counts(c), ratio);
              py::list out;
              for (const auto& p : points) {
                  py::dict d;
                  d["center"] = p.center;
                  d["density"] = p.density;
                  d["count"] = p.count;
                  d["lo"] = p.lo;
                  d["hi"] = p.hi;
                  out.append(d);
              }
              return out;
          },
          py::arg("counts"), py::arg("ratio"));
    m.def("fit_power_law",
          [](const py::dict& counts, double ratio, double x_min, double x_max) {
              std::map<std::uint32_t, std::uint64_t> c;
              for (auto item : counts) {
                  c[item.first.cast<std::uint32_t>()] = item.second.cast<std::uint64_t>();
              }
              return fit_to_dict(analyze_degree_power_law(DegreeHistogram::from_counts(c),
                                                          ratio, x_min, x_max));
          },
          py::arg("counts"), py::arg("ratio"), py::arg("x_min"), py::arg("x_max"));
    m.def("diameter",
          [](const Graph& g, std::optional<std::uint32_t> samples, std::uint64_t seed) {
              auto r = diameter(g, samples, seed);
              py::dict d;
              d["exact"] = r.exact;
              d["diameter"] = r.diameter;
              d["effective_diameter_90"] = r.effective_diameter_90;
              d["component_size"] = r.component_size;
              d["sample_pairs"] = r.sample_pairs;
              return d;
          },
          py::arg("g"), py::arg("samples") = std::nullopt, py::arg("seed") = 0);
    m.def("conductance",
          [](const Graph& g, const std::vector<NodeId>& members) {
              return conductance(g, VertexSet::of(g.node_count(), members));
          },
          py::arg("g"), py::arg("members"));
    m.def("ncp",
          [](const Graph& g, int seeds, std::uint64_t seed) {
              NcpConfig config;
              config.seed_count = seeds;
              config.seed = seed;
              auto curve = ncp_heuristic(g, config);
              py::list out;
              for (const auto& bin : curve.bins) {
                  py::dict d;
                  d["size"] = bin.size;
                  d["conductance"] = bin.conductance;
                  d["witness"] = bin.witness;
                  d["method"] = bin.method;
                  out.append(d);
              }
              return out;
          },
          py::arg("g"), py::arg("seeds") = 32, py::arg("seed") = 0);

    // Oracles.
    m.def("yule_process",
          [](double alpha, std::uint64_t steps, std::uint64_t seed) {
              auto hist = yule_process({alpha, steps, seed});
              py::dict d;
              for (const auto& [size, genera] : hist.counts) d[py::int_(size)] = genera;
              return d;
          },
          py::arg("alpha"), py::arg("steps"), py::arg("seed"));
    m.def("clique_occupancy",
          [](NodeId n, NodeId k, const std::vector<NodeId>& infected) {
              auto hist = clique_occupancy(CliquePartition{n, k},
                                           VertexSet::of(n, infected));
              py::dict d;
              for (const auto& [size, cliques] : hist.counts) d[py::int_(size)] = cliques;
              return d;
          },
          py::arg("n"), py::arg("k"), py::arg("infected"));
    m.def("exhaustive_min_conductance",
          [](const Graph& g, NodeId size) {
              auto best = exhaustive_min_conductance(g, size);
              py::dict d;
              d["conductance"] = best.conductance;
              d["cut"] = best.exact.cut;
              d["min_side_volume"] = best.exact.min_side_volume;
              d["witness"] = best.witness;
              return d;
          },
          py::arg("g"), py::arg("size"));

    // Experiments.
    m.def("bundled_configs", [] { return bundled_configs(); });
    m.def("validate_config", [](const std::string& text) {
        return validate_config(parse_config(text));
    });
    m.def("run_experiment",
          [](const std::string& config_text, const std::filesystem::path& output_dir,
             int workers) {
              auto cfg = parse_config(config_text);
              cfg.output_dir = output_dir;
              if (workers > 0) cfg.workers = workers;
              return run_experiment(cfg).to_json();
          },
          py::arg("config_text"), py::arg("output_dir"), py::arg("workers") = 0);
}
