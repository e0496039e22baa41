#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hiercons/hiercons.hpp"

namespace py = pybind11;
using namespace hiercons;

namespace {

using Labels = std::vector<std::size_t>;

Labels to_labels(const Partition& p) { return {p.labels().begin(), p.labels().end()}; }

PartitionEnsemble to_ensemble(const std::vector<Labels>& partitions, const std::optional<std::vector<double>>& gammas) {
  PartitionEnsemble e;
  for (const auto& p : partitions) e.partitions.emplace_back(p);
  if (gammas) e.gammas = *gammas;
  e.validate();
  return e;
}

std::vector<Labels> from_ensemble(const PartitionEnsemble& e) {
  std::vector<Labels> out;
  for (const auto& p : e.partitions) out.push_back(to_labels(p));
  return out;
}

py::array_t<double> to_array(const DenseMatrix& m) {
  py::array_t<double> a({m.size(), m.size()});
  auto r = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = m(i, j);
  }
  return a;
}

Graph graph_from(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [i, j, w] : edges) es.push_back({i, j, w});
  return Graph::from_edges(n, es);
}

}  // namespace

PYBIND11_MODULE(_hiercons, m) {
  m.doc() = "Hierarchical consensus clustering of multiresolution partition ensembles";
  m.attr("__version__") = HIERCONS_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<IterationError>(m, "IterationError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from), py::arg("n"), py::arg("edges"),
           "Undirected weighted graph from (i, j, w) triples; duplicate pairs are summed.")
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("total_weight", &Graph::total_weight)
      .def_property_readonly("strengths",
                             [](const Graph& g) { return std::vector<double>(g.strengths().begin(), g.strengths().end()); })
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.w);
                               return out;
                             })
      .def("weight", &Graph::weight)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " edges=" + std::to_string(g.edges().size()) + ">";
      });

  m.def(
      "load_edge_list",
      [](const std::filesystem::path& path, const std::string& directed) {
        if (directed != "symmetrize" && directed != "reject") throw DomainError("directed must be 'symmetrize' or 'reject'");
        auto f = load_edge_list(path, directed == "reject" ? DirectedPolicy::reject : DirectedPolicy::symmetrize);
        return py::make_tuple(std::move(f.graph), f.node_ids);
      },
      py::arg("path"), py::arg("directed") = "symmetrize", "Returns (graph, original node ids).");

  m.def(
      "modularity",
      [](const Graph& g, const Labels& labels, double gamma) {
        return modularity_score(ModularityProblem(g, gamma), Partition(labels));
      },
      py::arg("graph"), py::arg("labels"), py::arg("gamma") = 1.0, "Unnormalized Q(gamma).");
  m.def(
      "louvain",
      [](const Graph& g, double gamma, std::uint64_t seed) {
        py::gil_scoped_release release;
        return to_labels(iterated_louvain(ModularityProblem(g, gamma), seed));
      },
      py::arg("graph"), py::arg("gamma") = 1.0, py::arg("seed") = 0);

  m.def("gamma_max", &gamma_max, py::arg("graph"));
  m.def(
      "gamma_min",
      [](const Graph& g, std::uint64_t seed) {
        py::gil_scoped_release release;
        return estimate_gamma_min(g, seed);
      },
      py::arg("graph"), py::arg("seed") = 0);
  m.def(
      "beta",
      [](const Graph& g, const std::vector<double>& gammas) {
        const EventProfile p(g);
        std::vector<double> out;
        for (const double x : gammas) out.push_back(p.beta(x));
        return out;
      },
      py::arg("graph"), py::arg("gammas"), "Fraction of the modularity range resolved at each gamma.");
  m.def(
      "sample_gammas",
      [](const Graph& g, const std::string& strategy, std::size_t count, std::optional<double> lo,
         std::optional<double> hi, std::uint64_t seed) {
        py::gil_scoped_release release;
        const EventProfile p(g);
        return sample_gammas(p, parse_gamma_strategy(strategy), count, lo ? *lo : estimate_gamma_min(g, seed),
                             hi ? *hi : p.gamma_max());
      },
      py::arg("graph"), py::arg("strategy") = "event", py::arg("count") = 100, py::arg("gamma_min") = py::none(),
      py::arg("gamma_max") = py::none(), py::arg("seed") = 0);

  m.def(
      "generate_ensemble",
      [](const Graph& g, const std::vector<double>& gammas, std::uint64_t seed, std::size_t workers) {
        py::gil_scoped_release release;
        return from_ensemble(generate_ensemble(g, gammas, seed, workers));
      },
      py::arg("graph"), py::arg("gammas"), py::arg("seed") = 0, py::arg("workers") = 0,
      "One partition (list of labels) per gamma.");
  m.def(
      "coclassification",
      [](const std::vector<Labels>& partitions) { return to_array(coclassification(to_ensemble(partitions, {}))); },
      py::arg("partitions"));

  m.def(
      "consensus",
      [](const std::vector<Labels>& partitions, double alpha, std::uint64_t seed, std::size_t max_iter,
         std::size_t workers) {
        const auto e = to_ensemble(partitions, {});
        py::gil_scoped_release release;
        ConsensusOptions opt;
        opt.max_iter = max_iter;
        opt.workers = workers;
        return to_labels(consensus_partition(e, alpha, seed, opt));
      },
      py::arg("partitions"), py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("max_iter") = 50,
      py::arg("workers") = 0);
  m.def(
      "lf_consensus",
      [](const std::vector<Labels>& partitions, double tau, double gamma, std::uint64_t seed, std::size_t max_iter,
         std::size_t workers) {
        const auto e = to_ensemble(partitions, {});
        py::gil_scoped_release release;
        return to_labels(lf_consensus(e, tau, modularity_clusterer(gamma), max_iter, seed, workers));
      },
      py::arg("partitions"), py::arg("tau"), py::arg("gamma") = 1.0, py::arg("seed") = 0, py::arg("max_iter") = 50,
      py::arg("workers") = 0);

  py::class_<ConsensusTree>(m, "ConsensusTree")
      .def_property_readonly("num_items", &ConsensusTree::num_items)
      .def_property_readonly("num_leaves", &ConsensusTree::num_leaves)
      .def_property_readonly("depth", &ConsensusTree::depth)
      .def_property_readonly("nodes",
                             [](const ConsensusTree& t) {
                               py::list out;
                               for (const auto& v : t.nodes()) {
                                 py::dict d;
                                 d["id"] = v.id;
                                 d["parent"] = v.parent ? py::cast(*v.parent) : py::none();
                                 d["children"] = v.children;
                                 d["members"] = v.members;
                                 d["strength"] = v.strength;
                                 out.append(d);
                               }
                               return out;
                             })
      .def("leaf_partition", [](const ConsensusTree& t) { return to_labels(t.leaf_partition()); })
      .def("coarse_partition", [](const ConsensusTree& t) { return to_labels(t.coarse_partition()); })
      .def("cut", [](const ConsensusTree& t, double x) { return to_labels(cut_tree(t, x)); }, py::arg("threshold"))
      .def("all_cuts",
           [](const ConsensusTree& t) {
             std::vector<std::pair<double, Labels>> out;
             for (const auto& c : all_cuts(t)) out.emplace_back(c.threshold, to_labels(c.partition));
             return out;
           })
      .def("to_json", [](const ConsensusTree& t) { return io::tree_to_json(t).dump(); })
      .def_static("from_json", [](const std::string& s) {
        try {
          return io::tree_from_json(nlohmann::json::parse(s));
        } catch (const nlohmann::json::exception& ex) {
          throw ParseError(ex.what());
        }
      });

  m.def(
      "hierarchical_consensus",
      [](const std::vector<Labels>& partitions, double alpha, std::uint64_t seed, std::size_t max_iter,
         std::size_t workers) {
        const auto e = to_ensemble(partitions, {});
        py::gil_scoped_release release;
        HierarchyOptions opt;
        opt.consensus.max_iter = max_iter;
        opt.consensus.workers = workers;
        return hierarchical_consensus(e, alpha, seed, opt);
      },
      py::arg("partitions"), py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("max_iter") = 50,
      py::arg("workers") = 0);

  m.def("entropy", [](const Labels& g) { return entropy(Partition(g)); }, py::arg("labels"));
  m.def("mutual_information", [](const Labels& g, const Labels& h) { return mutual_information(Partition(g), Partition(h)); });
  m.def("expected_mi", [](const Labels& g, const Labels& h) { return expected_mi(Partition(g), Partition(h)); });
  m.def("nmi", [](const Labels& g, const Labels& h) { return nmi_max(Partition(g), Partition(h)); });
  m.def("ami", [](const Labels& g, const Labels& h) { return ami_max(Partition(g), Partition(h)); });

  m.def(
      "benchmark",
      [](std::size_t n, std::tuple<double, double, double> p, std::uint64_t seed) {
        HierBenchmarkSpec spec;
        spec.n = n;
        spec.p = {std::get<0>(p), std::get<1>(p), std::get<2>(p)};
        spec.seed = seed;
        spec.validate();
        const auto h = sample_hierarchy(spec);
        auto g = generate_network(spec, h);
        return py::make_tuple(std::move(g), to_labels(h.level1), to_labels(h.level2));
      },
      py::arg("n") = 1000, py::arg("p") = std::make_tuple(0.2, 0.2, 0.6), py::arg("seed") = 0,
      "Two-level hierarchical benchmark: returns (graph, level1 labels, level2 labels).");
}
