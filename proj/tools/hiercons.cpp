// hiercons command-line tool.
//
// Seeds: every subcommand takes one 64-bit seed (--seed, else HIERCONS_SEED,
// else 0) and splits it with derive_seed(seed, stream):
//   stream 1: gamma_min estimation   stream 2: ensemble generation
//   stream 3: consensus / hierarchy  stream 4: lf baseline
// The benchmark generator uses the seed directly.
//
// Exit codes: 0 ok, 2 usage, 3 input or I/O, 4 numerical or iteration failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hiercons/hiercons.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hiercons;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  std::string out = ".";
};

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("HIERCONS_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    std::size_t used = 0;
    try {
      v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.front() == '-') throw UsageError("HIERCONS_SEED is not an unsigned integer: " + s);
    return v;
  }
  return 0;
}

// Sidecars leave out --workers so that outputs are identical for any worker count.
void write_output(const fs::path& path, const std::string& content, const std::string& command, std::uint64_t seed,
                  const json& config) {
  io::write_file(path, content);
  json meta = {{"tool", "hiercons"},
               {"version", HIERCONS_VERSION},
               {"command", command},
               {"seed", seed},
               {"config", config},
               {"file", path.filename().string()}};
  io::write_file(fs::path(path.string() + ".json"), meta.dump(2) + "\n");
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

template <class F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

PartitionEnsemble load_ensemble(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return io::read_ensemble_csv(in);
}

Partition load_partition(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return io::read_partition_csv(in);
}

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--seed", c.seed, "Random seed (falls back to HIERCONS_SEED, then 0)");
  cmd->add_option("--workers", c.workers, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  if (with_out) cmd->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
}

std::string fmt_double(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical consensus clustering of multiresolution partition ensembles"};
  app.set_version_flag("--version", std::string(HIERCONS_VERSION));
  app.require_subcommand(1);

  // sample
  Common sample_c;
  std::string sample_graph, strategy = "event", directed = "symmetrize";
  std::size_t count = 100;
  std::optional<double> user_gmin, user_gmax;
  auto* sample = app.add_subcommand("sample", "Sample gamma values and build a partition ensemble");
  sample->add_option("graph", sample_graph, "Edge list")->required();
  sample->add_option("--strategy", strategy)->check(CLI::IsMember({"event", "linear", "exponential"}))->capture_default_str();
  sample->add_option("--count", count, "Ensemble size l (>= 2)")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 32))->capture_default_str();
  sample->add_option("--gamma-min", user_gmin, "Lower end of the range (default: estimated)");
  sample->add_option("--gamma-max", user_gmax, "Upper end of the range (default: gamma_max of the graph)");
  sample->add_option("--directed", directed)->check(CLI::IsMember({"symmetrize", "reject"}))->capture_default_str();
  add_common(sample, sample_c);

  // gammarange
  Common range_c;
  std::string range_graph, range_directed = "symmetrize";
  auto* gammarange = app.add_subcommand("gammarange", "Print gamma_min and gamma_max of a graph");
  gammarange->add_option("graph", range_graph, "Edge list")->required();
  gammarange->add_option("--directed", range_directed)->check(CLI::IsMember({"symmetrize", "reject"}))->capture_default_str();
  add_common(gammarange, range_c, false);

  // hierarchy
  Common hier_c;
  std::string hier_ensemble, significance = "normal";
  double hier_alpha = 0.05;
  std::size_t max_iter = 50, trials = 10000;
  auto* hierarchy = app.add_subcommand("hierarchy", "Hierarchical consensus tree of an ensemble");
  hierarchy->add_option("ensemble", hier_ensemble, "Ensemble CSV")->required();
  hierarchy->add_option("--alpha", hier_alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  hierarchy->add_option("--max-iter", max_iter)->capture_default_str();
  hierarchy->add_option("--significance", significance)->check(CLI::IsMember({"normal", "montecarlo"}))->capture_default_str();
  hierarchy->add_option("--trials", trials, "Monte Carlo draws per threshold")->capture_default_str();
  add_common(hierarchy, hier_c);

  // consensus
  Common cons_c;
  std::string cons_ensemble;
  double cons_alpha = 0.05;
  std::size_t cons_max_iter = 50;
  auto* consensus = app.add_subcommand("consensus", "Flat consensus partition of an ensemble");
  consensus->add_option("ensemble", cons_ensemble, "Ensemble CSV")->required();
  consensus->add_option("--alpha", cons_alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  consensus->add_option("--max-iter", cons_max_iter)->capture_default_str();
  add_common(consensus, cons_c);

  // lf
  Common lf_c;
  std::string lf_ensemble;
  double tau = 0.5, lf_gamma = 1.0;
  std::size_t lf_max_iter = 50;
  auto* lf = app.add_subcommand("lf", "Thresholded consensus baseline");
  lf->add_option("ensemble", lf_ensemble, "Ensemble CSV")->required();
  lf->add_option("--tau", tau)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  lf->add_option("--gamma", lf_gamma, "Resolution used to cluster the thresholded matrix")->capture_default_str();
  lf->add_option("--max-iter", lf_max_iter)->capture_default_str();
  add_common(lf, lf_c);

  // benchmark
  Common bench_c;
  std::string spec_path;
  HierBenchmarkSpec bench_spec;
  std::vector<double> bench_p;
  auto* benchmark = app.add_subcommand("benchmark", "Generate a two-level hierarchical benchmark network");
  benchmark->add_option("--spec", spec_path, "JSON file with any HierBenchmarkSpec fields");
  benchmark->add_option("--n", bench_spec.n)->capture_default_str();
  benchmark->add_option("--p", bench_p, "Level fractions p0 p1 p2")->expected(3);
  add_common(benchmark, bench_c);

  // compare
  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "Compare two partitions");
  compare->add_option("a", cmp_a, "Partition CSV")->required();
  compare->add_option("b", cmp_b, "Partition CSV")->required();
  compare->add_option("-o,--out", cmp_out, "Write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample) {
      const auto seed = resolve_seed(sample_c);
      const auto file = load_edge_list(sample_graph, directed == "reject" ? DirectedPolicy::reject
                                                                          : DirectedPolicy::symmetrize);
      const auto& g = file.graph;
      const EventProfile profile(g);
      GammaMinOptions gm;
      gm.workers = sample_c.workers;
      const double gmin = user_gmin ? *user_gmin : estimate_gamma_min(g, derive_seed(seed, 1), gm);
      const double gmax = user_gmax ? *user_gmax : profile.gamma_max();
      const auto gammas = sample_gammas(profile, parse_gamma_strategy(strategy), count, gmin, gmax);
      const auto e = generate_ensemble(g, gammas, derive_seed(seed, 2), sample_c.workers);
      const json config = {{"graph", sample_graph}, {"strategy", strategy}, {"count", count},
                           {"gamma_min", gmin},     {"gamma_max", gmax},    {"directed", directed}};
      const auto dir = out_dir(sample_c);
      write_output(dir / "ensemble.csv", render([&](auto& s) { io::write_ensemble_csv(s, e); }), "sample", seed, config);
      write_output(dir / "events.csv", render([&](auto& s) { io::write_event_table_csv(s, profile); }), "sample", seed,
                   config);
      write_output(dir / "node_map.csv", render([&](auto& s) { io::write_node_map_csv(s, file.node_ids); }), "sample",
                   seed, config);
      std::cout << "gamma_min " << fmt_double(gmin) << "\ngamma_max " << fmt_double(gmax) << "\nl " << e.size()
                << "\n";
    } else if (*gammarange) {
      const auto seed = resolve_seed(range_c);
      const auto file = load_edge_list(range_graph, range_directed == "reject" ? DirectedPolicy::reject
                                                                                : DirectedPolicy::symmetrize);
      GammaMinOptions gm;
      gm.workers = range_c.workers;
      const json r = {{"gamma_min", estimate_gamma_min(file.graph, derive_seed(seed, 1), gm)},
                      {"gamma_max", gamma_max(file.graph)},
                      {"n", file.graph.num_nodes()},
                      {"seed", seed}};
      std::cout << r.dump(2) << "\n";
    } else if (*hierarchy) {
      const auto seed = resolve_seed(hier_c);
      const auto e = load_ensemble(hier_ensemble);
      if (e.size() == 1) std::cerr << "warning: ensemble has a single partition; significance is degenerate\n";
      HierarchyOptions opt;
      opt.consensus.max_iter = max_iter;
      opt.consensus.workers = hier_c.workers;
      if (significance == "montecarlo") opt.consensus.method = SignificanceMethod::montecarlo(trials, derive_seed(seed, 5));
      const auto t = hierarchical_consensus(e, hier_alpha, derive_seed(seed, 3), opt);
      const auto cuts = all_cuts(t);
      json config = {{"ensemble", hier_ensemble}, {"alpha", hier_alpha}, {"max_iter", max_iter},
                     {"significance", significance}};
      if (significance == "montecarlo") config["trials"] = trials;
      const auto dir = out_dir(hier_c);
      write_output(dir / "tree.json", io::tree_to_json(t).dump(2) + "\n", "hierarchy", seed, config);
      write_output(dir / "tree.csv", render([&](auto& s) { io::write_tree_csv(s, t); }), "hierarchy", seed, config);
      write_output(dir / "cuts.csv", render([&](auto& s) {
                     s << "node";
                     for (std::size_t k = 0; k < cuts.size(); ++k) s << ",cut" << k;
                     s << "\n";
                     for (std::size_t i = 0; i < t.num_items(); ++i) {
                       s << i;
                       for (const auto& c : cuts) s << ',' << c.partition[i];
                       s << "\n";
                     }
                   }),
                   "hierarchy", seed, config);
      write_output(dir / "cut_strengths.csv", render([&](auto& s) {
                     s << "cut,threshold,clusters\n";
                     for (std::size_t k = 0; k < cuts.size(); ++k) {
                       s << "cut" << k << ',' << fmt_double(cuts[k].threshold) << ','
                         << cuts[k].partition.num_clusters() << "\n";
                     }
                   }),
                   "hierarchy", seed, config);
      std::cout << "nodes " << t.nodes().size() << "\nleaves " << t.num_leaves() << "\ndepth " << t.depth() << "\n";
    } else if (*consensus) {
      const auto seed = resolve_seed(cons_c);
      const auto e = load_ensemble(cons_ensemble);
      ConsensusOptions opt;
      opt.max_iter = cons_max_iter;
      opt.workers = cons_c.workers;
      const auto p = consensus_partition(e, cons_alpha, derive_seed(seed, 3), opt);
      const json config = {{"ensemble", cons_ensemble}, {"alpha", cons_alpha}, {"max_iter", cons_max_iter}};
      write_output(out_dir(cons_c) / "consensus.csv", render([&](auto& s) { io::write_partition_csv(s, p); }),
                   "consensus", seed, config);
      std::cout << "clusters " << p.num_clusters() << "\n";
    } else if (*lf) {
      const auto seed = resolve_seed(lf_c);
      const auto e = load_ensemble(lf_ensemble);
      const auto p = lf_consensus(e, tau, modularity_clusterer(lf_gamma), lf_max_iter, derive_seed(seed, 4), lf_c.workers);
      const json config = {{"ensemble", lf_ensemble}, {"tau", tau}, {"gamma", lf_gamma}, {"max_iter", lf_max_iter}};
      write_output(out_dir(lf_c) / "lf.csv", render([&](auto& s) { io::write_partition_csv(s, p); }), "lf", seed,
                   config);
      std::cout << "clusters " << p.num_clusters() << "\n";
    } else if (*benchmark) {
      HierBenchmarkSpec spec;
      if (!spec_path.empty()) {
        json j;
        try {
          j = json::parse(io::read_file(spec_path));
        } catch (const json::exception& ex) {
          throw ParseError(spec_path + ": " + ex.what());
        }
        try {
          spec.n = j.value("n", spec.n);
          if (j.contains("p")) spec.p = j.at("p").get<std::array<double, 3>>();
          spec.degree_exponent = j.value("degree_exponent", spec.degree_exponent);
          spec.k_min = j.value("k_min", spec.k_min);
          spec.k_max = j.value("k_max", spec.k_max);
          spec.child_mean = j.value("child_mean", spec.child_mean);
          spec.child_cutoff = j.value("child_cutoff", spec.child_cutoff);
          spec.dirichlet_sigma = j.value("dirichlet_sigma", spec.dirichlet_sigma);
          if (j.contains("seed") && !bench_c.seed) bench_c.seed = j.at("seed").get<std::uint64_t>();
        } catch (const json::exception& ex) {
          throw ParseError(spec_path + ": " + ex.what());
        }
      }
      if (benchmark->count("--n")) spec.n = bench_spec.n;
      if (!bench_p.empty()) spec.p = {bench_p[0], bench_p[1], bench_p[2]};
      spec.seed = resolve_seed(bench_c);
      spec.validate();
      const auto planted = sample_hierarchy(spec);
      const auto g = generate_network(spec, planted);
      const json config = {{"n", spec.n},
                           {"p", spec.p},
                           {"degree_exponent", spec.degree_exponent},
                           {"k_min", spec.k_min},
                           {"k_max", spec.k_max},
                           {"child_mean", spec.child_mean},
                           {"child_cutoff", spec.child_cutoff},
                           {"dirichlet_sigma", spec.dirichlet_sigma},
                           {"seed", spec.seed}};
      const auto dir = out_dir(bench_c);
      write_output(dir / "graph.txt", render([&](auto& s) { write_edge_list(s, g); }), "benchmark", spec.seed, config);
      write_output(dir / "level1.csv", render([&](auto& s) { io::write_partition_csv(s, planted.level1); }),
                   "benchmark", spec.seed, config);
      write_output(dir / "level2.csv", render([&](auto& s) { io::write_partition_csv(s, planted.level2); }),
                   "benchmark", spec.seed, config);
      io::write_file(dir / "spec.json", config.dump(2) + "\n");
      std::cout << "n " << g.num_nodes() << "\nedges " << g.edges().size() << "\nlevel1 "
                << planted.level1.num_clusters() << "\nlevel2 " << planted.level2.num_clusters() << "\n";
    } else if (*compare) {
      const auto a = load_partition(cmp_a);
      const auto b = load_partition(cmp_b);
      if (a.size() != b.size()) throw ParseError("partitions cover different node counts");
      const auto ami = ami_max_checked(a, b);
      json r = {{"ami_max", ami.value},
                {"ami_degenerate", ami.degenerate},
                {"mutual_information", mutual_information(a, b)},
                {"expected_mi", expected_mi(a, b)},
                {"entropy_a", entropy(a)},
                {"entropy_b", entropy(b)},
                {"clusters_a", a.num_clusters()},
                {"clusters_b", b.num_clusters()}};
      try {
        r["nmi_max"] = nmi_max(a, b);
      } catch (const DomainError&) {
        r["nmi_max"] = nullptr;
      }
      if (cmp_out.empty()) {
        std::cout << r.dump(2) << "\n";
      } else {
        write_output(cmp_out, r.dump(2) + "\n", "compare", 0, {{"a", cmp_a}, {"b", cmp_b}});
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConsensusIterationError& e) {
    std::cerr << "iteration error: " << e.what() << " (last partition has " << e.last_partition().num_clusters()
              << " clusters)\n";
    return kExitNumerical;
  } catch (const IterationError& e) {
    std::cerr << "iteration error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
