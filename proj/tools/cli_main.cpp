#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catgraph/errors.hpp"
#include "catgraph/inference.hpp"
#include "catgraph/io.hpp"
#include "catgraph/mst.hpp"
#include "catgraph/sim.hpp"
#include "catgraph/stats.hpp"

namespace {

using namespace catgraph;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

int resolve_threads(int option_value) {
  if (option_value > 0) return option_value;
  if (const char* env = std::getenv("CATGRAPH_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed.has_value()) return *seed;
  std::random_device rd;
  const std::uint64_t s =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cerr << "seed: " << s << "\n";
  return s;
}

DistanceMatrix metric_matrix(const std::string& metric, const ContingencyTable& table) {
  const auto& ids = table.category_ids();
  if (metric == "hamming") return pairwise_hamming(ids);
  if (metric == "kendall" || metric == "spearman" || metric == "spearman-sq" ||
      metric == "spearman-footrule") {
    std::vector<Ranking> rankings;
    rankings.reserve(ids.size());
    for (const auto& id : ids) rankings.push_back(Ranking::parse(id));
    const RankMetric m = (metric == "kendall") ? RankMetric::kendall
                         : (metric == "spearman-footrule")
                             ? RankMetric::spearman_footrule
                             : RankMetric::spearman_sq;
    return pairwise_distance(m, rankings);
  }
  if (metric == "rank-diff") {
    std::vector<long long> ranks;
    ranks.reserve(ids.size());
    for (const auto& id : ids) {
      try {
        ranks.push_back(std::stoll(id));
      } catch (...) {
        throw ValidationError("rank-diff metric needs integer category ids, got '" + id + "'");
      }
    }
    return pairwise_rank_diff(ranks);
  }
  throw ValidationError("unknown metric: " + metric);
}

struct Inputs {
  std::string table_path;
  std::string dist_path;
  std::string metric;
  std::string graph_kind = "umst";  // mst | umst | c-unng | custom
  std::string graph_file;
};

ContingencyTable load_table(const Inputs& in) {
  auto table = read_table_csv_file(in.table_path);
  if (table.dropped_categories() > 0) {
    std::cerr << "note: dropped " << table.dropped_categories()
              << " zero-margin categories\n";
  }
  return table;
}

std::optional<DistanceMatrix> load_distance(const Inputs& in, const ContingencyTable& table) {
  if (!in.dist_path.empty()) return read_distance_csv_file(in.dist_path, table);
  if (!in.metric.empty()) return metric_matrix(in.metric, table);
  return std::nullopt;
}

CategoryGraph build_graph(const Inputs& in, const ContingencyTable& table,
                          const std::optional<DistanceMatrix>& d) {
  if (in.graph_kind == "custom" || !in.graph_file.empty()) {
    if (in.graph_file.empty()) throw ValidationError("custom graph requires --graph-file");
    return read_edge_list_file(in.graph_file, table);
  }
  if (!d.has_value()) {
    throw ValidationError("graph kind '" + in.graph_kind + "' requires --dist or --metric");
  }
  if (in.graph_kind == "mst") return mst_single(*d);
  if (in.graph_kind == "umst") return umst_edges(*d);
  if (in.graph_kind == "c-unng") return unng_categories(*d);
  throw ValidationError("unknown graph kind: " + in.graph_kind);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file: " + path);
  out << content;
}

struct PValueSpec {
  PValueMethod method = PValueMethod::both;
  long long b = 1000;
};

PValueSpec parse_pvalue(const std::string& spec) {
  PValueSpec p;
  if (spec == "normal") {
    p.method = PValueMethod::normal;
  } else if (spec == "exact") {
    p.method = PValueMethod::exact;
  } else if (spec.rfind("perm", 0) == 0) {
    p.method = PValueMethod::permutation;
    if (spec.size() > 5 && spec[4] == ':') p.b = std::stoll(spec.substr(5));
  } else if (spec.rfind("both", 0) == 0) {
    p.method = PValueMethod::both;
    if (spec.size() > 5 && spec[4] == ':') p.b = std::stoll(spec.substr(5));
  } else {
    throw ValidationError("unknown p-value spec: " + spec +
                          " (use perm:B, normal, exact, or both[:B])");
  }
  if (p.b < 1) throw ValidationError("permutation count must be >= 1");
  return p;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_test(const Inputs& in, const std::string& stat_name, const std::string& pvalue_spec,
             std::optional<std::uint64_t> seed_opt, std::uint64_t cap, int threads,
             const std::string& output) {
  const auto table = load_table(in);
  const auto d = load_distance(in, table);
  const auto stat = parse_test_statistic(stat_name);
  if (!stat.has_value()) throw ValidationError("unknown statistic: " + stat_name);

  std::optional<CategoryGraph> custom;
  if (*stat == TestStatistic::r_c0_custom || *stat == TestStatistic::t_c0_custom) {
    custom = build_graph(in, table, d);
  }

  const auto pv = parse_pvalue(pvalue_spec);
  const std::uint64_t seed = resolve_seed(seed_opt);

  PreparedStatistic prepared;
  try {
    prepared =
        prepare_statistic(*stat, table, d ? &*d : nullptr, custom ? &*custom : nullptr, cap);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (*stat == TestStatistic::amst) {
      std::cerr << "suggestion: use --stat C-uMST (the R_C0 statistic on the uMST), which "
                   "avoids MST enumeration\n";
    }
    return kExitResource;
  }

  const auto result = run_test(table, prepared, pv.method, pv.b, seed, threads);
  write_output(output, test_result_to_json(result));
  return kExitOk;
}

int cmd_graph(const Inputs& in, const std::string& kind, const std::string& format,
              const std::string& output) {
  const auto table = load_table(in);
  const auto d = load_distance(in, table);
  if (!d.has_value()) throw ValidationError("graph export requires --dist or --metric");
  CategoryGraph g(table.k(), {});
  if (kind == "mst") {
    g = mst_single(*d);
  } else if (kind == "umst") {
    g = umst_edges(*d);
  } else if (kind == "c-unng") {
    g = unng_categories(*d);
  } else {
    throw ValidationError("unknown graph kind: " + kind);
  }
  std::ostringstream out;
  if (format == "csv") {
    write_edge_csv(g, table.category_ids(), out);
  } else if (format == "dot") {
    write_edge_dot(g, table, out);
  } else {
    throw ValidationError("unknown format: " + format + " (use csv or dot)");
  }
  write_output(output, out.str());
  return kExitOk;
}

int cmd_moments(const Inputs& in, const std::string& output) {
  const auto table = load_table(in);
  const auto d = load_distance(in, table);
  const auto g = build_graph(in, table, d);
  write_output(output, moments_to_json(table, g));
  return kExitOk;
}

int cmd_simulate_power(const std::string& scenario_name, const std::string& stats_list,
                       const std::string& alphas_list, int runs, long long perms,
                       std::optional<std::uint64_t> seed_opt, int threads,
                       const std::string& output) {
  const Scenario scenario = make_named_scenario(scenario_name);
  std::vector<TestStatistic> stats;
  for (const auto& name : split_list(stats_list)) {
    const auto s = parse_test_statistic(name);
    if (!s.has_value()) throw ValidationError("unknown statistic: " + name);
    stats.push_back(*s);
  }
  std::vector<double> alphas;
  for (const auto& a : split_list(alphas_list)) alphas.push_back(std::stod(a));
  const std::uint64_t seed = resolve_seed(seed_opt);

  const auto table = power_study(scenario, stats, alphas, runs, perms, seed, threads);
  std::ostringstream out;
  write_power_csv(table, out);
  write_output(output, out.str());
  if (!output.empty()) {
    for (const auto& row : table.rows) {
      std::cout << scenario_name << " " << row.statistic << " alpha=" << row.alpha
                << " power=" << row.power << " (se " << row.stderr_ << ")\n";
    }
  }
  return kExitOk;
}

int cmd_simulate_accuracy(const std::string& lengths_list, const std::string& sizes_list,
                          int runs, long long perms, std::optional<std::uint64_t> seed_opt,
                          int threads, const std::string& output) {
  std::vector<int> lengths;
  for (const auto& l : split_list(lengths_list)) lengths.push_back(std::stoi(l));
  std::vector<long long> sizes;
  for (const auto& s : split_list(sizes_list)) sizes.push_back(std::stoll(s));
  const std::uint64_t seed = resolve_seed(seed_opt);

  const auto table = pvalue_accuracy(lengths, sizes, runs, perms, seed, threads);
  std::ostringstream out;
  write_accuracy_csv(table, out);
  write_output(output, out.str());
  for (const auto& s : summarize_accuracy(table)) {
    std::cout << "length=" << s.length << " N=" << s.n << " " << s.statistic
              << " median_diff=" << s.median << " median_abs=" << s.median_abs << " IQR=["
              << s.q1 << ", " << s.q3 << "]\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based two-sample tests for sparse categorical data"};
  app.require_subcommand(1);

  Inputs in;
  std::string stat_name = "C-uMST";
  std::string pvalue_spec = "both:1000";
  std::optional<std::uint64_t> seed;
  std::uint64_t cap = kDefaultMstCap;
  int threads = 0;
  std::string output;
  std::string kind = "umst";
  std::string format = "csv";

  auto add_inputs = [&](CLI::App* cmd, bool need_table) {
    auto* t = cmd->add_option("--table", in.table_path, "contingency CSV");
    if (need_table) t->required();
    cmd->add_option("--dist", in.dist_path, "distance matrix CSV");
    cmd->add_option("--metric", in.metric,
                    "built-in metric on category ids: kendall, spearman, spearman-footrule, "
                    "hamming, rank-diff");
    cmd->add_option("--graph", in.graph_kind, "graph kind: mst, umst, c-unng, custom");
    cmd->add_option("--graph-file", in.graph_file, "custom C0 edge list (lines 'u,v' of ids)");
    cmd->add_option("--output", output, "output path (default stdout)");
  };

  auto* test = app.add_subcommand("test", "run a two-sample test");
  add_inputs(test, true);
  test->add_option("--stat", stat_name,
                   "statistic: aMST, uMST, aMDP, uNNG, C-uMST, C-uNNG, R-C0, T-C0, pearson, "
                   "deviance (alias LR)");
  test->add_option("--pvalue", pvalue_spec, "perm:B, normal, exact, or both[:B]");
  test->add_option("--seed", seed, "RNG seed (default: OS entropy, printed)");
  test->add_option("--cap", cap, "MST/matching enumeration cap");
  test->add_option("--threads", threads, "permutation worker threads (or CATGRAPH_THREADS)");

  auto* graph = app.add_subcommand("graph", "export a category graph");
  add_inputs(graph, true);
  graph->add_option("--kind", kind, "mst, umst, or c-unng");
  graph->add_option("--format", format, "csv or dot");

  auto* moments = app.add_subcommand("moments", "print analytic null moments");
  add_inputs(moments, true);

  auto* simulate = app.add_subcommand("simulate", "run simulation studies");
  simulate->require_subcommand(1);
  std::string scenario_name = "normal-shift";
  std::string stats_list = "aMST,uMST,aMDP,uNNG,LR,pearson";
  std::string alphas_list = "0.01,0.05";
  std::string lengths_list = "8";
  std::string sizes_list = "500";
  int runs = 1000;
  long long perms = 1000;

  auto* power = simulate->add_subcommand("power", "power study");
  power->add_option("--scenario", scenario_name,
                    "normal-shift, normal-scale, normal-shift-scale, uniform-shift, "
                    "normal-null, mallows, haplotype, haplotype-null");
  power->add_option("--stats", stats_list, "comma-separated statistics");
  power->add_option("--alphas", alphas_list, "comma-separated levels");
  power->add_option("--runs", runs, "simulation runs");
  power->add_option("--perms", perms, "permutations per run");
  power->add_option("--seed", seed, "RNG seed");
  power->add_option("--threads", threads, "worker threads");
  power->add_option("--output", output, "CSV path (default stdout)");

  auto* acc = simulate->add_subcommand("pvalue-accuracy", "normal vs permutation p-values");
  acc->add_option("--lengths", lengths_list, "haplotype lengths");
  acc->add_option("--sizes", sizes_list, "sample sizes");
  acc->add_option("--runs", runs, "runs per cell");
  acc->add_option("--perms", perms, "permutations per run");
  acc->add_option("--seed", seed, "RNG seed");
  acc->add_option("--threads", threads, "worker threads");
  acc->add_option("--output", output, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) {
      return cmd_test(in, stat_name, pvalue_spec, seed, cap, resolve_threads(threads), output);
    }
    if (graph->parsed()) {
      return cmd_graph(in, kind, format, output);
    }
    if (moments->parsed()) {
      return cmd_moments(in, output);
    }
    if (simulate->parsed()) {
      if (power->parsed()) {
        return cmd_simulate_power(scenario_name, stats_list, alphas_list, runs, perms, seed,
                                  resolve_threads(threads), output);
      }
      if (acc->parsed()) {
        return cmd_simulate_accuracy(lengths_list, sizes_list, runs, perms, seed,
                                     resolve_threads(threads), output);
      }
    }
    std::cerr << "no subcommand\n";
    return kExitInput;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
