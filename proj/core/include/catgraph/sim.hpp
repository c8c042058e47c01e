#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "catgraph/distance.hpp"
#include "catgraph/inference.hpp"
#include "catgraph/stats.hpp"
#include "catgraph/table.hpp"

namespace catgraph {

/// One of the two sampling distributions of the binned scenario.
struct SampleDist {
  enum class Kind { normal, uniform } kind = Kind::normal;
  double a = 0.0;  // mean / lo
  double b = 1.0;  // sd / hi

  static SampleDist normal(double mean, double sd) {
    return {Kind::normal, mean, sd};
  }
  static SampleDist uniform(double lo, double hi) {
    return {Kind::uniform, lo, hi};
  }
};

struct ScenarioData {
  ContingencyTable table;
  DistanceMatrix distance;
};

/// A named, seeded generator of (table, distance) replicates.
struct Scenario {
  std::string name;
  std::function<ScenarioData(std::uint64_t seed)> generate;
};

/// Samples n points per group, bins the pooled sample into equal-width bins
/// over the pooled range, drops empty bins, and uses rank differences on
/// the retained bins as the category distance.
ScenarioData binned_scenario(const SampleDist& dist_a, const SampleDist& dist_b,
                             int n_per_group, int bins, std::uint64_t seed);

/// Exact Mallows distribution over all rankings of zeta0's length
/// (enumeration; at most 8 objects): P(zeta) propto exp(-theta d(zeta, zeta0)).
struct MallowsDistribution {
  std::vector<Ranking> rankings;
  std::vector<double> probabilities;
};
MallowsDistribution mallows_distribution(const Ranking& zeta0, double theta, RankMetric metric);

/// i.i.d. draws from the exact Mallows distribution (inverse CDF).
std::vector<Ranking> mallows_sample(int n, const Ranking& zeta0, double theta,
                                    RankMetric metric, std::uint64_t seed);

/// Two ranking populations: group a uniform, group b Mallows(theta) around
/// zeta0.  Categories are the observed rankings; the graph distance metric
/// may differ from the generating one.
ScenarioData mallows_scenario(int n_a, int n_b, const Ranking& zeta0, double theta,
                              RankMetric generating_metric, RankMetric graph_metric,
                              std::uint64_t seed);

/// Haplotypes uniform over {0,1}^length; group-a ("patient") probability is
/// base_rate + 0.1 * (positions agreeing with `target` among `informative`).
/// Categories are the observed haplotypes under Hamming distance.
/// With no informative positions the labels are independent of the
/// haplotype (a null scenario); base_rate 0.5 gives balanced groups.
ScenarioData haplotype_scenario(int n_subjects, int length,
                                const std::vector<int>& informative,
                                const std::string& target, std::uint64_t seed,
                                double base_rate = 0.3);

struct PowerRow {
  std::string statistic;
  double alpha = 0.0;
  double power = 0.0;
  double stderr_ = 0.0;
  int runs = 0;
};

struct PowerTable {
  std::vector<PowerRow> rows;
};

/// Estimated rejection rate per statistic and alpha over seeded replicates;
/// p-values from b_draws permutations each.
PowerTable power_study(const Scenario& scenario, const std::vector<TestStatistic>& statistics,
                       const std::vector<double>& alphas, int runs, long long b_draws,
                       std::uint64_t seed, int threads = 1);

struct AccuracyRow {
  int length = 0;
  long long n = 0;
  std::string statistic;
  int run = 0;
  double p_normal = 0.0;
  double p_perm = 0.0;
  double diff = 0.0;  // p_normal - p_perm
};

struct AccuracyTable {
  std::vector<AccuracyRow> rows;
};

/// Null-haplotype p-value accuracy study: per (length, N) cell and per
/// statistic (C-uMST, C-uNNG, uMST), the difference between the
/// normal-approximation p-value and the permutation p-value.
AccuracyTable pvalue_accuracy(const std::vector<int>& lengths,
                              const std::vector<long long>& sizes, int runs,
                              long long b_draws, std::uint64_t seed, int threads = 1);

/// Quartiles of the diffs of one (length, N, statistic) cell.
struct AccuracySummary {
  int length = 0;
  long long n = 0;
  std::string statistic;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double median_abs = 0.0;
};
std::vector<AccuracySummary> summarize_accuracy(const AccuracyTable& table);

/// Built-in scenarios for the CLI: normal-shift, normal-scale,
/// normal-shift-scale, uniform-shift, normal-null, mallows, haplotype,
/// haplotype-null.
Scenario make_named_scenario(const std::string& name, std::uint64_t /*unused*/ = 0);

}  // namespace catgraph
