#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catgraph/graph.hpp"
#include "catgraph/stats.hpp"
#include "catgraph/table.hpp"

namespace catgraph {

/// First two moments of a statistic under a null distribution, with the
/// pair-probability building blocks:
///   p1 = n_a n_b / (N(N-1)),
///   p2 = 4 n_a(n_a-1) n_b(n_b-1) / (N(N-1)(N-2)(N-3))   (permutation null)
///   p3 = n_a n_b / N^2,  p4 = 4 p3^2                     (bootstrap null)
struct NullMoments {
  double mean = 0.0;
  double variance = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
};

/// Permutation-null mean/variance of R_C0 (closed form; requires N >= 4).
NullMoments perm_moments_r(const ContingencyTable& table, const CategoryGraph& c0);

/// Permutation-null mean/variance of T_C0 (closed form; requires N >= 4).
NullMoments perm_moments_t(const ContingencyTable& table, const CategoryGraph& c0);

/// Bootstrap-null mean/variance of R_C0 (labels redrawn i.i.d. from the
/// empirical frequencies).
NullMoments bootstrap_moments_r(const ContingencyTable& table, const CategoryGraph& c0);

struct NormalPValue {
  double z = 0.0;
  double p = 0.0;  // lower tail, Phi(z)
};

NormalPValue normal_pvalue(double value, const NullMoments& moments);

/// Statistic evaluated on the group-a count vector; margins are fixed.
using CountStatistic = std::function<double(const std::vector<Count>&)>;

struct McPermResult {
  double p = 1.0;         // (1 + #{S_b <= S_obs}) / (B + 1), lower tail
  long long le_count = 0; // #{S_b <= S_obs}
  long long draws = 0;
  double draw_mean = 0.0;
  double draw_sd = 0.0;
  bool degenerate = false;  // n_a = 0 or n_b = 0: p = 1 with a warning
};

/// Monte Carlo permutation p-value.  Draw b uses a generator seeded from
/// (seed, b), so the result is bitwise identical for any thread count.
McPermResult mc_perm_pvalue(const CountStatistic& fn, const ContingencyTable& table,
                            long long b_draws, std::uint64_t seed, int threads = 1);

struct ExactPermDistribution {
  std::vector<double> values;                    // ascending, distinct
  std::vector<unsigned long long> multiplicities;
  double total = 0.0;                            // C(N, n_a)
  double mean = 0.0;
  double variance = 0.0;

  double lower_tail_p(double observed) const;
};

/// Full permutation distribution by exhaustive enumeration of group-a count
/// vectors (assignment multiplicities are products of binomials).
/// Requires C(N, n_a) <= 1e6.
ExactPermDistribution exact_perm_distribution(const CountStatistic& fn,
                                              const ContingencyTable& table);

/// Finite-sample ratios for the normality conditions; advisory only.
struct ConditionReport {
  double hub_node = 0.0;        // hub sum over nodes / K^{3/2}
  double hub_edge = 0.0;        // hub sum over edges / K^{3/2}
  double hub_beta = 0.0;        // beta^6 lambda^2 / K
  double hub_lambda = 0.0;      // lambda^8 / K
  double n_over_k = 0.0;        // N / K
  double edges_over_k = 0.0;    // |C0| / K
  double inv_m_over_k = 0.0;    // sum 1/(m_u m_v) / K
  double t_hub_sum = 0.0;       // sum m_u (m_u + nbr mass)^2 / N
  double threshold = 1.0;
  std::vector<std::string> flags;
  bool questionable = false;
};

ConditionReport condition_diagnostics(const ContingencyTable& table, const CategoryGraph& c0,
                                      double threshold = 1.0);

enum class PValueMethod { permutation, normal, exact, both };

struct TestResult {
  StatisticValue statistic;
  std::optional<NullMoments> moments;
  std::optional<double> z;
  std::optional<double> p_normal;
  std::optional<double> p_perm;
  long long b = 0;
  std::uint64_t seed = 0;
  std::optional<ConditionReport> diagnostics;
  std::vector<std::string> warnings;
};

/// Full pipeline on a prepared statistic: moments (when its class has
/// them), normal p-value, and/or a permutation p-value.  Upper-tail kinds
/// (chi-square) are negated internally so the permutation comparison stays
/// one-sided in the rejection direction.
TestResult run_test(const ContingencyTable& table, const PreparedStatistic& stat,
                    PValueMethod method, long long b_draws, std::uint64_t seed,
                    int threads = 1);

}  // namespace catgraph
