#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catgraph/distance.hpp"
#include "catgraph/graph.hpp"
#include "catgraph/matching.hpp"
#include "catgraph/mst.hpp"
#include "catgraph/table.hpp"

namespace catgraph {

enum class StatKind {
  amst,
  umst,
  c0,
  t_c0,
  amdp,
  unng_subjects,
  pearson,
  deviance,
};

std::string kind_name(StatKind kind);

struct StatisticValue {
  StatKind kind;
  double value = 0.0;
  std::string note;  // graph used, fallbacks taken
};

/// Number of edges whose endpoints carry different group marks.
long long cross_edge_count(const std::vector<Edge>& subject_edges,
                           const std::vector<Group>& labels);

/// Statistic averaging the cross-edge count over every MST on subjects.
/// Throws CapExceeded when the number of MSTs on categories exceeds `cap`;
/// callers should fall back to r_c0 on the uMST.
StatisticValue r_amst(const ContingencyTable& table, const DistanceMatrix& d,
                      std::uint64_t cap = kDefaultMstCap);

/// Statistic on the union of all MSTs (computed on categories).
StatisticValue r_umst(const ContingencyTable& table, const DistanceMatrix& d);

/// Mixing-potential statistic on an arbitrary similarity graph C0:
/// sum_k 2 n_ak n_bk / m_k + sum_(u,v) (n_au n_bv + n_av n_bu)/(m_u m_v).
StatisticValue r_c0(const ContingencyTable& table, const CategoryGraph& c0);

/// Unweighted count statistic on C0:
/// sum_u n_au n_bu + sum_(u,v) (n_au n_bv + n_bu n_av).
/// With C0 = uMST this equals r_umst.
StatisticValue t_c0(const ContingencyTable& table, const CategoryGraph& c0);

/// Statistic averaging the cross-edge count over every minimum-distance
/// pairing of the subjects (pseudo category appended when N is odd).
/// Requires at most 16 odd-count categories.
StatisticValue r_amdp(const ContingencyTable& table, const DistanceMatrix& d,
                      std::uint64_t cap = 1'000'000);

/// Cross-edge count on the union nearest-neighbor graph built on subjects.
StatisticValue r_unng_subjects(const ContingencyTable& table, const DistanceMatrix& d);

/// Category pairs (u, v) joined in the subject-level uNNG: u links out iff
/// m_u = 1 (otherwise its category-mates at distance zero are its nearest
/// neighbors), to every v attaining its minimum distance.
CategoryGraph unng_subject_pairs(const ContingencyTable& table, const DistanceMatrix& d);

StatisticValue chisq(const ContingencyTable& table, StatKind kind);

/// Average cross-pair count over all perfect pairings of n_a + n_b points
/// of one category; exact rational evaluation of the double-factorial
/// sum, with (-1)!! = 1 and a zero value for an empty category.
double r0_mean_cross(long long n_a, long long n_b);

/// Named statistic selection used by the CLI and the simulation studies.
enum class TestStatistic {
  amst,
  umst,
  amdp,
  unng_subjects,
  c_umst,   // r_c0 with C0 = uMST on categories
  c_unng,   // r_c0 with C0 = uNNG on categories
  r_c0_custom,
  t_c0_custom,
  pearson,
  deviance,
};

std::string test_statistic_name(TestStatistic s);
std::optional<TestStatistic> parse_test_statistic(const std::string& name);

/// Which analytic permutation moments apply to a prepared statistic.
enum class MomentClass { none, r_class, t_class };

/// A statistic bound to a table's fixed margins and graphs, ready for
/// permutation loops: eval() is a pure function of the group-a counts.
struct PreparedStatistic {
  TestStatistic statistic;
  StatKind kind;
  double observed = 0.0;
  std::function<double(const std::vector<Count>&)> eval;
  std::optional<CategoryGraph> c0;  // graph driving moments / diagnostics
  MomentClass moment_class = MomentClass::none;
  bool lower_tail = true;  // graph statistics reject for small values
  std::string note;
};

PreparedStatistic prepare_statistic(TestStatistic statistic, const ContingencyTable& table,
                                    const DistanceMatrix* d, const CategoryGraph* custom_c0,
                                    std::uint64_t cap = kDefaultMstCap);

}  // namespace catgraph
