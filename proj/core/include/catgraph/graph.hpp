#pragma once

#include <utility>
#include <vector>

#include "catgraph/bigint.hpp"
#include "catgraph/distance.hpp"
#include "catgraph/table.hpp"

namespace catgraph {

using Edge = std::pair<int, int>;  // unordered pair stored as (u, v) with u < v

/// Simple undirected graph on category indices 0..K-1.
/// Edges are kept sorted and deduplicated, so equal graphs compare equal.
class CategoryGraph {
 public:
  CategoryGraph() = default;
  CategoryGraph(int k, std::vector<Edge> edges);

  int k() const { return k_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::vector<int> degrees() const;
  bool is_spanning_tree() const;

  bool operator==(const CategoryGraph& other) const {
    return k_ == other.k_ && edges_ == other.edges_;
  }
  bool operator<(const CategoryGraph& other) const { return edges_ < other.edges_; }

 private:
  int k_ = 0;
  std::vector<Edge> edges_;
};

/// Degree/two-hop/hub summaries of a graph C0 against a table's margins;
/// the raw ingredients of the closed-form null moments and the
/// normality diagnostics.
struct GraphSummary {
  std::vector<int> degree;             // |E_u|
  std::vector<long long> two_hop;      // |E_{u,2}|: edges with an endpoint adjacent to u
  std::vector<long long> nbr_mass;     // sum of m_v over neighbors v of u
  int lambda = 0;                      // max degree
  long long beta = 0;                  // max m_u
  long long edge_count = 0;            // |C0|
  double sum_deg_over_m = 0.0;         // sum |E_u| / m_u
  double sum_deg_sq_over_m = 0.0;      // sum |E_u|^2 / m_u
  double sum_inv_mumv = 0.0;           // sum over edges of 1/(m_u m_v)
  double sum_inv_m = 0.0;              // sum 1/m_u
};

GraphSummary graph_summary(const CategoryGraph& g, const ContingencyTable& table);

/// Union nearest-neighbor graph on categories: (u,v) present iff v attains
/// u's minimum off-diagonal distance or u attains v's (all ties included).
CategoryGraph unng_categories(const DistanceMatrix& d);

/// Number of ways to embed a spanning tree of the categories onto the
/// subjects: prod_k m_k^(degree of k).
BigInt count_embeddings(const CategoryGraph& tree, const ContingencyTable& table);

/// Labeled spanning trees on m nodes: 1 for m <= 2, else m^(m-2).
BigInt cayley_count(long long m);

}  // namespace catgraph
