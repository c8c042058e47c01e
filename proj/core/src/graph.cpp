#include "catgraph/graph.hpp"

#include <algorithm>
#include <numeric>

#include "catgraph/errors.hpp"

namespace catgraph {

CategoryGraph::CategoryGraph(int k, std::vector<Edge> edges) : k_(k) {
  if (k < 0) throw ValidationError("graph size must be nonnegative");
  for (auto& [u, v] : edges) {
    if (u == v) throw ValidationError("self-loop in category graph");
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= k) throw ValidationError("edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

std::vector<int> CategoryGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(k_), 0);
  for (const auto& [u, v] : edges_) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

bool CategoryGraph::is_spanning_tree() const {
  if (k_ == 0) return false;
  if (edges_.size() != static_cast<std::size_t>(k_) - 1) return false;
  std::vector<int> parent(static_cast<std::size_t>(k_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = k_;
  for (const auto& [u, v] : edges_) {
    const int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    parent[static_cast<std::size_t>(ru)] = rv;
    --components;
  }
  return components == 1;
}

GraphSummary graph_summary(const CategoryGraph& g, const ContingencyTable& table) {
  if (g.k() != table.k()) throw ValidationError("graph and table sizes differ");
  const int k = g.k();
  GraphSummary s;
  s.degree = g.degrees();
  s.two_hop.assign(static_cast<std::size_t>(k), 0);
  s.nbr_mass.assign(static_cast<std::size_t>(k), 0);
  s.edge_count = static_cast<long long>(g.edge_count());

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
  for (const auto& [u, v] : g.edges()) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (int u = 0; u < k; ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      s.nbr_mass[static_cast<std::size_t>(u)] += table.margin(v);
    }
  }
  // |E_{u,2}|: edges with at least one endpoint in V_u.
  std::vector<char> in_nbr(static_cast<std::size_t>(k), 0);
  for (int u = 0; u < k; ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) in_nbr[static_cast<std::size_t>(v)] = 1;
    long long cnt = 0;
    for (const auto& [x, y] : g.edges()) {
      if (in_nbr[static_cast<std::size_t>(x)] || in_nbr[static_cast<std::size_t>(y)]) ++cnt;
    }
    s.two_hop[static_cast<std::size_t>(u)] = cnt;
    for (int v : adj[static_cast<std::size_t>(u)]) in_nbr[static_cast<std::size_t>(v)] = 0;
  }

  for (int u = 0; u < k; ++u) {
    const double mu = static_cast<double>(table.margin(u));
    const double du = static_cast<double>(s.degree[static_cast<std::size_t>(u)]);
    s.lambda = std::max(s.lambda, s.degree[static_cast<std::size_t>(u)]);
    s.beta = std::max(s.beta, table.margin(u));
    s.sum_deg_over_m += du / mu;
    s.sum_deg_sq_over_m += du * du / mu;
    s.sum_inv_m += 1.0 / mu;
  }
  for (const auto& [u, v] : g.edges()) {
    s.sum_inv_mumv +=
        1.0 / (static_cast<double>(table.margin(u)) * static_cast<double>(table.margin(v)));
  }
  return s;
}

CategoryGraph unng_categories(const DistanceMatrix& d) {
  const int k = d.k();
  if (k < 2) return CategoryGraph(k, {});
  const double tol = d.tie_tolerance();
  std::vector<double> row_min(static_cast<std::size_t>(k));
  for (int u = 0; u < k; ++u) {
    double best = 0.0;
    bool first = true;
    for (int v = 0; v < k; ++v) {
      if (v == u) continue;
      if (first || d.at(u, v) < best) {
        best = d.at(u, v);
        first = false;
      }
    }
    row_min[static_cast<std::size_t>(u)] = best;
  }
  std::vector<Edge> edges;
  for (int u = 0; u < k; ++u) {
    for (int v = u + 1; v < k; ++v) {
      const double duv = d.at(u, v);
      if (duv <= row_min[static_cast<std::size_t>(u)] + tol ||
          duv <= row_min[static_cast<std::size_t>(v)] + tol) {
        edges.emplace_back(u, v);
      }
    }
  }
  return CategoryGraph(k, std::move(edges));
}

BigInt count_embeddings(const CategoryGraph& tree, const ContingencyTable& table) {
  if (tree.k() != table.k()) throw ValidationError("tree and table sizes differ");
  if (!tree.is_spanning_tree()) throw ValidationError("graph is not a spanning tree");
  BigInt result = 1;
  const auto deg = tree.degrees();
  for (int u = 0; u < tree.k(); ++u) {
    BigInt base = table.margin(u);
    for (int i = 0; i < deg[static_cast<std::size_t>(u)]; ++i) result *= base;
  }
  return result;
}

BigInt cayley_count(long long m) {
  if (m < 1) throw ValidationError("cayley_count requires m >= 1");
  if (m <= 2) return 1;
  BigInt result = 1;
  for (long long i = 0; i < m - 2; ++i) result *= m;
  return result;
}

}  // namespace catgraph
