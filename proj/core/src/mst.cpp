#include "catgraph/mst.hpp"

#include <algorithm>
#include <numeric>

#include "catgraph/errors.hpp"

namespace catgraph {

namespace {

struct WeightedEdge {
  double w;
  int u, v;
};

std::vector<WeightedEdge> sorted_edges(const DistanceMatrix& d) {
  const int k = d.k();
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k - 1) / 2);
  for (int u = 0; u < k; ++u) {
    for (int v = u + 1; v < k; ++v) {
      edges.push_back({d.at(u, v), u, v});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

/// [begin, end) ranges of equal-weight edges (within the tie tolerance,
/// measured from the class's first weight).
std::vector<std::pair<std::size_t, std::size_t>> weight_classes(
    const std::vector<WeightedEdge>& edges, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> classes;
  std::size_t begin = 0;
  while (begin < edges.size()) {
    std::size_t end = begin + 1;
    while (end < edges.size() && edges[end].w - edges[begin].w <= tol) ++end;
    classes.emplace_back(begin, end);
    begin = end;
  }
  return classes;
}

class Dsu {
 public:
  explicit Dsu(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(a)] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

/// Multigraph edge inside one weight-class block; `orig` indexes the
/// distance matrix's edge (u, v).
struct BlockEdge {
  int a, b;   // local vertex labels
  Edge orig;
};

/// Determinant of an n x n BigInt matrix by fraction-free Bareiss
/// elimination (all divisions exact).
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Spanning-tree count of a connected multigraph on n local vertices via
/// the Matrix-Tree theorem (Laplacian minor determinant).
BigInt matrix_tree_count(int n, const std::vector<BlockEdge>& edges) {
  if (n <= 1) return 1;
  std::vector<std::vector<BigInt>> lap(static_cast<std::size_t>(n - 1),
                                       std::vector<BigInt>(static_cast<std::size_t>(n - 1), 0));
  for (const auto& e : edges) {
    const int a = e.a, b = e.b;
    if (a < n - 1) lap[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] += 1;
    if (b < n - 1) lap[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)] += 1;
    if (a < n - 1 && b < n - 1) {
      lap[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -= 1;
      lap[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] -= 1;
    }
  }
  return bareiss_determinant(std::move(lap));
}

bool connected_on(const std::vector<int>& verts, const std::vector<BlockEdge>& edges,
                  int label_bound) {
  Dsu dsu(label_bound);
  for (const auto& e : edges) dsu.unite(e.a, e.b);
  for (std::size_t i = 1; i < verts.size(); ++i) {
    if (dsu.find(verts[i]) != dsu.find(verts[0])) return false;
  }
  return true;
}

/// All spanning trees of a connected multigraph by deletion-contraction.
/// Parallel edges are distinct (they carry different original edges).
void enumerate_block_trees(std::vector<int> verts, std::vector<BlockEdge> edges,
                           int label_bound, std::vector<Edge>& chosen,
                           std::vector<std::vector<Edge>>& out) {
  if (verts.size() == 1) {
    out.push_back(chosen);
    return;
  }
  const BlockEdge e = edges.front();

  // Trees containing e: contract b into a, drop self-loops.
  {
    std::vector<BlockEdge> contracted;
    contracted.reserve(edges.size() - 1);
    for (std::size_t i = 1; i < edges.size(); ++i) {
      BlockEdge f = edges[i];
      if (f.a == e.b) f.a = e.a;
      if (f.b == e.b) f.b = e.a;
      if (f.a != f.b) contracted.push_back(f);
    }
    std::vector<int> verts2;
    verts2.reserve(verts.size() - 1);
    for (int v : verts) {
      if (v != e.b) verts2.push_back(v);
    }
    chosen.push_back(e.orig);
    enumerate_block_trees(std::move(verts2), std::move(contracted), label_bound, chosen, out);
    chosen.pop_back();
  }

  // Trees avoiding e: delete, but only if the rest stays connected.
  {
    std::vector<BlockEdge> rest(edges.begin() + 1, edges.end());
    if (connected_on(verts, rest, label_bound)) {
      enumerate_block_trees(std::move(verts), std::move(rest), label_bound, chosen, out);
    }
  }
}

/// Per weight class: the class edges that join distinct components of the
/// forest built from strictly smaller classes, grouped into connected
/// blocks on the contracted vertices.  Every MST picks one spanning tree
/// per block, independently across blocks and classes.
struct Block {
  std::vector<int> verts;        // local labels 0..n-1
  std::vector<BlockEdge> edges;  // endpoints in local labels
};

template <typename PerBlock>
void for_each_class_block(const DistanceMatrix& d, PerBlock&& per_block) {
  const int k = d.k();
  auto edges = sorted_edges(d);
  auto classes = weight_classes(edges, d.tie_tolerance());
  Dsu dsu(k);
  for (const auto& [begin, end] : classes) {
    // class edges between distinct current components, in contracted labels
    std::vector<BlockEdge> live;
    for (std::size_t i = begin; i < end; ++i) {
      const int ru = dsu.find(edges[i].u);
      const int rv = dsu.find(edges[i].v);
      if (ru != rv) live.push_back({ru, rv, {edges[i].u, edges[i].v}});
    }
    if (!live.empty()) {
      // group into connected blocks
      Dsu grouping(k);
      for (const auto& e : live) grouping.unite(e.a, e.b);
      std::vector<std::pair<int, std::size_t>> roots;  // root -> block index
      std::vector<Block> blocks;
      auto block_of = [&](int root) -> Block& {
        for (auto& [r, idx] : roots) {
          if (r == root) return blocks[idx];
        }
        roots.emplace_back(root, blocks.size());
        blocks.emplace_back();
        return blocks.back();
      };
      auto local_label = [](Block& blk, int vert) {
        for (std::size_t i = 0; i < blk.verts.size(); ++i) {
          if (blk.verts[i] == vert) return static_cast<int>(i);
        }
        blk.verts.push_back(vert);
        return static_cast<int>(blk.verts.size() - 1);
      };
      for (const auto& e : live) {
        Block& blk = block_of(grouping.find(e.a));
        const int la = local_label(blk, e.a);
        const int lb = local_label(blk, e.b);
        blk.edges.push_back({la, lb, e.orig});
      }
      // edges are in local labels; renumber the vertex list to match
      for (auto& blk : blocks) {
        std::iota(blk.verts.begin(), blk.verts.end(), 0);
        per_block(blk);
      }
    }
    for (std::size_t i = begin; i < end; ++i) dsu.unite(edges[i].u, edges[i].v);
  }
}

}  // namespace

CategoryGraph mst_single(const DistanceMatrix& d) {
  const int k = d.k();
  auto edges = sorted_edges(d);
  Dsu dsu(k);
  std::vector<Edge> tree;
  tree.reserve(static_cast<std::size_t>(k > 0 ? k - 1 : 0));
  for (const auto& e : edges) {
    if (dsu.unite(e.u, e.v)) tree.emplace_back(e.u, e.v);
  }
  return CategoryGraph(k, std::move(tree));
}

CategoryGraph umst_edges(const DistanceMatrix& d) {
  const int k = d.k();
  auto edges = sorted_edges(d);
  auto classes = weight_classes(edges, d.tie_tolerance());
  Dsu dsu(k);
  std::vector<Edge> result;
  for (const auto& [begin, end] : classes) {
    for (std::size_t i = begin; i < end; ++i) {
      if (dsu.find(edges[i].u) != dsu.find(edges[i].v)) {
        result.emplace_back(edges[i].u, edges[i].v);
      }
    }
    for (std::size_t i = begin; i < end; ++i) dsu.unite(edges[i].u, edges[i].v);
  }
  return CategoryGraph(k, std::move(result));
}

BigInt count_msts(const DistanceMatrix& d) {
  BigInt total = 1;
  for_each_class_block(d, [&](const Block& blk) {
    total *= matrix_tree_count(static_cast<int>(blk.verts.size()), blk.edges);
  });
  return total;
}

std::vector<CategoryGraph> enumerate_msts(const DistanceMatrix& d, std::uint64_t cap) {
  const BigInt m = count_msts(d);
  if (m > cap) {
    throw CapExceeded("number of MSTs on categories (" + m.str() +
                          ") exceeds the enumeration cap (" + std::to_string(cap) + ")",
                      m);
  }

  std::vector<std::vector<std::vector<Edge>>> block_choices;
  for_each_class_block(d, [&](const Block& blk) {
    std::vector<std::vector<Edge>> trees;
    std::vector<Edge> chosen;
    enumerate_block_trees(blk.verts, blk.edges, d.k(), chosen, trees);
    block_choices.push_back(std::move(trees));
  });

  std::vector<CategoryGraph> result;
  result.reserve(static_cast<std::size_t>(m));
  std::vector<std::size_t> odometer(block_choices.size(), 0);
  while (true) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < block_choices.size(); ++b) {
      const auto& t = block_choices[b][odometer[b]];
      edges.insert(edges.end(), t.begin(), t.end());
    }
    result.emplace_back(d.k(), std::move(edges));
    std::size_t pos = block_choices.size();
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < block_choices[pos].size()) break;
      odometer[pos] = 0;
      if (pos == 0) {
        std::sort(result.begin(), result.end());
        return result;
      }
    }
    if (block_choices.empty()) {
      std::sort(result.begin(), result.end());
      return result;
    }
  }
}

}  // namespace catgraph
