#pragma once

#include <cstdint>
#include <vector>

#include "catgraph/bigint.hpp"
#include "catgraph/distance.hpp"
#include "catgraph/graph.hpp"

namespace catgraph {

inline constexpr std::uint64_t kDefaultMstCap = 1'000'000;

/// One minimum spanning tree of the complete category graph, deterministic
/// under ties (Kruskal over edges sorted by (weight, u, v)).
CategoryGraph mst_single(const DistanceMatrix& d);

/// Exactly the edges belonging to at least one MST.  Weight classes are
/// processed in ascending order with union-find; within a class an edge is
/// in some MST iff its endpoints lie in different components of the forest
/// built from strictly smaller weights.
CategoryGraph umst_edges(const DistanceMatrix& d);

/// Exact number of distinct MSTs, via the Matrix-Tree theorem applied per
/// weight class to each multigraph block on the current forest's components.
BigInt count_msts(const DistanceMatrix& d);

/// All M distinct MSTs when M <= cap, in a deterministic order
/// (lexicographic by sorted edge list).  Throws CapExceeded(M) otherwise.
std::vector<CategoryGraph> enumerate_msts(const DistanceMatrix& d,
                                          std::uint64_t cap = kDefaultMstCap);

}  // namespace catgraph
