#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "catgraph/distance.hpp"
#include "catgraph/graph.hpp"

namespace catgraph {

inline constexpr int kMaxMatchingNodes = 16;

/// A perfect matching on a designated node subset: disjoint unordered pairs
/// covering every node exactly once.
struct Matching {
  std::vector<Edge> pairs;  // sorted

  bool operator==(const Matching& other) const { return pairs == other.pairs; }
};

/// All perfect matchings on `nodes` achieving minimum total distance.
/// Brute-force with branch-and-bound; |nodes| must be even and <= 16.
std::vector<Matching> enumerate_min_matchings(const DistanceMatrix& d,
                                              const std::vector<int>& nodes,
                                              std::uint64_t cap = 1'000'000);

/// Generic-weight variant used internally (e.g. with a pseudo node at
/// distance zero for odd N).  `weight(u, v)` must be symmetric and
/// nonnegative; ties are resolved within `tol`.
std::vector<Matching> enumerate_min_matchings_weighted(
    const std::vector<int>& nodes, const std::function<double(int, int)>& weight,
    double tol, std::uint64_t cap);

}  // namespace catgraph
