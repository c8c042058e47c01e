#include "catgraph/matching.hpp"

#include <algorithm>
#include <limits>

#include "catgraph/errors.hpp"

namespace catgraph {

namespace {

struct Search {
  const std::function<double(int, int)>* weight;
  double tol;
  std::uint64_t cap;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Edge> current;
  std::vector<Matching> found;

  void run(std::vector<int>& rem, double acc) {
    if (rem.empty()) {
      if (acc < best - tol) {
        best = acc;
        found.clear();
      }
      if (found.size() >= cap) {
        throw CapExceeded("minimum-matching enumeration exceeds cap",
                          BigInt(found.size() + 1));
      }
      Matching m;
      m.pairs = current;
      std::sort(m.pairs.begin(), m.pairs.end());
      found.push_back(std::move(m));
      return;
    }
    const int a = rem.front();
    for (std::size_t i = 1; i < rem.size(); ++i) {
      const int b = rem[i];
      const double w = acc + (*weight)(a, b);
      if (w > best + tol) continue;
      std::vector<int> next;
      next.reserve(rem.size() - 2);
      for (std::size_t j = 1; j < rem.size(); ++j) {
        if (j != i) next.push_back(rem[j]);
      }
      current.emplace_back(std::min(a, b), std::max(a, b));
      run(next, w);
      current.pop_back();
    }
  }
};

}  // namespace

std::vector<Matching> enumerate_min_matchings_weighted(
    const std::vector<int>& nodes, const std::function<double(int, int)>& weight,
    double tol, std::uint64_t cap) {
  if (nodes.size() % 2 != 0) throw ValidationError("matching node subset must have even size");
  if (nodes.size() > kMaxMatchingNodes) {
    throw SubsetTooLarge("matching subset larger than " + std::to_string(kMaxMatchingNodes) +
                         " nodes");
  }
  if (nodes.empty()) return {Matching{}};

  Search s;
  s.weight = &weight;
  s.tol = tol;
  s.cap = cap;
  std::vector<int> rem = nodes;
  std::sort(rem.begin(), rem.end());
  s.run(rem, 0.0);

  // branch-and-bound keeps near-minimal leaves; retain only true minima
  std::vector<Matching> out;
  for (auto& m : s.found) {
    double w = 0.0;
    for (const auto& [u, v] : m.pairs) w += weight(u, v);
    if (w <= s.best + tol) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(),
            [](const Matching& a, const Matching& b) { return a.pairs < b.pairs; });
  return out;
}

std::vector<Matching> enumerate_min_matchings(const DistanceMatrix& d,
                                              const std::vector<int>& nodes,
                                              std::uint64_t cap) {
  for (int v : nodes) {
    if (v < 0 || v >= d.k()) throw ValidationError("matching node index out of range");
  }
  auto weight = [&d](int u, int v) { return d.at(u, v); };
  return enumerate_min_matchings_weighted(nodes, weight, d.tie_tolerance(), cap);
}

}  // namespace catgraph
