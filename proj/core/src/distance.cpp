#include "catgraph/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "catgraph/errors.hpp"

namespace catgraph {

namespace {

constexpr double kSymmetryTol = 1e-9;

DistanceMatrix build_from_integer_distances(
    int k, const std::vector<std::vector<long long>>& d) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(k),
                                        std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<double>(d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return DistanceMatrix::from_rows(rows);
}

}  // namespace

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.size();
  if (k == 0) throw ValidationError("distance matrix is empty");
  for (const auto& r : rows) {
    if (r.size() != k) throw ValidationError("distance matrix is not square");
  }
  DistanceMatrix m;
  m.k_ = static_cast<int>(k);
  m.data_.resize(k * k);
  m.integral_ = true;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = rows[i][j];
      if (!std::isfinite(v)) throw ValidationError("non-finite distance entry");
      if (v < 0) throw ValidationError("negative entry in distance matrix");
      if (i == j && v != 0.0) throw ValidationError("nonzero diagonal in distance matrix");
      if (i != j && v == 0.0) {
        throw ValidationError("zero off-diagonal distance: categories must be distinct");
      }
      if (std::abs(v - rows[j][i]) > kSymmetryTol) {
        throw ValidationError("asymmetric distance matrix");
      }
      if (v != std::floor(v)) m.integral_ = false;
      m.data_[i * k + j] = v;
    }
  }
  return m;
}

Ranking::Ranking(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  const int n = static_cast<int>(ranks_.size());
  if (n == 0) throw ValidationError("empty ranking");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int r : ranks_) {
    if (r < 1 || r > n || seen[static_cast<std::size_t>(r - 1)]) {
      throw ValidationError("invalid permutation: ranks must be 1..n exactly once");
    }
    seen[static_cast<std::size_t>(r - 1)] = true;
  }
}

Ranking Ranking::parse(const std::string& digits) {
  std::vector<int> r;
  r.reserve(digits.size());
  for (char c : digits) {
    if (c < '1' || c > '9') throw ValidationError("ranking string must be digits 1-9: " + digits);
    r.push_back(c - '0');
  }
  return Ranking(std::move(r));
}

std::string Ranking::to_string() const {
  std::string s;
  for (int r : ranks_) s.push_back(static_cast<char>('0' + r));
  return s;
}

long long ranking_distance(RankMetric metric, const Ranking& x, const Ranking& y) {
  if (x.size() != y.size()) throw ValidationError("rankings differ in length");
  const int n = x.size();
  switch (metric) {
    case RankMetric::kendall: {
      long long discordant = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const long long a = x.rank_of(i) - x.rank_of(j);
          const long long b = y.rank_of(i) - y.rank_of(j);
          if (a * b < 0) ++discordant;
        }
      }
      return discordant;
    }
    case RankMetric::spearman_sq: {
      long long s = 0;
      for (int i = 0; i < n; ++i) {
        const long long d = x.rank_of(i) - y.rank_of(i);
        s += d * d;
      }
      return s;
    }
    case RankMetric::spearman_footrule: {
      long long s = 0;
      for (int i = 0; i < n; ++i) s += std::llabs(static_cast<long long>(x.rank_of(i) - y.rank_of(i)));
      return s;
    }
  }
  throw ValidationError("unknown ranking metric");
}

long long hamming_distance(const std::string& x, const std::string& y) {
  if (x.size() != y.size()) throw ValidationError("hamming: strings differ in length");
  long long d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) ++d;
  }
  return d;
}

DistanceMatrix pairwise_distance(RankMetric metric, const std::vector<Ranking>& items) {
  const int k = static_cast<int>(items.size());
  std::vector<std::vector<long long>> d(static_cast<std::size_t>(k),
                                        std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const long long v = ranking_distance(metric, items[static_cast<std::size_t>(i)],
                                           items[static_cast<std::size_t>(j)]);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  }
  return build_from_integer_distances(k, d);
}

DistanceMatrix pairwise_hamming(const std::vector<std::string>& items) {
  const int k = static_cast<int>(items.size());
  std::vector<std::vector<long long>> d(static_cast<std::size_t>(k),
                                        std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const long long v = hamming_distance(items[static_cast<std::size_t>(i)],
                                           items[static_cast<std::size_t>(j)]);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  }
  return build_from_integer_distances(k, d);
}

DistanceMatrix pairwise_rank_diff(const std::vector<long long>& ranks) {
  const int k = static_cast<int>(ranks.size());
  std::vector<std::vector<long long>> d(static_cast<std::size_t>(k),
                                        std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const long long v = std::llabs(ranks[static_cast<std::size_t>(i)] -
                                     ranks[static_cast<std::size_t>(j)]);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  }
  return build_from_integer_distances(k, d);
}

DistanceMatrix load_matrix(const std::vector<std::vector<double>>& raw,
                           const std::vector<std::string>& ids) {
  if (raw.size() != ids.size()) {
    throw ValidationError("distance matrix size does not match category count");
  }
  return DistanceMatrix::from_rows(raw);
}

}  // namespace catgraph
