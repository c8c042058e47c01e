#pragma once

#include <string>
#include <vector>

namespace catgraph {

/// Symmetric K x K nonnegative distance matrix on categories.
/// Off-diagonal entries are strictly positive (distinct categories),
/// diagonal is zero.
class DistanceMatrix {
 public:
  /// Validates symmetry (tolerance 1e-9), zero diagonal, positivity.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int k() const { return k_; }
  double at(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(k_) +
                 static_cast<std::size_t>(j)];
  }

  /// True when every entry is an integer; integer matrices get exact tie
  /// comparison, real-valued ones use the 1e-9 tie tolerance.  MST
  /// multiplicity is discontinuous in ties, so the rule must be explicit.
  bool is_integral() const { return integral_; }
  double tie_tolerance() const { return integral_ ? 0.0 : 1e-9; }

 private:
  DistanceMatrix() = default;

  int k_ = 0;
  bool integral_ = true;
  std::vector<double> data_;
};

/// A full ranking of n objects: position i holds the rank of object i,
/// each rank in 1..n exactly once.
class Ranking {
 public:
  explicit Ranking(std::vector<int> ranks);

  /// Parse a digit string like "2143" (n <= 9).
  static Ranking parse(const std::string& digits);

  int size() const { return static_cast<int>(ranks_.size()); }
  int rank_of(int object) const { return ranks_[static_cast<std::size_t>(object)]; }
  const std::vector<int>& ranks() const { return ranks_; }
  std::string to_string() const;

  bool operator==(const Ranking& other) const { return ranks_ == other.ranks_; }

 private:
  std::vector<int> ranks_;
};

enum class RankMetric { kendall, spearman_sq, spearman_footrule };

/// Number of discordant pairs (kendall), sum of squared rank differences
/// (spearman_sq), or sum of absolute rank differences (footrule).
long long ranking_distance(RankMetric metric, const Ranking& x, const Ranking& y);

/// Count of differing positions between equal-length strings.
long long hamming_distance(const std::string& x, const std::string& y);

DistanceMatrix pairwise_distance(RankMetric metric, const std::vector<Ranking>& items);
DistanceMatrix pairwise_hamming(const std::vector<std::string>& items);
/// d(u, v) = |rank_u - rank_v|.
DistanceMatrix pairwise_rank_diff(const std::vector<long long>& ranks);

/// Validated load of a user-supplied matrix; `ids` only sets the expected
/// dimension (id joining happens in the CSV layer).
DistanceMatrix load_matrix(const std::vector<std::vector<double>>& raw,
                           const std::vector<std::string>& ids);

}  // namespace catgraph
