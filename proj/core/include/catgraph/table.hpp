#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace catgraph {

using Count = long long;

enum class Group : std::uint8_t { a = 0, b = 1 };

/// Subjects in expanded form: category index and group mark per subject.
struct SubjectList {
  std::vector<int> categories;  // Y_1..Y_N, values in [0, K)
  std::vector<Group> labels;    // g_1..g_N

  std::size_t size() const { return categories.size(); }
};

/// 2xK contingency table with margins.  Categories with zero margin are
/// dropped on construction; the remaining categories keep their input order
/// and are addressed by dense index 0..K-1 everywhere else in the library.
/// Immutable after construction.
class ContingencyTable {
 public:
  using Record = std::tuple<std::string, Count, Count>;

  static ContingencyTable from_records(const std::vector<Record>& rows);
  static ContingencyTable from_subjects(const SubjectList& subjects,
                                        const std::vector<std::string>& ids);

  /// Canonical expansion: category-major, group a before group b.
  /// from_subjects(to_subjects(T), T.category_ids()) == T.
  SubjectList to_subjects() const;

  int k() const { return static_cast<int>(ids_.size()); }
  Count n_a() const { return n_a_; }
  Count n_b() const { return n_b_; }
  Count n() const { return n_a_ + n_b_; }

  Count count_a(int cat) const { return counts_a_[static_cast<std::size_t>(cat)]; }
  Count count_b(int cat) const { return counts_b_[static_cast<std::size_t>(cat)]; }
  Count margin(int cat) const {
    return counts_a_[static_cast<std::size_t>(cat)] + counts_b_[static_cast<std::size_t>(cat)];
  }

  const std::vector<Count>& counts_a() const { return counts_a_; }
  const std::vector<Count>& counts_b() const { return counts_b_; }
  std::vector<Count> margins() const;
  const std::vector<std::string>& category_ids() const { return ids_; }

  /// Number of zero-margin categories dropped during construction.
  int dropped_categories() const { return dropped_; }

  bool operator==(const ContingencyTable& other) const {
    return ids_ == other.ids_ && counts_a_ == other.counts_a_ && counts_b_ == other.counts_b_;
  }

 private:
  ContingencyTable() = default;

  std::vector<std::string> ids_;
  std::vector<Count> counts_a_;
  std::vector<Count> counts_b_;
  Count n_a_ = 0;
  Count n_b_ = 0;
  int dropped_ = 0;
};

}  // namespace catgraph
