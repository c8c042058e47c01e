#include "catgraph/table.hpp"

#include <algorithm>
#include <unordered_set>

#include "catgraph/errors.hpp"

namespace catgraph {

ContingencyTable ContingencyTable::from_records(const std::vector<Record>& rows) {
  ContingencyTable t;
  std::unordered_set<std::string> seen;
  for (const auto& [id, ca, cb] : rows) {
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate category id: " + id);
    }
    if (ca < 0 || cb < 0) {
      throw ValidationError("negative count for category " + id);
    }
    if (ca + cb == 0) {
      ++t.dropped_;
      continue;  // zero-margin categories carry no information
    }
    t.ids_.push_back(id);
    t.counts_a_.push_back(ca);
    t.counts_b_.push_back(cb);
    t.n_a_ += ca;
    t.n_b_ += cb;
  }
  if (t.ids_.empty()) {
    throw ValidationError("all margins zero: no category has a subject");
  }
  return t;
}

ContingencyTable ContingencyTable::from_subjects(const SubjectList& subjects,
                                                 const std::vector<std::string>& ids) {
  if (subjects.categories.size() != subjects.labels.size()) {
    throw ValidationError("subject categories and labels differ in length");
  }
  const int k = static_cast<int>(ids.size());
  std::vector<Count> ca(ids.size(), 0), cb(ids.size(), 0);
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const int cat = subjects.categories[i];
    if (cat < 0 || cat >= k) {
      throw ValidationError("subject category index out of range");
    }
    if (subjects.labels[i] == Group::a) {
      ++ca[static_cast<std::size_t>(cat)];
    } else {
      ++cb[static_cast<std::size_t>(cat)];
    }
  }
  std::vector<Record> rows;
  rows.reserve(ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    rows.emplace_back(ids[j], ca[j], cb[j]);
  }
  return from_records(rows);
}

SubjectList ContingencyTable::to_subjects() const {
  SubjectList s;
  s.categories.reserve(static_cast<std::size_t>(n()));
  s.labels.reserve(static_cast<std::size_t>(n()));
  for (int cat = 0; cat < k(); ++cat) {
    for (Count i = 0; i < count_a(cat); ++i) {
      s.categories.push_back(cat);
      s.labels.push_back(Group::a);
    }
    for (Count i = 0; i < count_b(cat); ++i) {
      s.categories.push_back(cat);
      s.labels.push_back(Group::b);
    }
  }
  return s;
}

std::vector<Count> ContingencyTable::margins() const {
  std::vector<Count> m(counts_a_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = counts_a_[i] + counts_b_[i];
  return m;
}

}  // namespace catgraph
