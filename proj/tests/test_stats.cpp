#include <doctest.h>

#include <cmath>

#include "catgraph/errors.hpp"
#include "catgraph/stats.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace catgraph;

namespace {

double rat(const oracle::BigRational& r) { return static_cast<double>(r); }

ContingencyTable random_small_table(int max_k, Count max_n, Rng& rng) {
  while (true) {
    const int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_k)));
    auto t = testutil::random_table(k, 3, 2, rng);
    if (t.n() <= max_n) return t;
  }
}

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("cross_edge_count") {
  CHECK(cross_edge_count({{0, 1}}, {Group::a, Group::b}) == 1);
  CHECK(cross_edge_count({{0, 1}, {1, 2}, {0, 2}}, {Group::a, Group::a, Group::a}) == 0);
  CHECK(cross_edge_count({{0, 1}, {1, 2}, {0, 2}}, {Group::a, Group::a, Group::b}) == 2);
}

TEST_CASE("r_amst on the chain example") {
  const auto v = r_amst(testutil::chain_table(), testutil::chain_distance());
  CHECK(v.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.kind == StatKind::amst);
}

TEST_CASE("r_amst trivial cases") {
  const auto all_a = testutil::make_table({2, 1}, {0, 0});
  CHECK(r_amst(all_a, testutil::to_matrix({{0, 1}, {1, 0}})).value == 0.0);

  const auto single = testutil::make_table({2}, {2});
  CHECK(r_amst(single, testutil::to_matrix({{0}})).value == doctest::Approx(2.0));
}

TEST_CASE("r_umst examples") {
  CHECK(r_umst(testutil::chain_table(), testutil::chain_distance()).value == 5.0);
  CHECK(r_umst(testutil::make_table({2}, {3}), testutil::to_matrix({{0}})).value == 6.0);
  CHECK(r_umst(testutil::make_table({2, 1}, {0, 0}), testutil::to_matrix({{0, 1}, {1, 0}}))
            .value == 0.0);
}

TEST_CASE("r_c0 examples") {
  const auto table = testutil::chain_table();
  const CategoryGraph mst(3, {{0, 1}, {1, 2}});
  CHECK(r_c0(table, mst).value == doctest::Approx(2.0));
  CHECK(r_c0(table, CategoryGraph(3, {})).value == doctest::Approx(1.0));
  CHECK(r_c0(table, CategoryGraph(3, {{0, 2}})).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(r_c0(table, CategoryGraph(2, {})), ValidationError);
}

TEST_CASE("t_c0 examples") {
  const auto table = testutil::chain_table();
  CHECK(t_c0(table, CategoryGraph(3, {{0, 1}, {1, 2}})).value == 5.0);
  CHECK(t_c0(testutil::make_table({1, 1}, {1, 1}), CategoryGraph(2, {})).value == 2.0);
  CHECK(t_c0(testutil::make_table({0, 0}, {2, 2}), CategoryGraph(2, {{0, 1}})).value == 0.0);
}

TEST_CASE("r_amdp examples") {
  CHECK(r_amdp(testutil::make_table({2}, {2}), testutil::to_matrix({{0}})).value ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(r_amdp(testutil::make_table({1, 0}, {0, 1}), testutil::to_matrix({{0, 7}, {7, 0}}))
            .value == doctest::Approx(1.0));
  CHECK(r_amdp(testutil::make_table({2}, {0}), testutil::to_matrix({{0}})).value == 0.0);
}

TEST_CASE("r0 matches the closed form and tiny enumerations") {
  // mean cross pairs over uniform perfect pairings is n_a n_b / (m - 1)
  for (long long na = 0; na <= 7; ++na) {
    for (long long nb = 0; nb <= 7; ++nb) {
      if ((na + nb) % 2 != 0 || na + nb == 0) continue;
      CHECK(r0_mean_cross(na, nb) ==
            doctest::Approx(static_cast<double>(na * nb) / static_cast<double>(na + nb - 1))
                .epsilon(1e-12));
    }
  }
  CHECK(r0_mean_cross(0, 0) == 0.0);
  CHECK(r0_mean_cross(2, 2) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("r_unng_subjects examples") {
  CHECK(r_unng_subjects(testutil::chain_table(), testutil::chain_distance()).value == 1.0);

  // all singleton categories: reduces to the category uNNG cross count
  const auto singles = testutil::make_table({1, 0, 1}, {0, 1, 0});
  const auto d = testutil::chain_distance();
  const auto direct = r_unng_subjects(singles, d).value;
  const auto via_categories = t_c0(singles, unng_categories(d)).value;
  CHECK(direct == via_categories);

  CHECK(r_unng_subjects(testutil::make_table({2, 1}, {0, 0}), testutil::to_matrix({{0, 1}, {1, 0}}))
            .value == 0.0);
}

TEST_CASE("chisq examples") {
  const auto table = testutil::chain_table();
  CHECK(chisq(table, StatKind::pearson).value == doctest::Approx(4.0));
  CHECK(chisq(table, StatKind::deviance).value == doctest::Approx(8.0 * std::log(2.0)));

  const auto balanced = testutil::make_table({2, 1}, {2, 1});
  CHECK(chisq(balanced, StatKind::pearson).value == doctest::Approx(0.0));
  CHECK(chisq(balanced, StatKind::deviance).value == doctest::Approx(0.0));

  CHECK_THROWS_AS(chisq(testutil::make_table({2, 1}, {0, 0}), StatKind::pearson),
                  ValidationError);
  CHECK_THROWS_AS(chisq(table, StatKind::umst), ValidationError);
}

TEST_CASE("identity: t_c0 on the uMST equals r_umst") {
  Rng rng(888);
  for (int it = 0; it < 200; ++it) {
    const int k = 1 + static_cast<int>(rng.uniform_below(6));
    const auto table = testutil::random_table(k, 4, 1, rng);
    const auto d = testutil::to_matrix(testutil::random_int_distance(table.k(), 1, 4, rng));
    CHECK(t_c0(table, umst_edges(d)).value == r_umst(table, d).value);
  }
}

TEST_CASE("every statistic is invariant under swapping the groups") {
  Rng rng(4242);
  for (int it = 0; it < 30; ++it) {
    auto table = random_small_table(4, 10, rng);
    const auto swapped = testutil::make_table(table.counts_b(), table.counts_a());
    const auto d = testutil::to_matrix(testutil::random_int_distance(table.k(), 1, 3, rng));
    const auto g = testutil::random_graph(table.k(), 0.5, rng);

    CHECK(r_c0(table, g).value == doctest::Approx(r_c0(swapped, g).value).epsilon(1e-12));
    CHECK(t_c0(table, g).value == t_c0(swapped, g).value);
    CHECK(r_amst(table, d).value ==
          doctest::Approx(r_amst(swapped, d).value).epsilon(1e-12));
    CHECK(r_umst(table, d).value == r_umst(swapped, d).value);
    CHECK(r_amdp(table, d).value ==
          doctest::Approx(r_amdp(swapped, d).value).epsilon(1e-12));
    CHECK(r_unng_subjects(table, d).value == r_unng_subjects(swapped, d).value);
    if (table.n_a() > 0 && table.n_b() > 0) {
      CHECK(chisq(table, StatKind::pearson).value ==
            doctest::Approx(chisq(swapped, StatKind::pearson).value).epsilon(1e-12));
      CHECK(chisq(table, StatKind::deviance).value ==
            doctest::Approx(chisq(swapped, StatKind::deviance).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("node mixing potential never increases when a category is purified") {
  Rng rng(99);
  for (int it = 0; it < 50; ++it) {
    const auto table = random_small_table(5, 14, rng);
    auto na = table.counts_a();
    const auto m = table.margins();
    auto node_sum = [&](const std::vector<Count>& counts) {
      double s = 0.0;
      for (std::size_t u = 0; u < m.size(); ++u) {
        s += 2.0 * static_cast<double>(counts[u]) * static_cast<double>(m[u] - counts[u]) /
             static_cast<double>(m[u]);
      }
      return s;
    };
    for (std::size_t u = 0; u < m.size(); ++u) {
      if (na[u] == 0 || na[u] == m[u]) continue;  // already pure
      const double before = node_sum(na);
      auto pure = na;
      pure[u] = (na[u] >= m[u] - na[u]) ? m[u] : 0;  // flip the minority out
      CHECK(node_sum(pure) <= before + 1e-12);
    }
  }
}

TEST_CASE("special-case closed forms agree with the general statistic") {
  Rng rng(606);
  int unique_checked = 0;
  int equal_checked = 0;
  for (int it = 0; it < 120; ++it) {
    const auto table = random_small_table(4, 10, rng);
    const auto raw = testutil::random_int_distance(table.k(), 1, 3, rng);
    const auto d = testutil::to_matrix(raw);

    const auto trees = enumerate_msts(d, 10000);
    const double general = r_amst(table, d).value;

    if (trees.size() == 1) {
      // unique MST: closed form is r_c0 on the tree
      CHECK(general == doctest::Approx(r_c0(table, trees[0]).value).epsilon(1e-12));
      ++unique_checked;
    }

    bool equal_margins = true;
    for (int u = 1; u < table.k(); ++u) {
      if (table.margin(u) != table.margin(0)) equal_margins = false;
    }
    if (equal_margins) {
      // equal-count form: plain average of the edge mixing sums over trees
      const double m = static_cast<double>(table.margin(0));
      double node = 0.0;
      for (int u = 0; u < table.k(); ++u) {
        node += 2.0 * static_cast<double>(table.count_a(u)) *
                static_cast<double>(table.count_b(u)) / m;
      }
      double edge = 0.0;
      for (const auto& tree : trees) {
        for (const auto& [u, v] : tree.edges()) {
          edge += static_cast<double>(table.count_a(u) * table.count_b(v) +
                                      table.count_a(v) * table.count_b(u)) /
                  (m * m);
        }
      }
      edge /= static_cast<double>(trees.size());
      CHECK(general == doctest::Approx(node + edge).epsilon(1e-12));
      ++equal_checked;
    }
  }
  CHECK(unique_checked > 10);
  CHECK(equal_checked > 5);
}

TEST_CASE("r_amst matches the subject-level tree average (small oracle)") {
  Rng rng(1311);
  int done = 0;
  while (done < 40) {
    const auto table = random_small_table(4, 7, rng);
    if (table.n() < 2) continue;
    const auto raw = testutil::random_int_distance(table.k(), 1, 3, rng);
    const auto subjects = table.to_subjects();
    const auto brute =
        oracle::min_weight_subject_trees(subjects.categories, subjects.labels, raw);
    const auto formula = r_amst(table, testutil::to_matrix(raw));
    CHECK(formula.value == doctest::Approx(rat(brute.avg_cross)).epsilon(1e-12));
    ++done;
  }
}

TEST_CASE("r_amdp matches the literal sum and the pairing oracle") {
  Rng rng(7321);
  int done = 0;
  while (done < 40) {
    const auto table = random_small_table(3, 8, rng);
    // strict triangle inequality: distances in [10, 19]
    const auto raw = testutil::random_int_distance(table.k(), 10, 19, rng);
    const auto d = testutil::to_matrix(raw);

    const double lib = r_amdp(table, d).value;
    const double literal = rat(oracle::amdp_literal(table.counts_a(), table.counts_b(), raw));
    CHECK(lib == doctest::Approx(literal).epsilon(1e-12));

    const auto subjects = table.to_subjects();
    const double brute =
        rat(oracle::min_weight_pairing_average(subjects.categories, subjects.labels, raw));
    CHECK(lib == doctest::Approx(brute).epsilon(1e-12));
    ++done;
  }
}

TEST_CASE("r_amdp guards the odd-category count") {
  std::vector<Count> na(18, 1), nb(18, 0);
  const auto table = testutil::make_table(na, nb);
  Rng rng(5);
  const auto d = testutil::to_matrix(testutil::random_int_distance(18, 10, 19, rng));
  CHECK_THROWS_AS(r_amdp(table, d), TooManyOddCategories);
}

TEST_CASE("prepared statistics evaluate like the direct operations") {
  Rng rng(2024);
  for (int it = 0; it < 25; ++it) {
    const auto table = random_small_table(4, 12, rng);
    const auto d = testutil::to_matrix(testutil::random_int_distance(table.k(), 1, 3, rng));

    for (auto s : {TestStatistic::amst, TestStatistic::umst, TestStatistic::amdp,
                   TestStatistic::unng_subjects, TestStatistic::c_umst, TestStatistic::c_unng}) {
      const auto prepared = prepare_statistic(s, table, &d, nullptr);
      double direct = 0.0;
      switch (s) {
        case TestStatistic::amst: direct = r_amst(table, d).value; break;
        case TestStatistic::umst: direct = r_umst(table, d).value; break;
        case TestStatistic::amdp: direct = r_amdp(table, d).value; break;
        case TestStatistic::unng_subjects: direct = r_unng_subjects(table, d).value; break;
        case TestStatistic::c_umst: direct = r_c0(table, umst_edges(d)).value; break;
        case TestStatistic::c_unng: direct = r_c0(table, unng_categories(d)).value; break;
        default: break;
      }
      CHECK(prepared.observed == doctest::Approx(direct).epsilon(1e-9));
      CHECK(prepared.eval(table.counts_a()) == doctest::Approx(prepared.observed));
    }
  }
}

TEST_SUITE_END();
