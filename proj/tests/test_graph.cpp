#include <doctest.h>

#include <algorithm>
#include <set>

#include "catgraph/errors.hpp"
#include "catgraph/graph.hpp"
#include "catgraph/matching.hpp"
#include "catgraph/mst.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace catgraph;

TEST_SUITE_BEGIN("graph");

TEST_CASE("mst_single on the chain example") {
  const auto d = testutil::chain_distance();
  const auto t = mst_single(d);
  CHECK(t.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(t.is_spanning_tree());
}

TEST_CASE("mst_single trivial sizes") {
  CHECK(mst_single(testutil::to_matrix({{0}})).edges().empty());
  CHECK(mst_single(testutil::to_matrix({{0, 3}, {3, 0}})).edges() ==
        std::vector<Edge>{{0, 1}});
}

TEST_CASE("umst_edges examples") {
  CHECK(umst_edges(testutil::chain_distance()).edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  // all-ties triangle: every spanning tree is an MST
  CHECK(umst_edges(testutil::to_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})).edge_count() == 3);
  // Hamming square {00, 01, 10, 11}: the four unit edges, diagonals excluded
  const auto d = pairwise_hamming({"00", "01", "10", "11"});
  const auto u = umst_edges(d);
  CHECK(u.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("count_msts on hypercubes matches the known counts") {
  auto hypercube = [](int length) {
    std::vector<std::string> ids;
    for (int b = 0; b < (1 << length); ++b) {
      std::string s(static_cast<std::size_t>(length), '0');
      for (int i = 0; i < length; ++i) {
        if ((b >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
      }
      ids.push_back(s);
    }
    return pairwise_hamming(ids);
  };
  CHECK(count_msts(hypercube(2)) == 4);
  CHECK(count_msts(hypercube(3)) == 384);
  CHECK(count_msts(testutil::chain_distance()) == 1);
}

TEST_CASE("enumerate_msts examples") {
  const auto chain = enumerate_msts(testutil::chain_distance(), 100);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].edges() == std::vector<Edge>{{0, 1}, {1, 2}});

  const auto triangle = enumerate_msts(testutil::to_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), 100);
  CHECK(triangle.size() == 3);

  const auto square = enumerate_msts(pairwise_hamming({"00", "01", "10", "11"}), 100);
  CHECK(square.size() == 4);
  for (const auto& t : square) CHECK(t.is_spanning_tree());
}

TEST_CASE("enumerate_msts throws CapExceeded with the exact count") {
  const auto d = testutil::to_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  try {
    enumerate_msts(d, 2);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.count() == 3);
  }
}

TEST_CASE("unng_categories examples") {
  CHECK(unng_categories(testutil::chain_distance()).edges() ==
        std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(unng_categories(testutil::to_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})).edge_count() ==
        3);
  CHECK(unng_categories(testutil::to_matrix({{0, 2}, {2, 0}})).edges() ==
        std::vector<Edge>{{0, 1}});
}

TEST_CASE("enumerate_min_matchings examples") {
  const auto two = enumerate_min_matchings(testutil::to_matrix({{0, 5}, {5, 0}}), {0, 1});
  REQUIRE(two.size() == 1);
  CHECK(two[0].pairs == std::vector<Edge>{{0, 1}});

  const auto all1 =
      enumerate_min_matchings(testutil::to_matrix({{0, 1, 1, 1},
                                                   {1, 0, 1, 1},
                                                   {1, 1, 0, 1},
                                                   {1, 1, 1, 0}}),
                              {0, 1, 2, 3});
  CHECK(all1.size() == 3);

  const auto path = enumerate_min_matchings(pairwise_rank_diff({1, 2, 3, 4}), {0, 1, 2, 3});
  REQUIRE(path.size() == 1);
  CHECK(path[0].pairs == std::vector<Edge>{{0, 1}, {2, 3}});

  Rng rng(1);
  const auto big = testutil::to_matrix(testutil::random_int_distance(18, 1, 3, rng));
  std::vector<int> too_many(18);
  for (int i = 0; i < 18; ++i) too_many[static_cast<std::size_t>(i)] = i;
  CHECK_THROWS_AS(enumerate_min_matchings(big, too_many), SubsetTooLarge);
}

TEST_CASE("count_embeddings") {
  // six categories with counts 2,3,1,4,3,2 and tree degrees 1,3,1,2,2,1
  const auto table = testutil::make_table({2, 3, 1, 4, 3, 2}, {0, 0, 0, 0, 0, 0});
  const CategoryGraph tree(6, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}});
  CHECK(count_embeddings(tree, table) == 15552);

  const auto ones = testutil::make_table({1, 1, 1}, {0, 0, 0});
  CHECK(count_embeddings(CategoryGraph(3, {{0, 1}, {1, 2}}), ones) == 1);

  CHECK(count_embeddings(CategoryGraph(3, {{0, 1}, {1, 2}}), testutil::chain_table()) == 16);

  CHECK_THROWS_AS(count_embeddings(CategoryGraph(3, {{0, 1}}), ones), ValidationError);
}

TEST_CASE("cayley_count") {
  CHECK(cayley_count(1) == 1);
  CHECK(cayley_count(2) == 1);
  CHECK(cayley_count(4) == 16);
  CHECK(cayley_count(7) == 16807);
  CHECK_THROWS_AS(cayley_count(0), ValidationError);
}

TEST_CASE("graph_summary") {
  const auto ones3 = testutil::make_table({1, 1, 1}, {0, 0, 0});
  const auto path = graph_summary(CategoryGraph(3, {{0, 1}, {1, 2}}), ones3);
  CHECK(path.degree == std::vector<int>{1, 2, 1});
  CHECK(path.lambda == 2);

  const auto ones4 = testutil::make_table({1, 1, 1, 1}, {0, 0, 0, 0});
  const auto star = graph_summary(CategoryGraph(4, {{0, 1}, {0, 2}, {0, 3}}), ones4);
  CHECK(star.lambda == 3);
  CHECK(star.two_hop[0] == 3);

  const auto empty = graph_summary(CategoryGraph(3, {}), ones3);
  CHECK(empty.lambda == 0);
  CHECK(empty.sum_inv_mumv == 0.0);
  CHECK(empty.edge_count == 0);

  CHECK_THROWS_AS(graph_summary(CategoryGraph(2, {}), ones3), ValidationError);
}

TEST_CASE("degree sum equals twice the edge count") {
  Rng rng(77);
  for (int it = 0; it < 20; ++it) {
    const int k = 2 + static_cast<int>(rng.uniform_below(6));
    const auto g = testutil::random_graph(k, 0.5, rng);
    long long sum = 0;
    for (int d : g.degrees()) sum += d;
    CHECK(sum == 2 * static_cast<long long>(g.edge_count()));
  }
}

TEST_CASE("MST engine agrees with brute force on random instances") {
  Rng rng(20240521);
  for (int it = 0; it < 60; ++it) {
    const int k = 2 + static_cast<int>(rng.uniform_below(5));  // K in 2..6
    const auto raw = testutil::random_int_distance(k, 1, 3, rng);
    const auto d = testutil::to_matrix(raw);
    const auto brute = oracle::min_weight_category_trees(raw);

    CHECK(count_msts(d) == BigInt(brute.trees.size()));

    const auto enumerated = enumerate_msts(d, 5000);
    REQUIRE(enumerated.size() == brute.trees.size());
    for (std::size_t i = 0; i < enumerated.size(); ++i) {
      CHECK(enumerated[i].edges() == brute.trees[i]);
      long long w = 0;
      for (const auto& [u, v] : enumerated[i].edges()) {
        w += raw[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      }
      CHECK(w == brute.min_weight);
    }

    CHECK(umst_edges(d).edges() == brute.edge_union);
  }
}

TEST_CASE("distinct weights give a unique MST equal to mst_single") {
  Rng rng(31);
  for (int it = 0; it < 20; ++it) {
    const int k = 2 + static_cast<int>(rng.uniform_below(5));
    // distinct weights: random permutation of 1..k(k-1)/2
    std::vector<long long> weights(static_cast<std::size_t>(k * (k - 1) / 2));
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = static_cast<long long>(i) + 1;
    rng.shuffle(weights);
    std::vector<std::vector<long long>> raw(static_cast<std::size_t>(k),
                                            std::vector<long long>(static_cast<std::size_t>(k)));
    std::size_t idx = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = weights[idx];
        raw[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = weights[idx];
        ++idx;
      }
    }
    const auto d = testutil::to_matrix(raw);
    CHECK(count_msts(d) == 1);
    CHECK(umst_edges(d).edges() == mst_single(d).edges());
  }
}

TEST_CASE("embedding counts tie out against subject-level tree enumeration") {
  // |T0| = sum of embeddings over category MSTs; |T| = |T0| prod cayley(m_k),
  // and |T| equals the count of min-weight labeled trees on the subjects.
  Rng rng(430);
  for (int it = 0; it < 12; ++it) {
    const int k = 1 + static_cast<int>(rng.uniform_below(3));
    auto table = testutil::random_table(k, 3, 2, rng);
    if (table.n() > 7) continue;
    const auto raw = testutil::random_int_distance(table.k(), 1, 3, rng);
    const auto d = testutil::to_matrix(raw);

    BigInt t0 = 0;
    for (const auto& tree : enumerate_msts(d, 100000)) {
      t0 += count_embeddings(tree, table);
    }
    BigInt t_full = t0;
    for (int u = 0; u < table.k(); ++u) t_full *= cayley_count(table.margin(u));

    const auto subjects = table.to_subjects();
    const auto brute = oracle::min_weight_subject_trees(subjects.categories, subjects.labels, raw);
    CHECK(brute.tree_count == t_full);
  }
}

TEST_SUITE_END();
