#include "catgraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "catgraph/errors.hpp"

namespace catgraph {

namespace {

double frac(const BigRational& r) { return static_cast<double>(r); }

BigInt double_factorial(long long n) {
  BigInt result = 1;
  while (n > 1) {
    result *= n;
    n -= 2;
  }
  return result;
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  BigInt result = 1;
  for (long long i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

/// eq:R0 as an exact rational: the average number of cross pairs over all
/// perfect pairings of n_a + n_b points in one category.
BigRational r0_rational(long long n_a, long long n_b) {
  if (n_a < 0 || n_b < 0) throw ValidationError("r0: negative count");
  const long long m = n_a + n_b;
  if (m == 0) return 0;
  if (m % 2 != 0) throw ValidationError("r0: group sizes must have even total");
  const BigInt denom = double_factorial(m - 1);
  BigInt numer = 0;
  const long long start = (n_a % 2 == 0) ? 0 : 1;
  for (long long i = start; i <= std::min(n_a, n_b); i += 2) {
    BigInt term = i;
    term *= binomial(n_a, i);
    term *= binomial(n_b, i);
    BigInt fact = 1;
    for (long long f = 2; f <= i; ++f) fact *= f;
    term *= fact;
    term *= double_factorial(n_a - i - 1);
    term *= double_factorial(n_b - i - 1);
    numer += term;
  }
  return BigRational(numer, denom);
}

double node_mixing_sum(const std::vector<Count>& na, const std::vector<Count>& m) {
  double s = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double nb = static_cast<double>(m[k] - na[k]);
    s += 2.0 * static_cast<double>(na[k]) * nb / static_cast<double>(m[k]);
  }
  return s;
}

struct AmstWeights {
  // per uMST edge: probability-weight sum(tau contains e) w_tau / |T0|
  std::vector<Edge> edges;
  std::vector<BigRational> exact;
  std::vector<double> approx;
  BigInt tree_count;
};

AmstWeights amst_edge_weights(const ContingencyTable& table, const DistanceMatrix& d,
                              std::uint64_t cap) {
  const auto trees = enumerate_msts(d, cap);  // throws CapExceeded when M > cap
  std::map<Edge, BigInt> numer;
  BigInt t0 = 0;
  for (const auto& tree : trees) {
    // embedding count of this tree: prod_k m_k^{deg_k}
    BigInt w = 1;
    const auto deg = tree.degrees();
    for (int k = 0; k < table.k(); ++k) {
      for (int i = 0; i < deg[static_cast<std::size_t>(k)]; ++i) w *= table.margin(k);
    }
    t0 += w;
    for (const auto& e : tree.edges()) numer[e] += w;
  }
  if (t0 == 0) t0 = 1;  // K = 1: single empty tree with weight 1
  AmstWeights out;
  out.tree_count = static_cast<BigInt>(trees.size());
  for (const auto& [e, num] : numer) {
    out.edges.push_back(e);
    BigRational r(num, t0);
    out.approx.push_back(frac(r));
    out.exact.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string kind_name(StatKind kind) {
  switch (kind) {
    case StatKind::amst: return "aMST";
    case StatKind::umst: return "uMST";
    case StatKind::c0: return "R-C0";
    case StatKind::t_c0: return "T-C0";
    case StatKind::amdp: return "aMDP";
    case StatKind::unng_subjects: return "uNNG";
    case StatKind::pearson: return "pearson";
    case StatKind::deviance: return "deviance";
  }
  return "?";
}

long long cross_edge_count(const std::vector<Edge>& subject_edges,
                           const std::vector<Group>& labels) {
  long long c = 0;
  for (const auto& [i, j] : subject_edges) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= labels.size() ||
        static_cast<std::size_t>(j) >= labels.size()) {
      throw ValidationError("cross_edge_count: edge endpoint out of range");
    }
    if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) ++c;
  }
  return c;
}

double r0_mean_cross(long long n_a, long long n_b) { return frac(r0_rational(n_a, n_b)); }

StatisticValue r_c0(const ContingencyTable& table, const CategoryGraph& c0) {
  if (c0.k() != table.k()) throw ValidationError("graph and table sizes differ");
  double value = 0.0;
  for (int k = 0; k < table.k(); ++k) {
    value += 2.0 * static_cast<double>(table.count_a(k)) * static_cast<double>(table.count_b(k)) /
             static_cast<double>(table.margin(k));
  }
  for (const auto& [u, v] : c0.edges()) {
    value += static_cast<double>(table.count_a(u) * table.count_b(v) +
                                 table.count_a(v) * table.count_b(u)) /
             static_cast<double>(table.margin(u) * table.margin(v));
  }
  return {StatKind::c0, value, ""};
}

StatisticValue t_c0(const ContingencyTable& table, const CategoryGraph& c0) {
  if (c0.k() != table.k()) throw ValidationError("graph and table sizes differ");
  long long value = 0;
  for (int k = 0; k < table.k(); ++k) value += table.count_a(k) * table.count_b(k);
  for (const auto& [u, v] : c0.edges()) {
    value += table.count_a(u) * table.count_b(v) + table.count_b(u) * table.count_a(v);
  }
  return {StatKind::t_c0, static_cast<double>(value), ""};
}

StatisticValue r_umst(const ContingencyTable& table, const DistanceMatrix& d) {
  if (d.k() != table.k()) throw ValidationError("distance and table sizes differ");
  const CategoryGraph umst = umst_edges(d);
  auto v = t_c0(table, umst);
  return {StatKind::umst, v.value, "C0=uMST, " + std::to_string(umst.edge_count()) + " edges"};
}

StatisticValue r_amst(const ContingencyTable& table, const DistanceMatrix& d,
                      std::uint64_t cap) {
  if (d.k() != table.k()) throw ValidationError("distance and table sizes differ");
  const auto weights = amst_edge_weights(table, d, cap);
  BigRational value = 0;
  for (int k = 0; k < table.k(); ++k) {
    value += BigRational(2 * table.count_a(k) * table.count_b(k), table.margin(k));
  }
  for (std::size_t i = 0; i < weights.edges.size(); ++i) {
    const auto [u, v] = weights.edges[i];
    value += weights.exact[i] *
             BigRational(table.count_a(u) * table.count_b(v) + table.count_a(v) * table.count_b(u),
                         table.margin(u) * table.margin(v));
  }
  return {StatKind::amst, frac(value), "M=" + weights.tree_count.str()};
}

CategoryGraph unng_subject_pairs(const ContingencyTable& table, const DistanceMatrix& d) {
  if (d.k() != table.k()) throw ValidationError("distance and table sizes differ");
  const int k = table.k();
  const double tol = d.tie_tolerance();
  std::vector<Edge> pairs;
  for (int u = 0; u < k; ++u) {
    if (table.margin(u) != 1) continue;  // category-mates at distance 0 are nearest
    double best = 0.0;
    bool first = true;
    for (int v = 0; v < k; ++v) {
      if (v == u) continue;
      if (first || d.at(u, v) < best) {
        best = d.at(u, v);
        first = false;
      }
    }
    if (first) continue;  // K = 1
    for (int v = 0; v < k; ++v) {
      if (v != u && d.at(u, v) <= best + tol) {
        pairs.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  return CategoryGraph(k, std::move(pairs));
}

StatisticValue r_unng_subjects(const ContingencyTable& table, const DistanceMatrix& d) {
  if (table.n() < 2) throw ValidationError("uNNG on subjects needs at least 2 subjects");
  const CategoryGraph pairs = unng_subject_pairs(table, d);
  auto v = t_c0(table, pairs);
  return {StatKind::unng_subjects, v.value, ""};
}

StatisticValue r_amdp(const ContingencyTable& table, const DistanceMatrix& d,
                      std::uint64_t cap) {
  if (d.k() != table.k()) throw ValidationError("distance and table sizes differ");
  const int k = table.k();
  std::vector<int> odd;
  for (int u = 0; u < k; ++u) {
    if (table.margin(u) % 2 == 1) odd.push_back(u);
  }
  if (static_cast<int>(odd.size()) > kMaxMatchingNodes) {
    throw TooManyOddCategories(
        "aMDP: " + std::to_string(odd.size()) + " odd-count categories exceeds the guard of " +
            std::to_string(kMaxMatchingNodes),
        static_cast<int>(odd.size()));
  }

  BigRational value = 0;
  for (int u = 0; u < k; ++u) {
    if (table.margin(u) % 2 == 0) value += r0_rational(table.count_a(u), table.count_b(u));
  }
  if (odd.empty()) return {StatKind::amdp, frac(value), "no odd categories"};

  // leftover of each odd category, paired within after one representative
  for (int j : odd) {
    BigRational t = 0;
    if (table.count_a(j) > 0) {
      t += table.count_a(j) * r0_rational(table.count_a(j) - 1, table.count_b(j));
    }
    if (table.count_b(j) > 0) {
      t += table.count_b(j) * r0_rational(table.count_b(j) - 1, table.count_a(j));
    }
    value += t / table.margin(j);
  }

  // minimum matchings on the odd categories (pseudo node for odd N)
  const bool odd_n = (table.n() % 2 == 1);
  std::vector<int> nodes = odd;
  const int pseudo = k;
  if (odd_n) nodes.push_back(pseudo);
  auto weight = [&](int u, int v) -> double {
    if (u == pseudo || v == pseudo) return 0.0;
    return d.at(u, v);
  };
  const auto matchings = enumerate_min_matchings_weighted(nodes, weight, d.tie_tolerance(), cap);

  std::map<Edge, long long> pair_count;
  for (const auto& m : matchings) {
    for (const auto& [u, v] : m.pairs) {
      if (u == pseudo || v == pseudo) continue;  // discarded pseudo pair
      ++pair_count[{u, v}];
    }
  }
  const long long total = static_cast<long long>(matchings.size());
  for (const auto& [e, cnt] : pair_count) {
    const auto [u, v] = e;
    value += BigRational(cnt, total) *
             BigRational(table.count_a(u) * table.count_b(v) + table.count_a(v) * table.count_b(u),
                         table.margin(u) * table.margin(v));
  }
  return {StatKind::amdp, frac(value),
          "K0=" + std::to_string(odd.size()) + ", |Omega*|=" + std::to_string(total) +
              (odd_n ? ", pseudo category for odd N" : "")};
}

StatisticValue chisq(const ContingencyTable& table, StatKind kind) {
  if (kind != StatKind::pearson && kind != StatKind::deviance) {
    throw ValidationError("chisq: kind must be pearson or deviance");
  }
  if (table.n_a() == 0 || table.n_b() == 0) {
    throw ValidationError("chisq: a group margin is zero");
  }
  const double n = static_cast<double>(table.n());
  const double na = static_cast<double>(table.n_a());
  const double nb = static_cast<double>(table.n_b());
  double value = 0.0;
  for (int k = 0; k < table.k(); ++k) {
    const double m = static_cast<double>(table.margin(k));
    const double ea = na * m / n;
    const double eb = nb * m / n;
    const double oa = static_cast<double>(table.count_a(k));
    const double ob = static_cast<double>(table.count_b(k));
    if (kind == StatKind::pearson) {
      value += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    } else {
      if (oa > 0) value += 2.0 * oa * std::log(oa / ea);
      if (ob > 0) value += 2.0 * ob * std::log(ob / eb);
    }
  }
  return {kind, value, ""};
}

std::string test_statistic_name(TestStatistic s) {
  switch (s) {
    case TestStatistic::amst: return "aMST";
    case TestStatistic::umst: return "uMST";
    case TestStatistic::amdp: return "aMDP";
    case TestStatistic::unng_subjects: return "uNNG";
    case TestStatistic::c_umst: return "C-uMST";
    case TestStatistic::c_unng: return "C-uNNG";
    case TestStatistic::r_c0_custom: return "R-C0";
    case TestStatistic::t_c0_custom: return "T-C0";
    case TestStatistic::pearson: return "pearson";
    case TestStatistic::deviance: return "deviance";
  }
  return "?";
}

std::optional<TestStatistic> parse_test_statistic(const std::string& name) {
  if (name == "aMST") return TestStatistic::amst;
  if (name == "uMST") return TestStatistic::umst;
  if (name == "aMDP") return TestStatistic::amdp;
  if (name == "uNNG") return TestStatistic::unng_subjects;
  if (name == "C-uMST") return TestStatistic::c_umst;
  if (name == "C-uNNG") return TestStatistic::c_unng;
  if (name == "R-C0") return TestStatistic::r_c0_custom;
  if (name == "T-C0") return TestStatistic::t_c0_custom;
  if (name == "pearson") return TestStatistic::pearson;
  if (name == "deviance" || name == "LR") return TestStatistic::deviance;
  return std::nullopt;
}

namespace {

std::vector<Count> margins_of(const ContingencyTable& table) { return table.margins(); }

PreparedStatistic prepare_r_c0_like(TestStatistic s, StatKind kind,
                                    const ContingencyTable& table, CategoryGraph c0,
                                    std::string note) {
  PreparedStatistic p;
  p.statistic = s;
  p.kind = kind;
  p.c0 = std::move(c0);
  p.moment_class = MomentClass::r_class;
  p.note = std::move(note);
  const auto m = margins_of(table);
  const auto edges = p.c0->edges();
  p.eval = [m, edges](const std::vector<Count>& na) {
    double v = node_mixing_sum(na, m);
    for (const auto& [u, vtx] : edges) {
      const auto su = static_cast<std::size_t>(u);
      const auto sv = static_cast<std::size_t>(vtx);
      v += static_cast<double>(na[su] * (m[sv] - na[sv]) + na[sv] * (m[su] - na[su])) /
           static_cast<double>(m[su] * m[sv]);
    }
    return v;
  };
  p.observed = p.eval(table.counts_a());
  return p;
}

PreparedStatistic prepare_t_c0_like(TestStatistic s, StatKind kind,
                                    const ContingencyTable& table, CategoryGraph c0,
                                    std::string note) {
  PreparedStatistic p;
  p.statistic = s;
  p.kind = kind;
  p.c0 = std::move(c0);
  p.moment_class = MomentClass::t_class;
  p.note = std::move(note);
  const auto m = margins_of(table);
  const auto edges = p.c0->edges();
  p.eval = [m, edges](const std::vector<Count>& na) {
    double v = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      v += static_cast<double>(na[k] * (m[k] - na[k]));
    }
    for (const auto& [u, vtx] : edges) {
      const auto su = static_cast<std::size_t>(u);
      const auto sv = static_cast<std::size_t>(vtx);
      v += static_cast<double>(na[su] * (m[sv] - na[sv]) + na[sv] * (m[su] - na[su]));
    }
    return v;
  };
  p.observed = p.eval(table.counts_a());
  return p;
}

}  // namespace

PreparedStatistic prepare_statistic(TestStatistic statistic, const ContingencyTable& table,
                                    const DistanceMatrix* d, const CategoryGraph* custom_c0,
                                    std::uint64_t cap) {
  auto need_d = [&]() -> const DistanceMatrix& {
    if (d == nullptr) {
      throw ValidationError(test_statistic_name(statistic) +
                            " requires a distance matrix or metric");
    }
    if (d->k() != table.k()) throw ValidationError("distance and table sizes differ");
    return *d;
  };
  auto need_c0 = [&]() -> const CategoryGraph& {
    if (custom_c0 == nullptr) {
      throw ValidationError(test_statistic_name(statistic) + " requires a category graph");
    }
    if (custom_c0->k() != table.k()) throw ValidationError("graph and table sizes differ");
    return *custom_c0;
  };

  switch (statistic) {
    case TestStatistic::c_umst:
      return prepare_r_c0_like(statistic, StatKind::c0, table, umst_edges(need_d()), "C0=uMST");
    case TestStatistic::c_unng:
      return prepare_r_c0_like(statistic, StatKind::c0, table, unng_categories(need_d()),
                               "C0=C-uNNG");
    case TestStatistic::r_c0_custom:
      return prepare_r_c0_like(statistic, StatKind::c0, table, need_c0(), "C0=custom");
    case TestStatistic::t_c0_custom:
      return prepare_t_c0_like(statistic, StatKind::t_c0, table, need_c0(), "C0=custom");
    case TestStatistic::umst:
      return prepare_t_c0_like(statistic, StatKind::umst, table, umst_edges(need_d()),
                               "C0=uMST");
    case TestStatistic::unng_subjects:
      return prepare_t_c0_like(statistic, StatKind::unng_subjects, table,
                               unng_subject_pairs(table, need_d()), "subject uNNG pairs");
    case TestStatistic::amst: {
      const auto& dist = need_d();
      const auto weights = amst_edge_weights(table, dist, cap);
      PreparedStatistic p;
      p.statistic = statistic;
      p.kind = StatKind::amst;
      p.note = "M=" + weights.tree_count.str();
      const auto m = margins_of(table);
      const auto edges = weights.edges;
      const auto w = weights.approx;
      p.eval = [m, edges, w](const std::vector<Count>& na) {
        double v = node_mixing_sum(na, m);
        for (std::size_t i = 0; i < edges.size(); ++i) {
          const auto su = static_cast<std::size_t>(edges[i].first);
          const auto sv = static_cast<std::size_t>(edges[i].second);
          v += w[i] * static_cast<double>(na[su] * (m[sv] - na[sv]) + na[sv] * (m[su] - na[su])) /
               static_cast<double>(m[su] * m[sv]);
        }
        return v;
      };
      p.observed = p.eval(table.counts_a());
      if (weights.tree_count == 1) {
        // unique MST: the statistic is exactly R_C0 on it, so the
        // closed-form moments apply
        p.c0 = mst_single(dist);
        p.moment_class = MomentClass::r_class;
      }
      return p;
    }
    case TestStatistic::amdp: {
      const auto& dist = need_d();
      const int k = table.k();
      std::vector<int> odd;
      for (int u = 0; u < k; ++u) {
        if (table.margin(u) % 2 == 1) odd.push_back(u);
      }
      if (static_cast<int>(odd.size()) > kMaxMatchingNodes) {
        throw TooManyOddCategories("aMDP: too many odd-count categories",
                                   static_cast<int>(odd.size()));
      }
      const bool odd_n = (table.n() % 2 == 1);
      std::vector<int> nodes = odd;
      const int pseudo = k;
      if (odd_n) nodes.push_back(pseudo);
      std::vector<std::pair<Edge, double>> pair_weight;
      if (!nodes.empty()) {
        auto weight = [&](int u, int v) -> double {
          if (u == pseudo || v == pseudo) return 0.0;
          return dist.at(u, v);
        };
        const auto matchings =
            enumerate_min_matchings_weighted(nodes, weight, dist.tie_tolerance(), cap);
        std::map<Edge, long long> counts;
        for (const auto& mm : matchings) {
          for (const auto& [u, v] : mm.pairs) {
            if (u == pseudo || v == pseudo) continue;
            ++counts[{u, v}];
          }
        }
        for (const auto& [e, c] : counts) {
          pair_weight.emplace_back(
              e, static_cast<double>(c) / static_cast<double>(matchings.size()));
        }
      }
      const auto m = margins_of(table);
      // R0 lookup per category: r0_full[k][x] = R0(x, m_k - x) for even m_k,
      // r0_rep[k][x] = R0(x, m_k - 1 - x) for odd m_k (representative removed)
      std::vector<std::vector<double>> r0_full(static_cast<std::size_t>(k));
      std::vector<std::vector<double>> r0_rep(static_cast<std::size_t>(k));
      for (int u = 0; u < k; ++u) {
        if (m[static_cast<std::size_t>(u)] % 2 == 0) {
          auto& t = r0_full[static_cast<std::size_t>(u)];
          t.resize(static_cast<std::size_t>(m[static_cast<std::size_t>(u)]) + 1);
          for (Count x = 0; x <= m[static_cast<std::size_t>(u)]; ++x) {
            t[static_cast<std::size_t>(x)] =
                frac(r0_rational(x, m[static_cast<std::size_t>(u)] - x));
          }
        } else {
          auto& t = r0_rep[static_cast<std::size_t>(u)];
          t.resize(static_cast<std::size_t>(m[static_cast<std::size_t>(u)]));
          for (Count x = 0; x < m[static_cast<std::size_t>(u)]; ++x) {
            t[static_cast<std::size_t>(x)] =
                frac(r0_rational(x, m[static_cast<std::size_t>(u)] - 1 - x));
          }
        }
      }
      PreparedStatistic p;
      p.statistic = statistic;
      p.kind = StatKind::amdp;
      p.note = "K0=" + std::to_string(odd.size());
      p.eval = [m, odd, pair_weight, r0_full, r0_rep](const std::vector<Count>& na) {
        double v = 0.0;
        for (std::size_t u = 0; u < m.size(); ++u) {
          if (m[u] % 2 == 0) {
            v += r0_full[u][static_cast<std::size_t>(na[u])];
          } else {
            const Count a = na[u];
            const Count b = m[u] - a;
            double t = 0.0;
            if (a > 0) t += static_cast<double>(a) * r0_rep[u][static_cast<std::size_t>(a - 1)];
            if (b > 0) t += static_cast<double>(b) * r0_rep[u][static_cast<std::size_t>(b - 1)];
            v += t / static_cast<double>(m[u]);
          }
        }
        for (const auto& [e, w] : pair_weight) {
          const auto su = static_cast<std::size_t>(e.first);
          const auto sv = static_cast<std::size_t>(e.second);
          v += w * static_cast<double>(na[su] * (m[sv] - na[sv]) + na[sv] * (m[su] - na[su])) /
               static_cast<double>(m[su] * m[sv]);
        }
        return v;
      };
      p.observed = p.eval(table.counts_a());
      return p;
    }
    case TestStatistic::pearson:
    case TestStatistic::deviance: {
      const bool pearson = (statistic == TestStatistic::pearson);
      if (table.n_a() == 0 || table.n_b() == 0) {
        throw ValidationError("chisq: a group margin is zero");
      }
      const auto m = margins_of(table);
      const double n = static_cast<double>(table.n());
      const double na_tot = static_cast<double>(table.n_a());
      const double nb_tot = static_cast<double>(table.n_b());
      PreparedStatistic p;
      p.statistic = statistic;
      p.kind = pearson ? StatKind::pearson : StatKind::deviance;
      p.lower_tail = false;  // chi-square kinds reject for large values
      p.eval = [m, n, na_tot, nb_tot, pearson](const std::vector<Count>& na) {
        double v = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) {
          const double mk = static_cast<double>(m[k]);
          const double ea = na_tot * mk / n;
          const double eb = nb_tot * mk / n;
          const double oa = static_cast<double>(na[k]);
          const double ob = static_cast<double>(m[k] - na[k]);
          if (pearson) {
            v += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
          } else {
            if (oa > 0) v += 2.0 * oa * std::log(oa / ea);
            if (ob > 0) v += 2.0 * ob * std::log(ob / eb);
          }
        }
        return v;
      };
      p.observed = p.eval(table.counts_a());
      return p;
    }
  }
  throw ValidationError("unknown statistic");
}

}  // namespace catgraph
