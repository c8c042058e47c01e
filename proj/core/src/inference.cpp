#include "catgraph/inference.hpp"

#include <algorithm>
#include <cmath>

#include "catgraph/bigint.hpp"
#include "catgraph/errors.hpp"
#include "catgraph/rng.hpp"
#include "parallel.hpp"

namespace catgraph {

namespace {

void fill_pair_probabilities(const ContingencyTable& table, NullMoments& m) {
  const double n = static_cast<double>(table.n());
  const double na = static_cast<double>(table.n_a());
  const double nb = static_cast<double>(table.n_b());
  m.p1 = na * nb / (n * (n - 1.0));
  m.p2 = 4.0 * na * (na - 1.0) * nb * (nb - 1.0) / (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
  m.p3 = na * nb / (n * n);
  m.p4 = 4.0 * m.p3 * m.p3;
}

void require_n4(const ContingencyTable& table) {
  if (table.n() < 4) {
    throw ValidationError("permutation moments need N >= 4 (p2 undefined otherwise)");
  }
}

/// Shared shape of the R_C0 variance under the two nulls: only the pair
/// probabilities differ between permutation and bootstrap, and the
/// permutation null adds the centering correction (pb - 4 pa^2) on the
/// squared mean term.
double r_class_variance(const ContingencyTable& table, const GraphSummary& s, double pa,
                        double pb, bool permutation) {
  const double n = static_cast<double>(table.n());
  const double k = static_cast<double>(table.k());
  const double e = static_cast<double>(s.edge_count);
  double var = 4.0 * (pa - pb) *
               (n - k + 2.0 * e + s.sum_deg_sq_over_m / 4.0 - s.sum_deg_over_m);
  var += (6.0 * pb - 4.0 * pa) * (k - s.sum_inv_m);
  var += pb * s.sum_inv_mumv;
  if (permutation) {
    const double c = n - k + e;
    var += c * c * (pb - 4.0 * pa * pa);
  }
  return var;
}

}  // namespace

NullMoments perm_moments_r(const ContingencyTable& table, const CategoryGraph& c0) {
  require_n4(table);
  const GraphSummary s = graph_summary(c0, table);
  NullMoments m;
  fill_pair_probabilities(table, m);
  m.mean = (static_cast<double>(table.n()) - static_cast<double>(table.k()) +
            static_cast<double>(s.edge_count)) *
           2.0 * m.p1;
  m.variance = r_class_variance(table, s, m.p1, m.p2, /*permutation=*/true);
  return m;
}

NullMoments perm_moments_t(const ContingencyTable& table, const CategoryGraph& c0) {
  require_n4(table);
  const GraphSummary s = graph_summary(c0, table);
  NullMoments m;
  fill_pair_probabilities(table, m);
  double edge_mass = 0.0;  // 2 sum_(u,v) m_u m_v
  for (const auto& [u, v] : c0.edges()) {
    edge_mass += 2.0 * static_cast<double>(table.margin(u)) *
                 static_cast<double>(table.margin(v));
  }
  double node_mass = 0.0;  // sum m_u (m_u - 1)
  double hub = 0.0;        // sum over subjects of deg(deg - 1) in the subject graph
  for (int u = 0; u < table.k(); ++u) {
    const double mu = static_cast<double>(table.margin(u));
    node_mass += mu * (mu - 1.0);
    const double reach = mu + static_cast<double>(s.nbr_mass[static_cast<std::size_t>(u)]);
    hub += mu * (reach - 1.0) * (reach - 2.0);
  }
  const double two_gbar = node_mass + edge_mass;  // 2 |Gbar|
  m.mean = two_gbar * m.p1;
  // Last (centering) term uses |Gbar|^2; the factor printed in front of the
  // squared sum in the source derivation is off by 4 and fails exhaustive
  // enumeration.
  const double gbar = two_gbar / 2.0;
  m.variance = (m.p1 - m.p2) * hub + (m.p1 - m.p2 / 2.0) * two_gbar +
               (m.p2 - 4.0 * m.p1 * m.p1) * gbar * gbar;
  return m;
}

NullMoments bootstrap_moments_r(const ContingencyTable& table, const CategoryGraph& c0) {
  const GraphSummary s = graph_summary(c0, table);
  NullMoments m;
  fill_pair_probabilities(table, m);
  m.mean = (static_cast<double>(table.n()) - static_cast<double>(table.k()) +
            static_cast<double>(s.edge_count)) *
           2.0 * m.p3;
  m.variance = r_class_variance(table, s, m.p3, m.p4, /*permutation=*/false);
  return m;
}

NormalPValue normal_pvalue(double value, const NullMoments& moments) {
  if (!(moments.variance > 0.0)) throw ValidationError("normal_pvalue: zero variance");
  NormalPValue r;
  r.z = (value - moments.mean) / std::sqrt(moments.variance);
  r.p = 0.5 * std::erfc(-r.z / std::sqrt(2.0));
  return r;
}

McPermResult mc_perm_pvalue(const CountStatistic& fn, const ContingencyTable& table,
                            long long b_draws, std::uint64_t seed, int threads) {
  if (b_draws < 1) throw ValidationError("permutation count must be >= 1");
  McPermResult result;
  result.draws = b_draws;
  if (table.n_a() == 0 || table.n_b() == 0) {
    result.degenerate = true;
    result.p = 1.0;
    return result;
  }
  const double observed = fn(table.counts_a());
  const SubjectList canonical = table.to_subjects();
  const int k = table.k();

  std::vector<double> draws(static_cast<std::size_t>(b_draws));
  detail::parallel_for(static_cast<std::size_t>(b_draws), threads, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    std::vector<Group> labels = canonical.labels;
    rng.shuffle(labels);
    std::vector<Count> na(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == Group::a) {
        ++na[static_cast<std::size_t>(canonical.categories[i])];
      }
    }
    draws[b] = fn(na);
  });

  long long le = 0;
  double sum = 0.0, sumsq = 0.0;
  for (double s : draws) {
    if (s <= observed) ++le;
    sum += s;
    sumsq += s * s;
  }
  result.le_count = le;
  result.p = static_cast<double>(1 + le) / static_cast<double>(b_draws + 1);
  result.draw_mean = sum / static_cast<double>(b_draws);
  const double var =
      sumsq / static_cast<double>(b_draws) - result.draw_mean * result.draw_mean;
  result.draw_sd = var > 0 ? std::sqrt(var) : 0.0;
  return result;
}

double ExactPermDistribution::lower_tail_p(double observed) const {
  double mass = 0.0;
  for (std::size_t i = 0; i < values.size() && values[i] <= observed; ++i) {
    mass += static_cast<double>(multiplicities[i]);
  }
  return mass / total;
}

ExactPermDistribution exact_perm_distribution(const CountStatistic& fn,
                                              const ContingencyTable& table) {
  const long long n = table.n();
  const long long na_total = table.n_a();
  BigInt assignments = 1;
  {
    BigInt num = 1, den = 1;
    for (long long i = 0; i < na_total; ++i) {
      num *= (n - i);
      den *= (i + 1);
    }
    assignments = num / den;
  }
  if (assignments > 1'000'000) {
    throw TooLarge("exact permutation distribution: C(N, n_a) = " + assignments.str() +
                   " exceeds 1e6");
  }

  const auto m = table.margins();
  const int k = table.k();
  std::vector<Count> suffix(static_cast<std::size_t>(k) + 1, 0);
  for (int i = k - 1; i >= 0; --i) {
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i) + 1] + m[static_cast<std::size_t>(i)];
  }

  std::vector<std::pair<double, unsigned long long>> samples;
  std::vector<Count> counts(static_cast<std::size_t>(k), 0);

  // multiplicity of a count vector: prod_k C(m_k, c_k)
  auto choose_ll = [](Count nn, Count kk) -> unsigned long long {
    unsigned long long r = 1;
    if (kk > nn - kk) kk = nn - kk;
    for (Count i = 0; i < kk; ++i) {
      r = r * static_cast<unsigned long long>(nn - i) / static_cast<unsigned long long>(i + 1);
    }
    return r;
  };

  std::function<void(int, Count, unsigned long long)> rec =
      [&](int cat, Count left, unsigned long long mult) {
        if (cat == k) {
          samples.emplace_back(fn(counts), mult);
          return;
        }
        const Count lo = std::max<Count>(0, left - suffix[static_cast<std::size_t>(cat) + 1]);
        const Count hi = std::min(m[static_cast<std::size_t>(cat)], left);
        for (Count c = lo; c <= hi; ++c) {
          counts[static_cast<std::size_t>(cat)] = c;
          rec(cat + 1, left - c, mult * choose_ll(m[static_cast<std::size_t>(cat)], c));
        }
        counts[static_cast<std::size_t>(cat)] = 0;
      };
  rec(0, na_total, 1);

  std::sort(samples.begin(), samples.end());
  ExactPermDistribution dist;
  long double total = 0.0L, s1 = 0.0L, s2 = 0.0L;
  for (const auto& [v, mult] : samples) {
    if (!dist.values.empty() && dist.values.back() == v) {
      dist.multiplicities.back() += mult;
    } else {
      dist.values.push_back(v);
      dist.multiplicities.push_back(mult);
    }
    const long double w = static_cast<long double>(mult);
    total += w;
    s1 += w * v;
    s2 += w * static_cast<long double>(v) * v;
  }
  dist.total = static_cast<double>(total);
  dist.mean = static_cast<double>(s1 / total);
  dist.variance = static_cast<double>(s2 / total - (s1 / total) * (s1 / total));
  return dist;
}

ConditionReport condition_diagnostics(const ContingencyTable& table, const CategoryGraph& c0,
                                      double threshold) {
  if (c0.k() != table.k()) throw ValidationError("graph and table sizes differ");
  const GraphSummary s = graph_summary(c0, table);
  const double k = static_cast<double>(table.k());
  const double n = static_cast<double>(table.n());
  const double k32 = std::pow(k, 1.5);

  ConditionReport r;
  r.threshold = threshold;

  double node_sum = 0.0;
  double t_hub = 0.0;
  for (int u = 0; u < table.k(); ++u) {
    const auto su = static_cast<std::size_t>(u);
    const double mu = static_cast<double>(table.margin(u));
    const double deg = static_cast<double>(s.degree[su]);
    const double mass = static_cast<double>(s.nbr_mass[su]);
    const double two_hop = static_cast<double>(s.two_hop[su]);
    node_sum += mu * (mu + deg) * (mu + mass + two_hop);
    t_hub += mu * (mu + mass) * (mu + mass);
  }
  double edge_sum = 0.0;
  for (const auto& [u, v] : c0.edges()) {
    const auto su = static_cast<std::size_t>(u);
    const auto sv = static_cast<std::size_t>(v);
    const double mu = static_cast<double>(table.margin(u));
    const double mv = static_cast<double>(table.margin(v));
    const double du = static_cast<double>(s.degree[su]);
    const double dv = static_cast<double>(s.degree[sv]);
    // neighbor mass over V_u cup V_v, shared neighbors counted once
    double union_mass = 0.0;
    {
      std::vector<char> seen(static_cast<std::size_t>(table.k()), 0);
      for (const auto& [x, y] : c0.edges()) {
        if (x == u || x == v) {
          if (!seen[static_cast<std::size_t>(y)]) {
            seen[static_cast<std::size_t>(y)] = 1;
            union_mass += static_cast<double>(table.margin(y));
          }
        }
        if (y == u || y == v) {
          if (!seen[static_cast<std::size_t>(x)]) {
            seen[static_cast<std::size_t>(x)] = 1;
            union_mass += static_cast<double>(table.margin(x));
          }
        }
      }
    }
    edge_sum += (mu + mv + du + dv) *
                (mu + mv + union_mass + static_cast<double>(s.two_hop[su]) +
                 static_cast<double>(s.two_hop[sv]));
  }

  r.hub_node = node_sum / k32;
  r.hub_edge = edge_sum / k32;
  const double beta = static_cast<double>(s.beta);
  const double lambda = static_cast<double>(s.lambda);
  r.hub_beta = std::pow(beta, 6) * lambda * lambda / k;
  r.hub_lambda = std::pow(lambda, 8) / k;
  r.n_over_k = n / k;
  r.edges_over_k = static_cast<double>(s.edge_count) / k;
  r.inv_m_over_k = s.sum_inv_mumv / k;
  r.t_hub_sum = t_hub / n;

  // Only the o(.) hub quantities gate the flag; the O(K)/O(N) premises
  // (N/K, |C0|/K, the T-class hub sum) tolerate any constant and are
  // reported without gating.
  auto flag = [&](double ratio, const std::string& name) {
    if (ratio > threshold) {
      r.flags.push_back(name);
      r.questionable = true;
    }
  };
  flag(r.hub_node, "hub-node-sum");
  flag(r.hub_edge, "hub-edge-sum");
  flag(r.hub_beta, "hub-beta^6*lambda^2");
  flag(r.hub_lambda, "hub-lambda^8");
  if (r.questionable) r.flags.push_back("normal approximation questionable");
  return r;
}

TestResult run_test(const ContingencyTable& table, const PreparedStatistic& stat,
                    PValueMethod method, long long b_draws, std::uint64_t seed, int threads) {
  TestResult result;
  result.statistic = {stat.kind, stat.observed, stat.note};
  result.seed = seed;

  if (stat.c0.has_value()) {
    switch (stat.moment_class) {
      case MomentClass::r_class:
        if (table.n() >= 4) result.moments = perm_moments_r(table, *stat.c0);
        break;
      case MomentClass::t_class:
        if (table.n() >= 4) result.moments = perm_moments_t(table, *stat.c0);
        break;
      case MomentClass::none:
        break;
    }
    result.diagnostics = condition_diagnostics(table, *stat.c0);
  }

  const bool want_normal = (method == PValueMethod::normal || method == PValueMethod::both);
  const bool want_perm =
      (method == PValueMethod::permutation || method == PValueMethod::both);

  if (want_normal) {
    if (!result.moments.has_value()) {
      result.warnings.push_back("no analytic permutation moments for " +
                                test_statistic_name(stat.statistic) +
                                "; normal p-value unavailable");
    } else if (result.moments->variance > 0) {
      const auto np = normal_pvalue(stat.observed, *result.moments);
      result.z = np.z;
      result.p_normal = np.p;
    } else {
      result.warnings.push_back("permutation variance is zero; normal p-value unavailable");
    }
  }

  // one-sided in the rejection direction: graph statistics reject small
  // values, chi-square kinds reject large values
  auto tail_fn = [&](const std::vector<Count>& na) {
    const double v = stat.eval(na);
    return stat.lower_tail ? v : -v;
  };

  if (want_perm) {
    const auto mc = mc_perm_pvalue(tail_fn, table, b_draws, seed, threads);
    result.p_perm = mc.p;
    result.b = b_draws;
    if (mc.degenerate) {
      result.warnings.push_back("degenerate table (one group empty); permutation p = 1");
    }
  }

  if (method == PValueMethod::exact) {
    const auto dist = exact_perm_distribution(tail_fn, table);
    result.p_perm = dist.lower_tail_p(stat.lower_tail ? stat.observed : -stat.observed);
    result.b = 0;
  }
  return result;
}

}  // namespace catgraph
