#include "catgraph/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catgraph/errors.hpp"
#include "catgraph/mst.hpp"
#include "catgraph/rng.hpp"
#include "parallel.hpp"

namespace catgraph {

namespace {

double sample_from(const SampleDist& dist, Rng& rng) {
  if (dist.kind == SampleDist::Kind::normal) return rng.normal(dist.a, dist.b);
  return rng.uniform(dist.a, dist.b);
}

std::vector<Ranking> all_rankings(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<Ranking> out;
  do {
    out.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

ScenarioData binned_scenario(const SampleDist& dist_a, const SampleDist& dist_b,
                             int n_per_group, int bins, std::uint64_t seed) {
  if (n_per_group < 1) throw ValidationError("binned scenario needs n_per_group >= 1");
  if (bins < 2) throw ValidationError("binned scenario needs at least 2 bins");
  Rng rng(seed);
  std::vector<double> sample_a(static_cast<std::size_t>(n_per_group));
  std::vector<double> sample_b(static_cast<std::size_t>(n_per_group));
  for (auto& x : sample_a) x = sample_from(dist_a, rng);
  for (auto& x : sample_b) x = sample_from(dist_b, rng);

  double lo = sample_a[0], hi = sample_a[0];
  for (double x : sample_a) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (double x : sample_b) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi <= lo) throw ValidationError("degenerate sample: all values equal");

  const double width = (hi - lo) / static_cast<double>(bins);
  auto bin_of = [&](double x) {
    const int b = static_cast<int>((x - lo) / width);
    return std::clamp(b, 0, bins - 1);  // hi maps into the last bin
  };
  std::vector<Count> ca(static_cast<std::size_t>(bins), 0);
  std::vector<Count> cb(static_cast<std::size_t>(bins), 0);
  for (double x : sample_a) ++ca[static_cast<std::size_t>(bin_of(x))];
  for (double x : sample_b) ++cb[static_cast<std::size_t>(bin_of(x))];

  std::vector<ContingencyTable::Record> rows;
  std::vector<long long> ranks;  // ranks of the retained bins, 1-based
  long long next_rank = 1;
  for (int b = 0; b < bins; ++b) {
    const Count m = ca[static_cast<std::size_t>(b)] + cb[static_cast<std::size_t>(b)];
    if (m == 0) continue;  // empty bins are dropped, ranks recomputed
    rows.emplace_back("bin" + std::to_string(b), ca[static_cast<std::size_t>(b)],
                      cb[static_cast<std::size_t>(b)]);
    ranks.push_back(next_rank++);
  }
  ScenarioData out{ContingencyTable::from_records(rows), pairwise_rank_diff(ranks)};
  return out;
}

MallowsDistribution mallows_distribution(const Ranking& zeta0, double theta,
                                         RankMetric metric) {
  if (zeta0.size() > 8) {
    throw ValidationError("mallows: exact normalization limited to 8 objects");
  }
  MallowsDistribution dist;
  dist.rankings = all_rankings(zeta0.size());
  dist.probabilities.resize(dist.rankings.size());
  double z = 0.0;
  for (std::size_t i = 0; i < dist.rankings.size(); ++i) {
    const double w = std::exp(
        -theta * static_cast<double>(ranking_distance(metric, dist.rankings[i], zeta0)));
    dist.probabilities[i] = w;
    z += w;
  }
  for (auto& p : dist.probabilities) p /= z;
  return dist;
}

std::vector<Ranking> mallows_sample(int n, const Ranking& zeta0, double theta,
                                    RankMetric metric, std::uint64_t seed) {
  const auto dist = mallows_distribution(zeta0, theta, metric);
  std::vector<double> cdf(dist.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += dist.probabilities[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  Rng rng(seed);
  std::vector<Ranking> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    out.push_back(dist.rankings[std::min(idx, dist.rankings.size() - 1)]);
  }
  return out;
}

ScenarioData mallows_scenario(int n_a, int n_b, const Ranking& zeta0, double theta,
                              RankMetric generating_metric, RankMetric graph_metric,
                              std::uint64_t seed) {
  const auto group_a = mallows_sample(n_a, zeta0, 0.0, generating_metric, derive_seed(seed, 0));
  const auto group_b = mallows_sample(n_b, zeta0, theta, generating_metric, derive_seed(seed, 1));

  std::vector<std::string> ids;
  std::vector<Count> ca, cb;
  auto index_of = [&](const Ranking& r) {
    const std::string key = r.to_string();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == key) return i;
    }
    ids.push_back(key);
    ca.push_back(0);
    cb.push_back(0);
    return ids.size() - 1;
  };
  for (const auto& r : group_a) ++ca[index_of(r)];
  for (const auto& r : group_b) ++cb[index_of(r)];

  std::vector<ContingencyTable::Record> rows;
  std::vector<Ranking> observed;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.emplace_back(ids[i], ca[i], cb[i]);
    observed.push_back(Ranking::parse(ids[i]));
  }
  return {ContingencyTable::from_records(rows),
          pairwise_distance(graph_metric, observed)};
}

ScenarioData haplotype_scenario(int n_subjects, int length,
                                const std::vector<int>& informative,
                                const std::string& target, std::uint64_t seed,
                                double base_rate) {
  if (length < 1 || length > 16) throw ValidationError("haplotype length must be 1..16");
  for (int pos : informative) {
    if (pos < 0 || pos >= length) throw ValidationError("informative position out of range");
  }
  if (!informative.empty() && static_cast<int>(target.size()) != length) {
    throw ValidationError("target haplotype length mismatch");
  }
  const double max_rate = base_rate + 0.1 * static_cast<double>(informative.size());
  if (base_rate < 0.0 || max_rate > 1.0) {
    throw ValidationError("disease probability outside [0, 1]");
  }

  Rng rng(seed);
  std::vector<std::string> ids;
  std::vector<Count> ca, cb;
  std::vector<std::size_t> index(static_cast<std::size_t>(1) << length, SIZE_MAX);
  for (int i = 0; i < n_subjects; ++i) {
    const std::uint64_t bits = rng.uniform_below(static_cast<std::uint64_t>(1) << length);
    int agree = 0;
    for (int pos : informative) {
      const char bit = ((bits >> pos) & 1) ? '1' : '0';
      if (bit == target[static_cast<std::size_t>(pos)]) ++agree;
    }
    const double p = base_rate + 0.1 * static_cast<double>(agree);
    const bool patient = rng.bernoulli(p);
    std::size_t& slot = index[bits];
    if (slot == SIZE_MAX) {
      slot = ids.size();
      std::string id(static_cast<std::size_t>(length), '0');
      for (int pos = 0; pos < length; ++pos) {
        if ((bits >> pos) & 1) id[static_cast<std::size_t>(pos)] = '1';
      }
      ids.push_back(std::move(id));
      ca.push_back(0);
      cb.push_back(0);
    }
    if (patient) {
      ++ca[slot];
    } else {
      ++cb[slot];
    }
  }

  std::vector<ContingencyTable::Record> rows;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.emplace_back(ids[i], ca[i], cb[i]);
    kept.push_back(ids[i]);
  }
  return {ContingencyTable::from_records(rows), pairwise_hamming(kept)};
}

PowerTable power_study(const Scenario& scenario, const std::vector<TestStatistic>& statistics,
                       const std::vector<double>& alphas, int runs, long long b_draws,
                       std::uint64_t seed, int threads) {
  if (runs < 1) throw ValidationError("power study needs runs >= 1");
  // p-values indexed [run][statistic]; replicates run in parallel
  std::vector<std::vector<double>> pvals(
      static_cast<std::size_t>(runs),
      std::vector<double>(statistics.size(), 1.0));

  detail::parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t run) {
    const std::uint64_t run_seed = derive_seed(seed, run);
    const ScenarioData data = scenario.generate(run_seed);
    for (std::size_t s = 0; s < statistics.size(); ++s) {
      const auto prepared =
          prepare_statistic(statistics[s], data.table, &data.distance, nullptr);
      auto tail_fn = [&prepared](const std::vector<Count>& na) {
        const double v = prepared.eval(na);
        return prepared.lower_tail ? v : -v;
      };
      const auto mc =
          mc_perm_pvalue(tail_fn, data.table, b_draws, derive_seed(run_seed, 1000 + s), 1);
      pvals[run][s] = mc.p;
    }
  });

  PowerTable out;
  for (std::size_t s = 0; s < statistics.size(); ++s) {
    for (double alpha : alphas) {
      int hits = 0;
      for (int run = 0; run < runs; ++run) {
        if (pvals[static_cast<std::size_t>(run)][s] <= alpha) ++hits;
      }
      PowerRow row;
      row.statistic = test_statistic_name(statistics[s]);
      row.alpha = alpha;
      row.runs = runs;
      row.power = static_cast<double>(hits) / static_cast<double>(runs);
      row.stderr_ = std::sqrt(row.power * (1.0 - row.power) / static_cast<double>(runs));
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

AccuracyTable pvalue_accuracy(const std::vector<int>& lengths,
                              const std::vector<long long>& sizes, int runs,
                              long long b_draws, std::uint64_t seed, int threads) {
  if (runs < 1) throw ValidationError("pvalue accuracy needs runs >= 1");
  const std::vector<TestStatistic> stats = {TestStatistic::c_umst, TestStatistic::c_unng,
                                            TestStatistic::umst};
  AccuracyTable out;
  for (int length : lengths) {
    for (long long n : sizes) {
      std::vector<std::vector<AccuracyRow>> per_run(static_cast<std::size_t>(runs));
      detail::parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t run) {
        const std::uint64_t run_seed =
            derive_seed(seed, (static_cast<std::uint64_t>(length) << 32) ^
                                  (static_cast<std::uint64_t>(n) << 16) ^ run);
        // null labels: groups assigned with equal probability
        const ScenarioData data = haplotype_scenario(static_cast<int>(n), length, {}, "",
                                                     run_seed, /*base_rate=*/0.5);
        for (std::size_t s = 0; s < stats.size(); ++s) {
          const auto prepared =
              prepare_statistic(stats[s], data.table, &data.distance, nullptr);
          AccuracyRow row;
          row.length = length;
          row.n = n;
          row.statistic = test_statistic_name(stats[s]);
          row.run = static_cast<int>(run);
          const auto moments = (prepared.moment_class == MomentClass::r_class)
                                   ? perm_moments_r(data.table, *prepared.c0)
                                   : perm_moments_t(data.table, *prepared.c0);
          row.p_normal = normal_pvalue(prepared.observed, moments).p;
          const auto mc = mc_perm_pvalue(prepared.eval, data.table, b_draws,
                                         derive_seed(run_seed, 7000 + s), 1);
          row.p_perm = mc.p;
          row.diff = row.p_normal - row.p_perm;
          per_run[run].push_back(std::move(row));
        }
      });
      for (auto& rows : per_run) {
        for (auto& row : rows) out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

std::vector<AccuracySummary> summarize_accuracy(const AccuracyTable& table) {
  auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double fr = pos - static_cast<double>(i);
    if (i + 1 < v.size()) return v[i] * (1.0 - fr) + v[i + 1] * fr;
    return v.back();
  };
  std::vector<AccuracySummary> out;
  for (const auto& row : table.rows) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const AccuracySummary& s) {
      return s.length == row.length && s.n == row.n && s.statistic == row.statistic;
    });
    if (seen) continue;
    std::vector<double> diffs, absdiffs;
    for (const auto& r : table.rows) {
      if (r.length == row.length && r.n == row.n && r.statistic == row.statistic) {
        diffs.push_back(r.diff);
        absdiffs.push_back(std::abs(r.diff));
      }
    }
    AccuracySummary s;
    s.length = row.length;
    s.n = row.n;
    s.statistic = row.statistic;
    s.q1 = quantile(diffs, 0.25);
    s.median = quantile(diffs, 0.5);
    s.q3 = quantile(diffs, 0.75);
    s.median_abs = quantile(absdiffs, 0.5);
    out.push_back(std::move(s));
  }
  return out;
}

Scenario make_named_scenario(const std::string& name, std::uint64_t) {
  Scenario s;
  s.name = name;
  if (name == "normal-shift") {
    s.generate = [](std::uint64_t seed) {
      return binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(1, 1), 30, 12, seed);
    };
  } else if (name == "normal-scale") {
    s.generate = [](std::uint64_t seed) {
      return binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(0, 2), 30, 12, seed);
    };
  } else if (name == "normal-shift-scale") {
    s.generate = [](std::uint64_t seed) {
      return binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(1, 2), 30, 12, seed);
    };
  } else if (name == "uniform-shift") {
    s.generate = [](std::uint64_t seed) {
      return binned_scenario(SampleDist::uniform(0, 5), SampleDist::uniform(1, 6), 30, 12, seed);
    };
  } else if (name == "normal-null") {
    s.generate = [](std::uint64_t seed) {
      return binned_scenario(SampleDist::normal(0, 1), SampleDist::normal(0, 1), 30, 12, seed);
    };
  } else if (name == "mallows") {
    s.generate = [](std::uint64_t seed) {
      const Ranking zeta0({1, 2, 3, 4});
      return mallows_scenario(20, 20, zeta0, 5.0, RankMetric::spearman_sq,
                              RankMetric::spearman_sq, seed);
    };
  } else if (name == "haplotype") {
    s.generate = [](std::uint64_t seed) {
      return haplotype_scenario(1000, 11, {0, 1, 2, 3}, "11111111111", seed);
    };
  } else if (name == "haplotype-null") {
    s.generate = [](std::uint64_t seed) {
      return haplotype_scenario(500, 8, {}, "", seed, 0.5);
    };
  } else {
    throw ValidationError("unknown scenario: " + name);
  }
  return s;
}

}  // namespace catgraph
