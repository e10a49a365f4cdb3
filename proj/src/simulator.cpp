#include "multisec/simulator.hpp"

#include <cmath>
#include <string>

#include "multisec/error.hpp"

namespace multisec {

namespace {

void check_pair(long n, long k) {
  if (n < 1 || k < 0) throw Error(Errc::BadArgument, "need n >= 1 and k >= 0");
  if (k > n) throw Error(Errc::InfeasiblePair, "k > n");
}

template <typename OnStep>
void simulate(const AbilityDistribution& d, const Policy& policy, long n, long k, Stream& stream,
              OnStep&& on_step) {
  check_pair(n, k);
  long budget = k;
  PolicyContext ctx;
  ctx.n = n;
  for (long t = 1; t <= n; ++t) {
    const int j = d.sample(stream.uniform());
    ctx.t_next = t;
    ctx.residual_budget = budget;
    ctx.ability_index = j;
    ctx.u = stream.uniform();
    const bool select = budget > 0 && policy.decide(ctx).select;
    if (select) --budget;
    on_step(t, j, select, budget);
  }
}

}  // namespace

std::vector<long> EpisodeRecord::ability_counts(int m) const {
  std::vector<long> counts(m, 0);
  for (int j : abilities) ++counts[j - 1];
  return counts;
}

EpisodeRecord run_episode(const AbilityDistribution& d, const Policy& policy, long n, long k, Stream& stream) {
  EpisodeRecord rec;
  rec.n = n;
  rec.k = k;
  rec.policy = policy.name();
  rec.abilities.reserve(n);
  rec.decisions.reserve(n);
  rec.budget_path.reserve(n + 1);
  rec.ratio_path.reserve(n);
  rec.budget_path.push_back(k);
  rec.ratio_path.push_back(static_cast<double>(k) / static_cast<double>(n));
  simulate(d, policy, n, k, stream, [&](long t, int j, bool select, long budget) {
    rec.abilities.push_back(j);
    rec.decisions.push_back(select ? 1 : 0);
    if (select) rec.payoff += d.ability(j);
    rec.budget_path.push_back(budget);
    if (t < n) rec.ratio_path.push_back(static_cast<double>(budget) / static_cast<double>(n - t));
  });
  return rec;
}

EpisodeSummary simulate_summary(const AbilityDistribution& d, const Policy& policy, long n, long k,
                                Stream& stream) {
  EpisodeSummary out;
  out.counts.assign(d.size(), 0);
  std::vector<long> taken(d.size(), 0);
  simulate(d, policy, n, k, stream, [&](long, int j, bool select, long) {
    ++out.counts[j - 1];
    if (select) {
      ++taken[j - 1];
      ++out.selected;
    }
  });
  // Summed per level, in the same order as the offline payoff.
  for (int j = 1; j <= d.size(); ++j) out.payoff += d.ability(j) * static_cast<double>(taken[j - 1]);
  return out;
}

long orbit_cutoff(long n, double delta) {
  const long cutoff = n - static_cast<long>(std::ceil(2.0 / delta)) - 1;
  return cutoff < 0 ? 0 : cutoff;
}

OrbitDiagnostics orbit_diagnostics(const AbilityDistribution& d, const EpisodeRecord& record, double delta) {
  if (!(delta > 0.0 && delta < d.half_min_mass())) {
    throw Error(Errc::BadDelta, "delta must satisfy 0 < delta < half the minimal mass (" +
                                    std::to_string(d.half_min_mass()) + ")");
  }
  const long n = record.n;
  if (static_cast<long>(record.ratio_path.size()) != n || static_cast<long>(record.budget_path.size()) != n + 1) {
    throw Error(Errc::DimensionMismatch, "episode record is incomplete");
  }
  const ThresholdSet thresholds(d);
  const int m = d.size();
  const long cutoff = orbit_cutoff(n, delta);

  OrbitDiagnostics out;
  out.delta = delta;
  out.j_tau0 = m + 1;
  out.tau0 = cutoff;
  for (long t = 0; t < cutoff; ++t) {
    const double r = record.ratio_path[t];
    int hit = 0;
    for (int j = 1; j <= m && hit == 0; ++j) {
      if (std::abs(r - thresholds[j]) <= delta / 2) hit = j;
    }
    if (hit != 0) {
      out.tau0 = t;
      out.j_tau0 = hit;
      break;
    }
  }
  if (out.j_tau0 == m + 1) {
    out.tau = out.tau0;
    return out;
  }

  const double anchor = thresholds[out.j_tau0];
  out.tau = cutoff;
  for (long t = out.tau0 + 1; t < cutoff; ++t) {
    if (std::abs(record.ratio_path[t] - anchor) > delta) {
      out.tau = t;
      break;
    }
  }
  out.y_path.reserve(n - out.tau0 + 1);
  for (long u = 0; u <= n - out.tau0; ++u) {
    out.y_path.push_back(static_cast<double>(record.budget_path[out.tau0 + u]) -
                         anchor * static_cast<double>(n - out.tau0 - u));
  }
  return out;
}

double drift_at_state(const AbilityDistribution& d, const ThresholdSet& thresholds, long n, long t, long budget,
                      int j_anchor) {
  if (t < 0 || t >= n || budget < 0) throw Error(Errc::BadArgument, "need 0 <= t < n and K >= 0");
  if (j_anchor < 1 || j_anchor > d.size()) throw Error(Errc::IndexOutOfRange, "anchor index");
  const double anchor = thresholds[j_anchor];
  if (budget == 0) return anchor;
  const int b = thresholds.bucket(static_cast<double>(budget) / static_cast<double>(n - t));
  return anchor - d.survival(b + 1);
}

double ai_ratio_increment(const AbilityDistribution& d, long n, long t, long budget) {
  if (t < 0 || t + 1 >= n || budget < 0) throw Error(Errc::BadArgument, "need 0 <= t < n - 1 and K >= 0");
  const AdaptiveIndexPolicy ai(d);
  std::vector<double> p(d.size());
  double q = 0.0;
  if (budget > 0) {
    ai.selection_probabilities(t + 1, n, budget, p);
    for (int j = 1; j <= d.size(); ++j) q += d.mass(j) * p[j - 1];
  }
  const double remaining = static_cast<double>(n - t);
  const double kb = static_cast<double>(budget);
  return (kb - q) / (remaining - 1.0) - kb / remaining;
}

RatioCurve ratio_mean_curve(const AbilityDistribution& d, const Policy& policy, long n, long k, long reps,
                            std::uint64_t seed) {
  if (reps < 1) throw Error(Errc::BadArgument, "reps must be >= 1");
  check_pair(n, k);
  RatioCurve out;
  out.mean_ratio.assign(n, 0.0);
  out.mean_budget.assign(n, 0.0);
  for (long rep = 0; rep < reps; ++rep) {
    Stream stream(seed, static_cast<std::uint64_t>(rep));
    out.mean_ratio[0] += static_cast<double>(k) / static_cast<double>(n);
    out.mean_budget[0] += static_cast<double>(k);
    simulate(d, policy, n, k, stream, [&](long t, int, bool, long budget) {
      if (t < n) {
        out.mean_ratio[t] += static_cast<double>(budget) / static_cast<double>(n - t);
        out.mean_budget[t] += static_cast<double>(budget);
      }
    });
  }
  for (long t = 0; t < n; ++t) {
    out.mean_ratio[t] /= static_cast<double>(reps);
    out.mean_budget[t] /= static_cast<double>(reps);
  }
  return out;
}

}  // namespace multisec
