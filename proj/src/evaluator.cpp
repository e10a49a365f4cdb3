#include "multisec/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "multisec/error.hpp"
#include "multisec/rng.hpp"
#include "multisec/simulator.hpp"

namespace multisec {

namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

using DistKey = std::pair<std::vector<double>, std::vector<double>>;

DistKey key_of(const AbilityDistribution& d) {
  return {std::vector<double>(d.support().begin(), d.support().end()),
          std::vector<double>(d.pmf().begin(), d.pmf().end())};
}

struct ExactCache {
  std::mutex mu;
  std::map<std::tuple<DistKey, long, long, double>, OfflineValue> offline;
  std::map<std::tuple<DistKey, std::string, long, long>, double> online;
};

ExactCache& cache() {
  static ExactCache c;
  return c;
}

OfflineValue cached_offline(const AbilityDistribution& d, long n, long k, double tail_tol) {
  auto key = std::make_tuple(key_of(d), n, k, tail_tol);
  {
    std::lock_guard lock(cache().mu);
    if (auto it = cache().offline.find(key); it != cache().offline.end()) return it->second;
  }
  auto value = offline_expected_value(d, n, k, tail_tol);
  std::lock_guard lock(cache().mu);
  cache().offline.emplace(std::move(key), value);
  return value;
}

double cached_online(const AbilityDistribution& d, const Policy& policy, long n, long k) {
  auto key = std::make_tuple(key_of(d), policy.name(), n, k);
  {
    std::lock_guard lock(cache().mu);
    if (auto it = cache().online.find(key); it != cache().online.end()) return it->second;
  }
  const double value = evaluate_policy(d, policy, n, k).value;
  std::lock_guard lock(cache().mu);
  cache().online.emplace(std::move(key), value);
  return value;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(long count, int threads, Body&& body) {
  const int workers = static_cast<int>(std::clamp<long>(threads, 1, std::max(1L, count)));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(Method m) { return m == Method::Exact ? "exact" : "mc"; }

void clear_exact_cache() {
  std::lock_guard lock(cache().mu);
  cache().offline.clear();
  cache().online.clear();
}

PolicyEvaluation evaluate_policy(const AbilityDistribution& d, const Policy& policy, long n, long k) {
  if (n < 0 || k < 0) throw Error(Errc::BadArgument, "n and k must be non-negative");
  if (k > n) throw Error(Errc::InfeasiblePair, "k > n");
  if (!policy.state_markov()) {
    throw Error(Errc::NonMarkovPolicy, "policy '" + policy.name() + "' is not Markov in (t, K)");
  }
  if (policy.levels() != d.size()) throw Error(Errc::DimensionMismatch, "policy/distribution level mismatch");

  const int m = d.size();
  const auto a = d.support();
  const auto f = d.pmf();
  std::vector<double> prob(k + 1, 0.0);
  std::vector<double> next(k + 1, 0.0);
  std::vector<double> p(m);
  prob[k] = 1.0;
  CompensatedSum payoff;
  double drift = 0.0;

  for (long t = 1; t <= n; ++t) {
    const long lo = std::max(0L, k - (t - 1));  // reachable residual budgets before step t
    std::fill(next.begin() + lo - (lo > 0 ? 1 : 0), next.end(), 0.0);
    if (prob[0] != 0.0 && lo == 0) next[0] = prob[0];
    for (long kappa = std::max(1L, lo); kappa <= k; ++kappa) {
      const double mass = prob[kappa];
      if (mass == 0.0) continue;
      policy.selection_probabilities(t, n, kappa, p);
      double q = 0.0;
      double gain = 0.0;
      for (int j = 0; j < m; ++j) {
        q += f[j] * p[j];
        gain += f[j] * p[j] * a[j];
      }
      payoff.add(mass * gain);
      next[kappa - 1] += mass * q;
      next[kappa] += mass * (1.0 - q);
    }
    std::swap(prob, next);
  }
  const double total = std::accumulate(prob.begin(), prob.end(), 0.0);
  drift = std::abs(total - 1.0);
  return {payoff.value(), drift};
}

RegretRecord exact_regret(const AbilityDistribution& d, const Policy& policy, long n, long k, double tail_tol) {
  const auto off = cached_offline(d, n, k, tail_tol);
  RegretRecord rec;
  rec.n = n;
  rec.k = k;
  rec.policy = policy.name();
  rec.method = Method::Exact;
  rec.v_on = cached_online(d, policy, n, k);
  rec.v_off = off.value;
  rec.regret = rec.v_off - rec.v_on;
  rec.error_bound = off.error_bound;
  return rec;
}

RegretRecord mc_regret(const AbilityDistribution& d, const Policy& policy, long n, long k, long reps,
                       std::uint64_t seed, int threads) {
  if (reps < 1) throw Error(Errc::BadArgument, "reps must be >= 1");
  if (n < 1 || k < 0) throw Error(Errc::BadArgument, "need n >= 1 and k >= 0");
  if (k > n) throw Error(Errc::InfeasiblePair, "k > n");
  std::vector<double> online(reps);
  std::vector<double> offline(reps);
  parallel_for(reps, threads, [&](long r) {
    Stream stream(seed, static_cast<std::uint64_t>(r));
    const auto path = simulate_summary(d, policy, n, k, stream);
    online[r] = path.payoff;
    offline[r] = offline_sort(d, RealizationCounts{path.counts, n}, k).payoff;
  });

  // Index-ordered reductions keep the output independent of the thread count.
  const double nr = static_cast<double>(reps);
  double sum_on = 0.0;
  double sum_off = 0.0;
  double sum_diff = 0.0;
  for (long r = 0; r < reps; ++r) {
    sum_on += online[r];
    sum_off += offline[r];
    sum_diff += offline[r] - online[r];
  }
  const double mean_diff = sum_diff / nr;
  double ss = 0.0;
  for (long r = 0; r < reps; ++r) {
    const double dev = (offline[r] - online[r]) - mean_diff;
    ss += dev * dev;
  }
  const double sd = reps > 1 ? std::sqrt(ss / (nr - 1.0)) : 0.0;

  RegretRecord rec;
  rec.n = n;
  rec.k = k;
  rec.policy = policy.name();
  rec.method = Method::MonteCarlo;
  rec.v_on = sum_on / nr;
  rec.v_off = sum_off / nr;
  rec.regret = mean_diff;
  rec.ci_halfwidth = 1.96 * sd / std::sqrt(nr);
  return rec;
}

SweepResult sweep(const AbilityDistribution& d, const std::vector<std::string>& policies,
                  const std::vector<std::pair<long, long>>& grid, const SweepOptions& options) {
  auto sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  const long cells = static_cast<long>(policies.size() * sorted_grid.size());
  std::vector<RegretRecord> records(cells);
  std::vector<std::string> errors(cells);
  std::vector<std::uint8_t> ok(cells, 0);

  // MC cells run their replications sequentially so that parallelism is only
  // across cells; the result does not depend on the split.
  parallel_for(cells, options.threads, [&](long cell) {
    const auto& name = policies[cell / sorted_grid.size()];
    const auto [n, k] = sorted_grid[cell % sorted_grid.size()];
    try {
      const auto policy = make_policy(name, d, n, k);
      records[cell] = options.method == Method::Exact
                          ? exact_regret(d, *policy, n, k, options.tail_tol)
                          : mc_regret(d, *policy, n, k, options.reps, options.seed, 1);
      records[cell].policy = name;
      ok[cell] = 1;
    } catch (const std::exception& e) {
      errors[cell] = e.what();
    }
  });

  SweepResult out;
  for (long cell = 0; cell < cells; ++cell) {
    if (ok[cell]) {
      out.records.push_back(std::move(records[cell]));
    } else {
      const auto [n, k] = sorted_grid[cell % sorted_grid.size()];
      out.failures.push_back({policies[cell / sorted_grid.size()], n, k, errors[cell]});
    }
  }
  return out;
}

}  // namespace multisec
