#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multisec/distribution.hpp"
#include "multisec/offline.hpp"
#include "multisec/policies.hpp"

namespace multisec {

enum class Method { Exact, MonteCarlo };

std::string to_string(Method m);

struct RegretRecord {
  long n = 0;
  long k = 0;
  std::string policy;
  Method method = Method::Exact;
  double v_on = 0.0;
  double v_off = 0.0;
  double regret = 0.0;
  double ci_halfwidth = 0.0;
  double error_bound = 0.0;
};

struct PolicyEvaluation {
  double value = 0.0;       // V_on^pi(n, k)
  double mass_drift = 0.0;  // |1 - total probability| before any renormalization
};

// Forward propagation of the residual-budget distribution over t = 1..n. The
// policy's selection probabilities are integrated over u in closed form, so
// nothing is sampled.
PolicyEvaluation evaluate_policy(const AbilityDistribution& d, const Policy& policy, long n, long k);

inline double exact_policy_value(const AbilityDistribution& d, const Policy& policy, long n, long k) {
  return evaluate_policy(d, policy, n, k).value;
}

RegretRecord exact_regret(const AbilityDistribution& d, const Policy& policy, long n, long k,
                          double tail_tol = kDefaultTailTol);

// Paired estimator: the policy payoff and the offline sort payoff are computed
// on the same sampled path. Replication r uses Stream(seed, r).
RegretRecord mc_regret(const AbilityDistribution& d, const Policy& policy, long n, long k, long reps,
                       std::uint64_t seed, int threads = 1);

struct SweepOptions {
  Method method = Method::Exact;
  long reps = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  double tail_tol = kDefaultTailTol;
};

struct SweepFailure {
  std::string policy;
  long n = 0;
  long k = 0;
  std::string message;
};

struct SweepResult {
  std::vector<RegretRecord> records;  // ordered by (policy list position, n, k)
  std::vector<SweepFailure> failures;
};

// Evaluates every (policy, n, k) cell. Policies are named as for make_policy.
SweepResult sweep(const AbilityDistribution& d, const std::vector<std::string>& policies,
                  const std::vector<std::pair<long, long>>& grid, const SweepOptions& options = {});

// Exact offline values and policy values are memoized per (distribution,
// n, k[, policy]) for the lifetime of the process.
void clear_exact_cache();

}  // namespace multisec
