#pragma once

#include <vector>

#include "multisec/distribution.hpp"

namespace multisec {

// Realized number of candidates of each ability (z_j) over a horizon of n.
struct RealizationCounts {
  std::vector<long> z;
  long n = 0;

  static RealizationCounts from(std::vector<long> z);
};

struct OfflineResult {
  std::vector<long> selected;  // per ability, s_j
  double payoff = 0.0;
};

// Greedy solution of the offline selection LP for one realization: take the
// k largest realized values.
OfflineResult offline_sort(const AbilityDistribution& d, const RealizationCounts& counts, long k);

struct OfflineValue {
  double value = 0.0;                   // V_off*(n, k)
  std::vector<double> expected_selected;  // E[S_j], j = 1..m
  double error_bound = 0.0;             // bound on the truncated-tail contribution
};

inline constexpr double kDefaultTailTol = 1e-12;

// Exact expected offline value. Uses sum_{i<=j} S_i = min(B_j, k) with
// B_j ~ Binomial(n, Fbar(a_{j+1})); tails of total mass <= tail_tol per
// binomial are dropped and accounted for in error_bound.
OfflineValue offline_expected_value(const AbilityDistribution& d, long n, long k,
                                    double tail_tol = kDefaultTailTol);

struct RelaxationSolution {
  std::vector<double> selected;  // s*_j = min{n f_j, (k - n Fbar(a_j))_+}
  double value = 0.0;            // DR(n, k)
};

RelaxationSolution dr_solution(const AbilityDistribution& d, long n, long k);

// Numerically stable Binomial(n, p) pmf over 0..n, computed by ratio
// recurrence outward from the mode and normalized.
std::vector<double> binomial_pmf(long n, double p);

// E[(B - k)_+] and E[(k - B)_+] for B ~ Binomial(n, p), by direct summation.
double binomial_overshoot(long n, double p, double k);
double binomial_undershoot(long n, double p, double k);

}  // namespace multisec
