#pragma once

#include <cstdint>
#include <vector>

#include "multisec/distribution.hpp"

namespace multisec {

// g_l(kappa) for l = 0..n periods to go and kappa = 0..k residual budget:
// the optimal expected ability still to be collected, independent of what has
// already been accrued.
class DPTable {
 public:
  DPTable(long n, long k, std::vector<double> g) : n_(n), k_(k), g_(std::move(g)) {}

  long horizon() const noexcept { return n_; }
  long budget() const noexcept { return k_; }

  double value(long periods_to_go, long kappa) const;

  // h_l(kappa) = g_{l-1}(kappa) - g_{l-1}(kappa - 1); an a_j-candidate is
  // accepted iff a_j >= h_l(kappa).
  double accept_threshold(long periods_to_go, long kappa) const;

  double optimal_value() const { return value(n_, k_); }

 private:
  long n_;
  long k_;
  std::vector<double> g_;  // row-major, (n+1) x (k+1)
};

// Full table; memory (n+1)(k+1) doubles.
DPTable solve(const AbilityDistribution& d, long n, long k);

// g_n(k) only, keeping two rows.
double optimal_online_value(const AbilityDistribution& d, long n, long k);

// Relative slack of the acceptance comparison a_j >= h: ties (and near ties
// within 1e-12 a_1) are accepted.
inline double accept_slack(const AbilityDistribution& d) { return 1e-12 * d.ability(1); }

// Compact optimal policy: for every (l, kappa) the number of ability levels
// accepted, i.e. the largest j with a_j >= h_l(kappa). Built in one sweep
// without retaining g; memory (n)(k) bytes.
class DPCutoffs {
 public:
  DPCutoffs(const AbilityDistribution& d, long n, long k);

  long horizon() const noexcept { return n_; }
  long budget() const noexcept { return k_; }
  double optimal_value() const noexcept { return value_; }

  // Number of top ability levels accepted with l periods to go, kappa >= 1.
  int accepted_levels(long periods_to_go, long kappa) const;

 private:
  long n_;
  long k_;
  double value_ = 0.0;
  std::vector<std::uint8_t> levels_;  // (l-1) * k + (kappa-1)
};

// Direct evaluation of the three-argument recursion
// v_l(w, kappa) = sum_j f_j max{v_{l-1}(w + a_j, kappa - 1), v_{l-1}(w, kappa)}
// over the reachable accrued values w. Test oracle for small n (<= 12).
double full_value_check(const AbilityDistribution& d, long n, long k, double w);

}  // namespace multisec
