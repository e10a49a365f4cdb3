#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace multisec {

// Absolute slack used whenever a budget ratio is compared against a threshold
// or survival value. Ratios K/(n-t) with n <= 1e5 are at least 1e-10 apart, so
// this only absorbs binary rounding of the thresholds themselves.
inline constexpr double kRatioTol = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Finite-support ability distribution. Abilities are indexed 1..m with a_1
// the largest value; index m+1 is the "below everything" sentinel used by the
// survival function (Fbar(a_{m+1}) = 1).
class AbilityDistribution {
 public:
  AbilityDistribution(std::vector<double> support, std::vector<double> pmf);

  int size() const noexcept { return static_cast<int>(support_.size()); }

  double ability(int j) const;  // a_j, 1 <= j <= m
  double mass(int j) const;     // f_j, 1 <= j <= m

  // P(X > a_j) = f_1 + ... + f_{j-1}, 1 <= j <= m+1.
  double survival(int j) const;

  double mean() const noexcept { return mean_; }
  double half_min_mass() const noexcept { return half_min_mass_; }

  // Inverse CDF over indices in support order: returns j with
  // f_1 + ... + f_{j-1} <= u < f_1 + ... + f_j.
  int sample(double u) const noexcept;

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> pmf() const noexcept { return pmf_; }

  friend bool operator==(const AbilityDistribution&, const AbilityDistribution&) = default;

 private:
  std::vector<double> support_;
  std::vector<double> pmf_;
  std::vector<double> survival_;  // size m+1
  double mean_ = 0.0;
  double half_min_mass_ = 0.0;
};

// Budget-Ratio thresholds T_1 = 0 < T_2 < ... < T_m < T_{m+1} = +inf.
class ThresholdSet {
 public:
  explicit ThresholdSet(const AbilityDistribution& d);

  int size() const noexcept { return static_cast<int>(t_.size()) - 1; }  // m
  double operator[](int j) const;  // T_j, 1 <= j <= m+1
  std::span<const double> values() const noexcept { return t_; }

  // The unique j in [1, m] with T_j <= ratio < T_{j+1} (closed on the left,
  // up to kRatioTol).
  int bucket(double ratio) const noexcept;

 private:
  std::vector<double> t_;
};

inline ThresholdSet thresholds(const AbilityDistribution& d) { return ThresholdSet(d); }

// Index of the ability level at which the offline sort is marginal for the
// budget ratio k/n (three-branch map, closed-left intervals).
int action_index_j0(const AbilityDistribution& d, long n, long k);

// Support {3, 2, 1} with pmf {1/2 - 4 eps, 2 eps, 1/2 + 2 eps}; eps in (0, 1/8).
AbilityDistribution kleinberg_distribution(double eps);

}  // namespace multisec
