#include "multisec/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "multisec/error.hpp"

namespace multisec {

AbilityDistribution::AbilityDistribution(std::vector<double> support, std::vector<double> pmf)
    : support_(std::move(support)), pmf_(std::move(pmf)) {
  if (support_.empty() || support_.size() != pmf_.size()) {
    throw Error(Errc::BadArgument, "support and pmf must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (!std::isfinite(support_[i]) || support_[i] <= 0.0) {
      throw Error(Errc::NonPositiveValue, "ability values must be finite and > 0");
    }
    if (i > 0 && !(support_[i] < support_[i - 1])) {
      throw Error(Errc::NonDecreasingSupport,
                  "support must be strictly decreasing (a_1 > a_2 > ... > a_m)");
    }
  }
  for (double f : pmf_) {
    if (!std::isfinite(f) || f <= 0.0) throw Error(Errc::BadPmf, "every mass must be > 0");
  }
  const double total = std::accumulate(pmf_.begin(), pmf_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(Errc::BadPmf, "masses must sum to 1 within 1e-12 (got " + std::to_string(total) + ")");
  }
  for (double& f : pmf_) f /= total;

  const int m = size();
  survival_.assign(m + 1, 0.0);
  for (int j = 1; j <= m; ++j) survival_[j] = survival_[j - 1] + pmf_[j - 1];
  survival_[m] = 1.0;

  for (int j = 0; j < m; ++j) mean_ += support_[j] * pmf_[j];
  half_min_mass_ = 0.5 * *std::min_element(pmf_.begin(), pmf_.end());
}

double AbilityDistribution::ability(int j) const {
  if (j < 1 || j > size()) throw Error(Errc::IndexOutOfRange, "ability index " + std::to_string(j));
  return support_[j - 1];
}

double AbilityDistribution::mass(int j) const {
  if (j < 1 || j > size()) throw Error(Errc::IndexOutOfRange, "ability index " + std::to_string(j));
  return pmf_[j - 1];
}

double AbilityDistribution::survival(int j) const {
  if (j < 1 || j > size() + 1) {
    throw Error(Errc::IndexOutOfRange, "survival index " + std::to_string(j));
  }
  return survival_[j - 1];
}

int AbilityDistribution::sample(double u) const noexcept {
  // survival_[j] is the cumulative mass of the first j cells.
  const auto it = std::upper_bound(survival_.begin() + 1, survival_.end() - 1, u);
  return static_cast<int>(it - survival_.begin());
}

ThresholdSet::ThresholdSet(const AbilityDistribution& d) {
  const int m = d.size();
  t_.assign(m + 1, 0.0);
  for (int j = 2; j <= m; ++j) t_[j - 1] = 0.5 * (d.survival(j) + d.survival(j + 1));
  t_[m] = kInfinity;
}

double ThresholdSet::operator[](int j) const {
  if (j < 1 || j > size() + 1) {
    throw Error(Errc::IndexOutOfRange, "threshold index " + std::to_string(j));
  }
  return t_[j - 1];
}

int ThresholdSet::bucket(double ratio) const noexcept {
  const int m = size();
  if (m <= 64) {
    int j = 1;
    while (j < m && t_[j] - kRatioTol <= ratio) ++j;
    return j;
  }
  // First threshold strictly above ratio (with slack); its predecessor is the bucket.
  const auto it = std::upper_bound(t_.begin() + 1, t_.begin() + m, ratio,
                                   [](double r, double t) { return r < t - kRatioTol; });
  return static_cast<int>(it - t_.begin());
}

int action_index_j0(const AbilityDistribution& d, long n, long k) {
  if (n < 1 || k < 0) throw Error(Errc::BadArgument, "need n >= 1 and k >= 0");
  if (k > n) throw Error(Errc::InfeasiblePair, "k > n");
  const int m = d.size();
  if (m == 1) return 1;
  const double r = static_cast<double>(k) / static_cast<double>(n);
  if (r < d.mass(1) + d.mass(2) / 2 - kRatioTol) return 1;
  if (r >= 1.0 - d.mass(m) / 2 - kRatioTol) return m;
  for (int j = 1; j <= m - 1; ++j) {
    const double lo = d.survival(j) + d.mass(j) / 2;
    const double hi = d.survival(j + 2) - d.mass(j + 1) / 2;
    if (lo - kRatioTol <= r && r < hi - kRatioTol) return j;
  }
  return m;  // unreachable for a valid distribution
}

AbilityDistribution kleinberg_distribution(double eps) {
  if (!(eps > 0.0 && eps < 0.125)) throw Error(Errc::BadEpsilon, "eps must lie in (0, 1/8)");
  return AbilityDistribution({3.0, 2.0, 1.0}, {0.5 - 4 * eps, 2 * eps, 0.5 + 2 * eps});
}

}  // namespace multisec
