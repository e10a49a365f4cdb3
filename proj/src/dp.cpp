#include "multisec/dp.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "multisec/error.hpp"

namespace multisec {

namespace {

void check_pair(long n, long k) {
  if (n < 0 || k < 0) throw Error(Errc::BadArgument, "n and k must be non-negative");
  if (k > n) throw Error(Errc::InfeasiblePair, "k=" + std::to_string(k) + " > n=" + std::to_string(n));
}

// next[kappa] = sum_j f_j max{a_j + prev[kappa-1], prev[kappa]}, next[0] = 0.
void advance_row(const AbilityDistribution& d, const std::vector<double>& prev, std::vector<double>& next) {
  const int m = d.size();
  const auto a = d.support();
  const auto f = d.pmf();
  next[0] = 0.0;
  for (std::size_t kappa = 1; kappa < prev.size(); ++kappa) {
    const double take_base = prev[kappa - 1];
    const double skip = prev[kappa];
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += std::max(a[j] + take_base, skip) * f[j];
    next[kappa] = sum;
  }
}

}  // namespace

double DPTable::value(long periods_to_go, long kappa) const {
  if (periods_to_go < 0 || periods_to_go > n_ || kappa < 0 || kappa > k_) {
    throw Error(Errc::IndexOutOfRange, "g index (" + std::to_string(periods_to_go) + ", " +
                                           std::to_string(kappa) + ")");
  }
  return g_[periods_to_go * (k_ + 1) + kappa];
}

double DPTable::accept_threshold(long periods_to_go, long kappa) const {
  if (periods_to_go < 1 || periods_to_go > n_ || kappa < 1 || kappa > k_) {
    throw Error(Errc::IndexOutOfRange, "threshold index (" + std::to_string(periods_to_go) + ", " +
                                           std::to_string(kappa) + ")");
  }
  return value(periods_to_go - 1, kappa) - value(periods_to_go - 1, kappa - 1);
}

DPTable solve(const AbilityDistribution& d, long n, long k) {
  check_pair(n, k);
  const std::size_t width = static_cast<std::size_t>(k) + 1;
  std::vector<double> g(static_cast<std::size_t>(n + 1) * width, 0.0);
  std::vector<double> prev(width, 0.0);
  std::vector<double> next(width, 0.0);
  for (long l = 1; l <= n; ++l) {
    advance_row(d, prev, next);
    std::copy(next.begin(), next.end(), g.begin() + l * width);
    std::swap(prev, next);
  }
  return DPTable(n, k, std::move(g));
}

double optimal_online_value(const AbilityDistribution& d, long n, long k) {
  check_pair(n, k);
  std::vector<double> prev(k + 1, 0.0);
  std::vector<double> next(k + 1, 0.0);
  for (long l = 1; l <= n; ++l) {
    advance_row(d, prev, next);
    std::swap(prev, next);
  }
  return prev[k];
}

DPCutoffs::DPCutoffs(const AbilityDistribution& d, long n, long k) : n_(n), k_(k) {
  check_pair(n, k);
  const int m = d.size();
  if (m > 255) throw Error(Errc::BadArgument, "compact DP policy supports at most 255 ability levels");
  levels_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0);
  const double slack = accept_slack(d);
  std::vector<double> prev(k + 1, 0.0);  // g_{l-1}
  std::vector<double> next(k + 1, 0.0);
  for (long l = 1; l <= n; ++l) {
    auto* row = levels_.data() + static_cast<std::size_t>(l - 1) * k;
    for (long kappa = 1; kappa <= k; ++kappa) {
      const double h = prev[kappa] - prev[kappa - 1];
      int accepted = 0;
      while (accepted < m && d.ability(accepted + 1) >= h - slack) ++accepted;
      row[kappa - 1] = static_cast<std::uint8_t>(accepted);
    }
    advance_row(d, prev, next);
    std::swap(prev, next);
  }
  value_ = prev[k];
}

int DPCutoffs::accepted_levels(long periods_to_go, long kappa) const {
  if (periods_to_go < 1 || periods_to_go > n_ || kappa < 1 || kappa > k_) {
    throw Error(Errc::IndexOutOfRange, "cutoff index (" + std::to_string(periods_to_go) + ", " +
                                           std::to_string(kappa) + ")");
  }
  return levels_[static_cast<std::size_t>(periods_to_go - 1) * k_ + (kappa - 1)];
}

namespace {

// Accrued value is tracked as exact selection counts per ability level so the
// memo key is free of floating-point noise.
struct VRecursion {
  const AbilityDistribution& d;
  double w0;
  std::map<std::tuple<long, long, std::vector<int>>, double> memo;

  double accrued(const std::vector<int>& counts) const {
    double w = w0;
    for (std::size_t j = 0; j < counts.size(); ++j) w += counts[j] * d.support()[j];
    return w;
  }

  double v(long l, long kappa, std::vector<int>& counts) {
    if (l == 0 || kappa == 0) return accrued(counts);
    auto key = std::make_tuple(l, kappa, counts);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const double skip = v(l - 1, kappa, counts);
    double sum = 0.0;
    for (int j = 0; j < d.size(); ++j) {
      ++counts[j];
      const double take = v(l - 1, kappa - 1, counts);
      --counts[j];
      sum += std::max(take, skip) * d.pmf()[j];
    }
    memo.emplace(std::move(key), sum);
    return sum;
  }
};

}  // namespace

double full_value_check(const AbilityDistribution& d, long n, long k, double w) {
  check_pair(n, k);
  if (n > 12) throw Error(Errc::InstanceTooLarge, "full_value_check is limited to n <= 12");
  VRecursion rec{d, w, {}};
  std::vector<int> counts(d.size(), 0);
  return rec.v(n, k, counts);
}

}  // namespace multisec
