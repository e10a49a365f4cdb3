#include "multisec/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "multisec/error.hpp"

namespace multisec {

namespace {

void check_pair(long n, long k) {
  if (n < 0 || k < 0) throw Error(Errc::BadArgument, "n and k must be non-negative");
  if (k > n) throw Error(Errc::InfeasiblePair, "k=" + std::to_string(k) + " > n=" + std::to_string(n));
}

struct TruncatedMin {
  double value = 0.0;    // E[min(B, k)] over the retained window
  double omitted = 0.0;  // probability mass outside the window
};

// E[min(B, k)] with B ~ Binomial(n, p), dropping at most tail_tol/2 of mass
// from each tail.
TruncatedMin expected_min(long n, double p, long k, double tail_tol) {
  if (p <= 0.0) return {};
  if (p >= 1.0) return {static_cast<double>(std::min(n, k)), 0.0};
  const auto pmf = binomial_pmf(n, p);
  long lo = 0;
  long hi = n;
  double dropped_lo = 0.0;
  double dropped_hi = 0.0;
  const double half = tail_tol / 2;
  while (lo < hi && dropped_lo + pmf[lo] <= half) dropped_lo += pmf[lo++];
  while (hi > lo && dropped_hi + pmf[hi] <= half) dropped_hi += pmf[hi--];
  double sum = 0.0;
  for (long b = lo; b <= hi; ++b) sum += static_cast<double>(std::min(b, k)) * pmf[b];
  return {sum, dropped_lo + dropped_hi};
}

}  // namespace

RealizationCounts RealizationCounts::from(std::vector<long> z) {
  RealizationCounts c;
  c.n = std::accumulate(z.begin(), z.end(), 0L);
  c.z = std::move(z);
  return c;
}

OfflineResult offline_sort(const AbilityDistribution& d, const RealizationCounts& counts, long k) {
  const int m = d.size();
  if (static_cast<int>(counts.z.size()) != m) {
    throw Error(Errc::CountMismatch, "expected " + std::to_string(m) + " counts");
  }
  long total = 0;
  for (long z : counts.z) {
    if (z < 0) throw Error(Errc::CountMismatch, "negative count");
    total += z;
  }
  if (total != counts.n) throw Error(Errc::CountMismatch, "counts do not sum to n");
  if (k < 0) throw Error(Errc::BadArgument, "k must be non-negative");

  OfflineResult out;
  out.selected.resize(m);
  long remaining = k;
  for (int j = 1; j <= m; ++j) {
    const long s = std::min(counts.z[j - 1], std::max(remaining, 0L));
    out.selected[j - 1] = s;
    out.payoff += d.ability(j) * static_cast<double>(s);
    remaining -= counts.z[j - 1];
  }
  return out;
}

OfflineValue offline_expected_value(const AbilityDistribution& d, long n, long k, double tail_tol) {
  check_pair(n, k);
  if (!(tail_tol >= 0.0 && tail_tol <= 1e-9)) {
    throw Error(Errc::BadArgument, "tail_tol must lie in [0, 1e-9]");
  }
  const int m = d.size();
  OfflineValue out;
  out.expected_selected.resize(m);
  if (k == n) {  // every candidate is taken: E[min(B_j, n)] = E[B_j]
    for (int j = 1; j <= m; ++j) {
      out.expected_selected[j - 1] = static_cast<double>(n) * d.mass(j);
      out.value += d.ability(j) * out.expected_selected[j - 1];
    }
    return out;
  }
  double prev = 0.0;  // E[min(B_{j-1}, k)], B_0 = 0
  double omitted = 0.0;
  for (int j = 1; j <= m; ++j) {
    const auto cur = expected_min(n, d.survival(j + 1), k, tail_tol);
    omitted += cur.omitted;
    out.expected_selected[j - 1] = cur.value - prev;
    out.value += d.ability(j) * (cur.value - prev);
    prev = cur.value;
  }
  out.error_bound = omitted * static_cast<double>(n) * d.ability(1);
  return out;
}

RelaxationSolution dr_solution(const AbilityDistribution& d, long n, long k) {
  check_pair(n, k);
  RelaxationSolution out;
  const int m = d.size();
  out.selected.resize(m);
  const double nn = static_cast<double>(n);
  for (int j = 1; j <= m; ++j) {
    const double s = std::min(nn * d.mass(j), std::max(static_cast<double>(k) - nn * d.survival(j), 0.0));
    out.selected[j - 1] = s;
    out.value += d.ability(j) * s;
  }
  return out;
}

std::vector<double> binomial_pmf(long n, double p) {
  if (n < 0) throw Error(Errc::BadArgument, "binomial with negative trials");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::BadArgument, "binomial p outside [0,1]");
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double odds = p / (1.0 - p);
  const long mode = std::min(n, static_cast<long>(std::floor((n + 1) * p)));
  pmf[mode] = 1.0;
  for (long x = mode; x < n; ++x) {
    pmf[x + 1] = pmf[x] * odds * static_cast<double>(n - x) / static_cast<double>(x + 1);
  }
  for (long x = mode; x > 0; --x) {
    pmf[x - 1] = pmf[x] / odds * static_cast<double>(x) / static_cast<double>(n - x + 1);
  }
  // Sum smallest terms first.
  double total = 0.0;
  for (long x = 0; x < mode; ++x) total += pmf[x];
  double upper = 0.0;
  for (long x = n; x >= mode; --x) upper += pmf[x];
  total += upper;
  for (double& v : pmf) v /= total;
  return pmf;
}

double binomial_overshoot(long n, double p, double k) {
  const auto pmf = binomial_pmf(n, p);
  double sum = 0.0;
  for (long b = n; b >= 0 && static_cast<double>(b) > k; --b) sum += (static_cast<double>(b) - k) * pmf[b];
  return sum;
}

double binomial_undershoot(long n, double p, double k) {
  const auto pmf = binomial_pmf(n, p);
  double sum = 0.0;
  for (long b = 0; b <= n && static_cast<double>(b) < k; ++b) sum += (k - static_cast<double>(b)) * pmf[b];
  return sum;
}

}  // namespace multisec
