#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multisec/distribution.hpp"
#include "multisec/policies.hpp"
#include "multisec/rng.hpp"

namespace multisec {

struct EpisodeRecord {
  long n = 0;
  long k = 0;
  std::string policy;
  std::vector<int> abilities;        // ability index at t = 1..n
  std::vector<std::uint8_t> decisions;  // sigma_t at t = 1..n
  double payoff = 0.0;
  std::vector<long> budget_path;     // K_0..K_n
  std::vector<double> ratio_path;    // R_t = K_t / (n - t), t = 0..n-1

  std::vector<long> ability_counts(int m) const;
};

struct EpisodeSummary {
  double payoff = 0.0;
  long selected = 0;
  std::vector<long> counts;  // realized z_j
};

// One sample path. Every step consumes two uniforms from the stream (ability
// draw, then decision draw) whether or not the policy uses the second, so the
// ability sequence for a given stream is identical across policies.
EpisodeRecord run_episode(const AbilityDistribution& d, const Policy& policy, long n, long k, Stream& stream);

// Same path as run_episode without storing the trajectory.
EpisodeSummary simulate_summary(const AbilityDistribution& d, const Policy& policy, long n, long k,
                                Stream& stream);

struct OrbitDiagnostics {
  double delta = 0.0;
  long tau0 = 0;
  int j_tau0 = 0;  // m+1 when the cutoff was reached first
  long tau = 0;
  std::vector<double> y_path;  // Y_u, u = 0..n - tau0 (empty when j_tau0 = m+1)
};

// n - ceil(2/delta) - 1, clamped to >= 0.
long orbit_cutoff(long n, double delta);

// Entry time into (and exit time from) the delta-orbit of a BR threshold.
OrbitDiagnostics orbit_diagnostics(const AbilityDistribution& d, const EpisodeRecord& record, double delta);

// Expected one-step change of Y_u = K - T_anchor (n - t) under BR at state
// (t, K): T_anchor - Fbar(a_{b+1}) with b the BR bucket, or T_anchor if K = 0.
double drift_at_state(const AbilityDistribution& d, const ThresholdSet& thresholds, long n, long t, long budget,
                      int j_anchor);

// Expected one-step change of the budget ratio K/(n - t) under the
// adaptive-index policy, computed from its selection probabilities.
double ai_ratio_increment(const AbilityDistribution& d, long n, long t, long budget);

struct RatioCurve {
  std::vector<double> mean_ratio;   // average R_t, t = 0..n-1
  std::vector<double> mean_budget;  // average K_t, t = 0..n-1
};

RatioCurve ratio_mean_curve(const AbilityDistribution& d, const Policy& policy, long n, long k, long reps,
                            std::uint64_t seed);

}  // namespace multisec
