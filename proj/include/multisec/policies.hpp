#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multisec/distribution.hpp"
#include "multisec/dp.hpp"

namespace multisec {

// Information available when deciding on the candidate arriving at t_next:
// the residual budget K_{t_next - 1}, the observed ability index and a private
// uniform draw.
struct PolicyContext {
  long t_next = 1;
  long n = 1;
  long residual_budget = 0;
  int ability_index = 1;
  double u = 0.0;
};

struct Decision {
  bool select = false;
};

// A policy whose decision law depends only on (t, residual budget, ability, u)
// and selects iff u < p(t, K, j). Deterministic policies have p in {0, 1}.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  // Selection probability for each ability level j = 1..m (written to out[j-1])
  // given residual_budget > 0.
  virtual void selection_probabilities(long t_next, long n, long residual_budget,
                                       std::span<double> out) const = 0;

  // False for policies that need history beyond (t, K); the exact evaluator
  // refuses those.
  virtual bool state_markov() const { return true; }

  virtual int levels() const = 0;

  double selection_probability(long t_next, long n, long residual_budget, int ability_index) const;

  Decision decide(const PolicyContext& ctx) const;
};

class BudgetRatioPolicy final : public Policy {
 public:
  explicit BudgetRatioPolicy(AbilityDistribution d);

  std::string name() const override { return "br"; }
  int levels() const override { return dist_.size(); }
  void selection_probabilities(long t_next, long n, long residual_budget,
                               std::span<double> out) const override;

  // Highest accepted level at the given state (the BR bucket j).
  int bucket(long t_next, long n, long residual_budget) const;
  const ThresholdSet& thresholds() const noexcept { return thresholds_; }

 private:
  AbilityDistribution dist_;
  ThresholdSet thresholds_;
};

class DynamicProgrammingPolicy final : public Policy {
 public:
  DynamicProgrammingPolicy(const AbilityDistribution& d, long n, long k);

  std::string name() const override { return "dp"; }
  int levels() const override { return m_; }
  void selection_probabilities(long t_next, long n, long residual_budget,
                               std::span<double> out) const override;

  double optimal_value() const noexcept { return cutoffs_.optimal_value(); }

 private:
  int m_;
  DPCutoffs cutoffs_;
};

// Decision from a full DP table: select iff K > 0 and a_j >= h_l(K) with
// l = n - t_next + 1.
Decision dp_decide(const AbilityDistribution& d, const DPTable& table, const PolicyContext& ctx);

class AdaptiveIndexPolicy final : public Policy {
 public:
  explicit AdaptiveIndexPolicy(AbilityDistribution d);

  std::string name() const override { return "ai"; }
  int levels() const override { return dist_.size(); }
  void selection_probabilities(long t_next, long n, long residual_budget,
                               std::span<double> out) const override;

 private:
  AbilityDistribution dist_;
};

// Selection probabilities fixed in advance: p(j, t) for j = 1..m, t = 1..n.
class NonAdaptiveMatrix {
 public:
  NonAdaptiveMatrix(int m, long n, std::vector<double> row_major);

  int levels() const noexcept { return m_; }
  long horizon() const noexcept { return n_; }
  double operator()(int j, long t) const;

 private:
  int m_;
  long n_;
  std::vector<double> p_;
};

// Index policy: time-constant probabilities from the deterministic relaxation.
NonAdaptiveMatrix index_matrix(const AbilityDistribution& d, long n, long k);

// Takes every a_1 arrival and nothing else.
NonAdaptiveMatrix take_top_matrix(const AbilityDistribution& d, long n);

class NonAdaptivePolicy final : public Policy {
 public:
  NonAdaptivePolicy(std::string name, NonAdaptiveMatrix matrix)
      : name_(std::move(name)), matrix_(std::move(matrix)) {}

  std::string name() const override { return name_; }
  int levels() const override { return matrix_.levels(); }
  void selection_probabilities(long t_next, long n, long residual_budget,
                               std::span<double> out) const override;

  const NonAdaptiveMatrix& matrix() const noexcept { return matrix_; }

 private:
  std::string name_;
  NonAdaptiveMatrix matrix_;
};

// Builds a policy from its CLI name: br | dp | ai | index | take-top |
// matrix:<csv file with m rows and n columns>.
std::unique_ptr<Policy> make_policy(std::string_view spec, const AbilityDistribution& d, long n, long k);

}  // namespace multisec

namespace multisec {

// Free-function forms of the individual decision rules.
Decision br_decide(const ThresholdSet& thresholds, const PolicyContext& ctx);
Decision ai_decide(const AbilityDistribution& d, const PolicyContext& ctx);
Decision nonadaptive_decide(const NonAdaptiveMatrix& matrix, const PolicyContext& ctx);

}  // namespace multisec
