#include "multisec/policies.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "multisec/error.hpp"
#include "multisec/io.hpp"

namespace multisec {

namespace {

double snap_probability(double p) {
  if (p <= kRatioTol) return 0.0;
  if (p >= 1.0 - kRatioTol) return 1.0;
  return p;
}

double budget_ratio(long t_next, long n, long residual_budget) {
  // t = t_next - 1 decisions made, n - t candidates remain (>= 1).
  return static_cast<double>(residual_budget) / static_cast<double>(n - t_next + 1);
}

void check_context(long t_next, long n, long residual_budget) {
  if (t_next < 1 || t_next > n || residual_budget < 0) {
    throw Error(Errc::BadArgument, "invalid policy context (t_next=" + std::to_string(t_next) +
                                       ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

double Policy::selection_probability(long t_next, long n, long residual_budget, int ability_index) const {
  if (ability_index < 1 || ability_index > levels()) {
    throw Error(Errc::IndexOutOfRange, "ability index " + std::to_string(ability_index));
  }
  if (residual_budget <= 0) return 0.0;
  const auto m = static_cast<std::size_t>(levels());
  if (m <= 64) {
    std::array<double, 64> buf;
    selection_probabilities(t_next, n, residual_budget, std::span<double>(buf.data(), m));
    return buf[ability_index - 1];
  }
  std::vector<double> p(m);
  selection_probabilities(t_next, n, residual_budget, p);
  return p[ability_index - 1];
}

Decision Policy::decide(const PolicyContext& ctx) const {
  if (ctx.residual_budget <= 0) return {false};
  return {ctx.u < selection_probability(ctx.t_next, ctx.n, ctx.residual_budget, ctx.ability_index)};
}

BudgetRatioPolicy::BudgetRatioPolicy(AbilityDistribution d) : dist_(std::move(d)), thresholds_(dist_) {}

int BudgetRatioPolicy::bucket(long t_next, long n, long residual_budget) const {
  check_context(t_next, n, residual_budget);
  return thresholds_.bucket(budget_ratio(t_next, n, residual_budget));
}

void BudgetRatioPolicy::selection_probabilities(long t_next, long n, long residual_budget,
                                                std::span<double> out) const {
  const int j = bucket(t_next, n, residual_budget);
  for (int i = 0; i < levels(); ++i) out[i] = (residual_budget > 0 && i < j) ? 1.0 : 0.0;
}

DynamicProgrammingPolicy::DynamicProgrammingPolicy(const AbilityDistribution& d, long n, long k)
    : m_(d.size()), cutoffs_(d, n, k) {}

void DynamicProgrammingPolicy::selection_probabilities(long t_next, long n, long residual_budget,
                                                       std::span<double> out) const {
  check_context(t_next, n, residual_budget);
  if (n != cutoffs_.horizon() || residual_budget > cutoffs_.budget()) {
    throw Error(Errc::TableMismatch, "DP policy solved for n=" + std::to_string(cutoffs_.horizon()) +
                                         ", k=" + std::to_string(cutoffs_.budget()));
  }
  const int accepted = residual_budget > 0 ? cutoffs_.accepted_levels(n - t_next + 1, residual_budget) : 0;
  for (int i = 0; i < m_; ++i) out[i] = i < accepted ? 1.0 : 0.0;
}

Decision dp_decide(const AbilityDistribution& d, const DPTable& table, const PolicyContext& ctx) {
  check_context(ctx.t_next, ctx.n, ctx.residual_budget);
  if (ctx.n != table.horizon() || ctx.residual_budget > table.budget()) {
    throw Error(Errc::TableMismatch, "DP table solved for n=" + std::to_string(table.horizon()) +
                                         ", k=" + std::to_string(table.budget()));
  }
  if (ctx.residual_budget == 0) return {false};
  const double h = table.accept_threshold(ctx.n - ctx.t_next + 1, ctx.residual_budget);
  return {d.ability(ctx.ability_index) >= h - accept_slack(d)};
}

AdaptiveIndexPolicy::AdaptiveIndexPolicy(AbilityDistribution d) : dist_(std::move(d)) {}

void AdaptiveIndexPolicy::selection_probabilities(long t_next, long n, long residual_budget,
                                                  std::span<double> out) const {
  check_context(t_next, n, residual_budget);
  const double r = budget_ratio(t_next, n, residual_budget);
  for (int j = 1; j <= levels(); ++j) {
    if (residual_budget == 0) {
      out[j - 1] = 0.0;
    } else if (r >= dist_.survival(j + 1)) {
      out[j - 1] = 1.0;  // class saturated in the re-solved relaxation
    } else if (r <= dist_.survival(j)) {
      out[j - 1] = 0.0;
    } else {
      const double p = (r - dist_.survival(j)) / dist_.mass(j);
      out[j - 1] = snap_probability(std::clamp(p, 0.0, 1.0));
    }
  }
}

NonAdaptiveMatrix::NonAdaptiveMatrix(int m, long n, std::vector<double> row_major)
    : m_(m), n_(n), p_(std::move(row_major)) {
  if (m < 1 || n < 0 || p_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n)) {
    throw Error(Errc::DimensionMismatch, "matrix must hold m*n entries");
  }
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::BadArgument, "matrix entries must lie in [0,1]");
  }
}

double NonAdaptiveMatrix::operator()(int j, long t) const {
  if (j < 1 || j > m_ || t < 1 || t > n_) {
    throw Error(Errc::DimensionMismatch, "matrix entry (" + std::to_string(j) + ", " + std::to_string(t) + ")");
  }
  return p_[static_cast<std::size_t>(j - 1) * n_ + (t - 1)];
}

NonAdaptiveMatrix index_matrix(const AbilityDistribution& d, long n, long k) {
  if (n < 1 || k < 0) throw Error(Errc::BadArgument, "need n >= 1 and k >= 0");
  if (k > n) throw Error(Errc::InfeasiblePair, "k > n");
  const int m = d.size();
  const double r = static_cast<double>(k) / static_cast<double>(n);
  int j_id = m;
  for (int j = 1; j <= m; ++j) {
    if (r < d.survival(j + 1) - kRatioTol) {
      j_id = j;
      break;
    }
  }
  std::vector<double> column(m, 0.0);
  for (int j = 1; j < j_id; ++j) column[j - 1] = 1.0;
  column[j_id - 1] = snap_probability(std::clamp((r - d.survival(j_id)) / d.mass(j_id), 0.0, 1.0));

  std::vector<double> p(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < m; ++j) std::fill_n(p.begin() + static_cast<std::size_t>(j) * n, n, column[j]);
  return NonAdaptiveMatrix(m, n, std::move(p));
}

NonAdaptiveMatrix take_top_matrix(const AbilityDistribution& d, long n) {
  std::vector<double> p(static_cast<std::size_t>(d.size()) * n, 0.0);
  std::fill_n(p.begin(), n, 1.0);
  return NonAdaptiveMatrix(d.size(), n, std::move(p));
}

void NonAdaptivePolicy::selection_probabilities(long t_next, long n, long residual_budget,
                                                std::span<double> out) const {
  check_context(t_next, n, residual_budget);
  if (t_next > matrix_.horizon()) {
    throw Error(Errc::DimensionMismatch, "matrix has " + std::to_string(matrix_.horizon()) + " columns");
  }
  for (int j = 1; j <= levels(); ++j) out[j - 1] = residual_budget > 0 ? matrix_(j, t_next) : 0.0;
}

std::unique_ptr<Policy> make_policy(std::string_view spec, const AbilityDistribution& d, long n, long k) {
  if (spec == "br") return std::make_unique<BudgetRatioPolicy>(d);
  if (spec == "dp") return std::make_unique<DynamicProgrammingPolicy>(d, n, k);
  if (spec == "ai") return std::make_unique<AdaptiveIndexPolicy>(d);
  if (spec == "index") return std::make_unique<NonAdaptivePolicy>("index", index_matrix(d, n, k));
  if (spec == "take-top") return std::make_unique<NonAdaptivePolicy>("take-top", take_top_matrix(d, n));
  if (spec.starts_with("matrix:")) {
    const std::string path(spec.substr(7));
    auto matrix = read_matrix_csv(path);
    if (matrix.levels() != d.size() || matrix.horizon() < n) {
      throw Error(Errc::DimensionMismatch, "matrix file " + path + " does not cover m=" +
                                               std::to_string(d.size()) + ", n=" + std::to_string(n));
    }
    return std::make_unique<NonAdaptivePolicy>(std::string(spec), std::move(matrix));
  }
  throw Error(Errc::BadArgument, "unknown policy '" + std::string(spec) + "'");
}

}  // namespace multisec

namespace multisec {

Decision br_decide(const ThresholdSet& thresholds, const PolicyContext& ctx) {
  check_context(ctx.t_next, ctx.n, ctx.residual_budget);
  if (ctx.residual_budget == 0) return {false};
  const int j = thresholds.bucket(budget_ratio(ctx.t_next, ctx.n, ctx.residual_budget));
  return {ctx.ability_index <= j};
}

Decision ai_decide(const AbilityDistribution& d, const PolicyContext& ctx) {
  return AdaptiveIndexPolicy(d).decide(ctx);
}

Decision nonadaptive_decide(const NonAdaptiveMatrix& matrix, const PolicyContext& ctx) {
  check_context(ctx.t_next, ctx.n, ctx.residual_budget);
  if (ctx.ability_index < 1 || ctx.ability_index > matrix.levels() || ctx.t_next > matrix.horizon()) {
    throw Error(Errc::DimensionMismatch, "context outside the matrix");
  }
  if (ctx.residual_budget == 0) return {false};
  return {ctx.u < matrix(ctx.ability_index, ctx.t_next)};
}

}  // namespace multisec
