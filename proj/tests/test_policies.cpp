#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "multisec/dp.hpp"
#include "multisec/error.hpp"
#include "multisec/policies.hpp"
#include "oracles.hpp"

using namespace multisec;

namespace {

PolicyContext ctx(long t_next, long n, long budget, int j, double u = 0.0) { return {t_next, n, budget, j, u}; }

}  // namespace

TEST_CASE("budget-ratio decisions") {
  const auto d = oracle::uniform5();
  const ThresholdSet t(d);
  // K / (n - t) = 30 / 100 = 0.30 = T_2: bucket 2 accepts a_1, a_2 only.
  CHECK_FALSE(br_decide(t, ctx(901, 1000, 30, 3)).select);
  CHECK(br_decide(t, ctx(901, 1000, 30, 2)).select);
  CHECK(br_decide(t, ctx(901, 1000, 30, 1)).select);
  for (int j = 1; j <= 5; ++j) CHECK_FALSE(br_decide(t, ctx(10, 1000, 0, j)).select);
  // K = n - t: everything goes.
  for (int j = 1; j <= 5; ++j) CHECK(br_decide(t, ctx(991, 1000, 10, j)).select);

  const BudgetRatioPolicy br(d);
  CHECK(br.bucket(901, 1000, 30) == 2);
  for (int j = 1; j <= 5; ++j) {
    CHECK(br.decide(ctx(901, 1000, 30, j, 0.999)).select == br_decide(t, ctx(901, 1000, 30, j)).select);
  }
}

TEST_CASE("BR selection probability given state is Fbar(a_{j+1})") {
  const AbilityDistribution d({1.0, 0.8, 0.7, 0.5, 0.2}, {5. / 28, 6. / 28, 7. / 28, 5. / 28, 5. / 28});
  const BudgetRatioPolicy br(d);
  for (long budget = 1; budget <= 100; ++budget) {
    double q = 0.0;
    for (int j = 1; j <= 5; ++j) q += d.mass(j) * br.selection_probability(1, 100, budget, j);
    const int b = br.bucket(1, 100, budget);
    CHECK(q == doctest::Approx(d.survival(b + 1)).epsilon(1e-14));
  }
}

TEST_CASE("dp decisions") {
  const auto d = oracle::uniform5();
  const auto table = solve(d, 10, 4);
  // l = 2, kappa = 1: accept iff a_j >= E[X] = 1.10.
  for (int j = 1; j <= 5; ++j) {
    CHECK(dp_decide(d, table, ctx(9, 10, 1, j)).select == (d.ability(j) >= 1.10 - 1e-12));
  }
  for (int j = 1; j <= 5; ++j) CHECK_FALSE(dp_decide(d, table, ctx(3, 10, 0, j)).select);
  for (int j = 1; j <= 5; ++j) CHECK(dp_decide(d, table, ctx(10, 10, 1, j)).select);
  CHECK_THROWS_AS(dp_decide(d, table, ctx(1, 11, 1, 1)), Error);

  const DynamicProgrammingPolicy dp(d, 10, 4);
  for (long t = 1; t <= 10; ++t) {
    for (long budget = 0; budget <= 4; ++budget) {
      for (int j = 1; j <= 5; ++j) {
        CHECK(dp.decide(ctx(t, 10, budget, j, 0.5)).select == dp_decide(d, table, ctx(t, 10, budget, j)).select);
      }
    }
  }
  CHECK_THROWS_AS(dp.decide(ctx(1, 12, 1, 1)), Error);
}

TEST_CASE("DP and BR disagree near the horizon's end") {
  // Two periods to go, one unit of budget: DP takes values >= E[X], BR takes
  // everything above the median-type threshold. Skewed support makes these differ.
  const auto d = oracle::uniform({10.0, 1.0, 0.9});
  const auto table = solve(d, 2, 1);
  const ThresholdSet t(d);
  bool disagree = false;
  for (int j = 1; j <= 3; ++j) {
    disagree = disagree || dp_decide(d, table, ctx(1, 2, 1, j)).select != br_decide(t, ctx(1, 2, 1, j)).select;
  }
  CHECK(disagree);
}

TEST_CASE("adaptive-index decisions") {
  const auto d = oracle::uniform3();
  // r = 1/2 with F(a_2) = 1/3, f_2 = 1/3 gives p = 0.5 for level 2.
  const AdaptiveIndexPolicy ai(d);
  CHECK(ai.selection_probability(1, 10, 5, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ai.selection_probability(1, 10, 5, 1) == 1.0);
  CHECK(ai.selection_probability(1, 10, 5, 3) == 0.0);
  CHECK(ai_decide(d, ctx(1, 10, 5, 2, 0.49)).select);
  CHECK_FALSE(ai_decide(d, ctx(1, 10, 5, 2, 0.51)).select);
  for (int j = 1; j <= 3; ++j) {
    CHECK(ai_decide(d, ctx(5, 10, 6, j, 0.9999)).select);  // r >= 1
    CHECK_FALSE(ai_decide(d, ctx(5, 10, 0, j, 0.0)).select);
  }
}

TEST_CASE("index matrix") {
  const auto d = oracle::uniform3();
  auto mat = index_matrix(d, 10, 5);
  for (long t = 1; t <= 10; ++t) {
    CHECK(mat(1, t) == 1.0);
    CHECK(mat(2, t) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mat(3, t) == 0.0);
  }
  mat = index_matrix(d, 10, 0);
  for (int j = 1; j <= 3; ++j) CHECK(mat(j, 4) == 0.0);
  mat = index_matrix(oracle::uniform5(), 10, 10);
  for (int j = 1; j <= 5; ++j) CHECK(mat(j, 7) == 1.0);
  CHECK_THROWS_AS(index_matrix(d, 10, 11), Error);
}

TEST_CASE("non-adaptive decisions") {
  const auto d = oracle::uniform5();
  const NonAdaptiveMatrix ones(5, 6, std::vector<double>(30, 1.0));
  const NonAdaptiveMatrix zeros(5, 6, std::vector<double>(30, 0.0));
  const auto top = take_top_matrix(d, 6);
  for (int j = 1; j <= 5; ++j) {
    CHECK(nonadaptive_decide(ones, ctx(2, 6, 1, j, 0.99)).select);
    CHECK_FALSE(nonadaptive_decide(ones, ctx(2, 6, 0, j, 0.0)).select);
    CHECK_FALSE(nonadaptive_decide(zeros, ctx(2, 6, 3, j, 0.0)).select);
    CHECK(nonadaptive_decide(top, ctx(2, 6, 3, j, 0.5)).select == (j == 1));
  }
  CHECK_THROWS_AS(nonadaptive_decide(ones, ctx(7, 8, 1, 1)), Error);
  CHECK_THROWS_AS(NonAdaptiveMatrix(2, 3, std::vector<double>(5, 0.0)), Error);
}

TEST_CASE("decide is u < selection probability for every policy") {
  const auto d = oracle::uniform5();
  const long n = 30;
  const long k = 12;
  std::vector<std::unique_ptr<Policy>> policies;
  for (const char* name : {"br", "dp", "ai", "index", "take-top"}) policies.push_back(make_policy(name, d, n, k));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& p : policies) {
    for (int trial = 0; trial < 2000; ++trial) {
      const long t = 1 + static_cast<long>(unif(rng) * n);
      const long budget = static_cast<long>(unif(rng) * (k + 1));
      const int j = 1 + static_cast<int>(unif(rng) * 5);
      const double u = unif(rng);
      const double prob = budget > 0 ? p->selection_probability(t, n, budget, j) : 0.0;
      CHECK(prob >= 0.0);
      CHECK(prob <= 1.0);
      CHECK(p->decide(ctx(t, n, budget, j, u)).select == (budget > 0 && u < prob));
    }
  }
}

TEST_CASE("policy factory") {
  const auto d = oracle::uniform3();
  CHECK(make_policy("br", d, 10, 3)->name() == "br");
  CHECK(make_policy("take-top", d, 10, 3)->name() == "take-top");
  CHECK_THROWS_AS(make_policy("nope", d, 10, 3), Error);

  const std::string path = "multisec_test_matrix.csv";
  {
    std::ofstream out(path);
    out << "1,1,1,1\n0.5,0.5,0.25,0\n0,0,0,0\n";
  }
  const auto p = make_policy("matrix:" + path, d, 4, 2);
  CHECK(p->selection_probability(3, 4, 1, 2) == 0.25);
  CHECK_THROWS_AS(make_policy("matrix:" + path, d, 5, 2), Error);
  CHECK_THROWS_AS(make_policy("matrix:" + path, oracle::uniform5(), 4, 2), Error);
  std::remove(path.c_str());
}
