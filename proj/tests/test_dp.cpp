#include <doctest.h>

#include <cmath>

#include "multisec/dp.hpp"
#include "multisec/error.hpp"
#include "oracles.hpp"

using namespace multisec;

TEST_CASE("single-point distribution always selects") {
  const AbilityDistribution d({2.5}, {1.0});
  const auto table = solve(d, 9, 5);
  for (long l = 0; l <= 9; ++l) {
    for (long kappa = 0; kappa <= 5; ++kappa) {
      CHECK(table.value(l, kappa) == doctest::Approx(2.5 * std::min(l, kappa)).epsilon(1e-14));
    }
  }
}

TEST_CASE("boundary conditions and first row") {
  const auto d = oracle::uniform5();
  const auto table = solve(d, 20, 8);
  for (long kappa = 0; kappa <= 8; ++kappa) CHECK(table.value(0, kappa) == 0.0);
  for (long l = 0; l <= 20; ++l) CHECK(table.value(l, 0) == 0.0);
  for (long kappa = 1; kappa <= 8; ++kappa) CHECK(table.value(1, kappa) == doctest::Approx(d.mean()).epsilon(1e-15));
  CHECK(table.accept_threshold(2, 1) == doctest::Approx(d.mean()).epsilon(1e-15));
  for (long kappa = 1; kappa <= 8; ++kappa) CHECK(table.accept_threshold(1, kappa) == 0.0);
  CHECK_THROWS_AS(table.accept_threshold(0, 1), Error);
  CHECK_THROWS_AS(table.accept_threshold(3, 0), Error);
  CHECK_THROWS_AS(table.accept_threshold(21, 1), Error);
}

TEST_CASE("table monotonicity and bounds") {
  for (const auto& d : {oracle::uniform5(), oracle::kleinberg(0.05), oracle::uniform3()}) {
    const auto table = solve(d, 60, 40);
    const double a1 = d.ability(1);
    for (long l = 0; l <= 60; ++l) {
      for (long kappa = 0; kappa <= 40; ++kappa) {
        const double g = table.value(l, kappa);
        CHECK(g >= 0.0);
        CHECK(g <= a1 * std::min(l, kappa) + 1e-12);
        if (l > 0) CHECK(g >= table.value(l - 1, kappa) - 1e-12);
        if (kappa > 0) CHECK(g >= table.value(l, kappa - 1) - 1e-12);
        if (l >= 1 && kappa >= 1) {
          const double h = table.accept_threshold(l, kappa);
          CHECK(h >= -1e-12);
          CHECK(h <= a1 + 1e-12);
          if (kappa >= l) CHECK(h == 0.0);
        }
      }
    }
  }
}

TEST_CASE("marginal value monotone in budget (reported, not required)") {
  long violations = 0;
  for (const auto& d : {oracle::uniform5(), oracle::kleinberg(0.05), oracle::uniform3(),
                        AbilityDistribution({1.0, 0.8, 0.7, 0.5, 0.2}, {5. / 28, 6. / 28, 7. / 28, 5. / 28, 5. / 28})}) {
    const auto table = solve(d, 80, 80);
    for (long l = 2; l <= 80; ++l) {
      for (long kappa = 2; kappa <= 80; ++kappa) {
        if (table.accept_threshold(l, kappa) > table.accept_threshold(l, kappa - 1) + 1e-12) ++violations;
      }
    }
  }
  MESSAGE("h_l(kappa) increases in kappa at " << violations << " tested cells");
}

TEST_CASE("optimal value matches exhaustive expectimax") {
  const auto d = oracle::uniform3();
  CHECK(std::abs(solve(d, 4, 2).optimal_value() - oracle::optimal_online(d, 4, 2)) <= 1e-9);
}

TEST_CASE("value-only solve and compact cutoffs agree with the full table") {
  const auto d = oracle::uniform5();
  const auto table = solve(d, 150, 60);
  CHECK(optimal_online_value(d, 150, 60) == table.optimal_value());
  const DPCutoffs cut(d, 150, 60);
  CHECK(cut.optimal_value() == table.optimal_value());
  for (long l = 1; l <= 150; ++l) {
    for (long kappa = 1; kappa <= 60; ++kappa) {
      const double h = table.accept_threshold(l, kappa);
      int accepted = 0;
      for (int j = 1; j <= d.size(); ++j) accepted += d.ability(j) >= h - accept_slack(d) ? 1 : 0;
      CHECK(cut.accepted_levels(l, kappa) == accepted);
    }
  }
  CHECK_THROWS_AS(solve(d, 3, 4), Error);
}

TEST_CASE("state-space reduction: v_l(w, kappa) = w + g_l(kappa)") {
  const auto d = oracle::uniform3();
  CHECK(full_value_check(d, 3, 1, 0.0) == doctest::Approx(solve(d, 3, 1).optimal_value()).epsilon(1e-14));
  CHECK(full_value_check(d, 3, 1, 5.5) == doctest::Approx(5.5 + solve(d, 3, 1).optimal_value()).epsilon(1e-14));
  for (double w : {0.0, 1.0, 7.25}) CHECK(full_value_check(d, 6, 0, w) == w);
  CHECK_THROWS_AS(full_value_check(d, 13, 2, 0.0), Error);
}
