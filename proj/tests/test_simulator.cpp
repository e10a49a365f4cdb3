#include <doctest.h>

#include <cmath>
#include <map>

#include "multisec/error.hpp"
#include "multisec/offline.hpp"
#include "multisec/simulator.hpp"
#include "oracles.hpp"

using namespace multisec;

TEST_CASE("episode record invariants") {
  const auto d = oracle::uniform5();
  for (const char* name : {"br", "dp", "ai", "index", "take-top"}) {
    const auto p = make_policy(name, d, 200, 70);
    Stream s(5, 0);
    const auto rec = run_episode(d, *p, 200, 70, s);
    CHECK(rec.budget_path.front() == 70);
    CHECK(rec.abilities.size() == 200);
    CHECK(rec.ratio_path.size() == 200);
    double payoff = 0.0;
    long selected = 0;
    for (long t = 1; t <= 200; ++t) {
      CHECK(rec.budget_path[t] == rec.budget_path[t - 1] - rec.decisions[t - 1]);
      CHECK(rec.budget_path[t] >= 0);
      if (rec.decisions[t - 1]) payoff += d.ability(rec.abilities[t - 1]);
      selected += rec.decisions[t - 1];
      if (t < 200) CHECK(rec.ratio_path[t] == doctest::Approx(rec.budget_path[t] / double(200 - t)));
    }
    CHECK(rec.payoff == doctest::Approx(payoff));
    CHECK(selected <= 70);
  }
}

TEST_CASE("edge budgets") {
  const auto d = oracle::uniform5();
  const auto br = make_policy("br", d, 50, 0);
  Stream s(1, 0);
  const auto none = run_episode(d, *br, 50, 0, s);
  for (auto x : none.decisions) CHECK(x == 0);
  CHECK(none.payoff == 0.0);

  const auto dp = make_policy("dp", d, 50, 50);
  Stream s2(1, 0);
  const auto all = run_episode(d, *dp, 50, 50, s2);
  double total = 0.0;
  for (int j : all.abilities) total += d.ability(j);
  for (auto x : all.decisions) CHECK(x == 1);
  CHECK(all.payoff == doctest::Approx(total));
}

TEST_CASE("common random numbers align ability sequences across policies") {
  const auto d = oracle::uniform5();
  std::vector<int> reference;
  for (const char* name : {"br", "dp", "ai", "index"}) {
    for (long k : {300L, 340L}) {
      const auto p = make_policy(name, d, 1000, k);
      Stream s(77, 3);
      const auto rec = run_episode(d, *p, 1000, k, s);
      if (reference.empty()) reference = rec.abilities;
      CHECK(rec.abilities == reference);
    }
  }
  // Summary path consumes the same stream.
  const auto br = make_policy("br", d, 1000, 300);
  Stream a(77, 3);
  Stream b(77, 3);
  const auto rec = run_episode(d, *br, 1000, 300, a);
  const auto sum = simulate_summary(d, *br, 1000, 300, b);
  CHECK(sum.counts == rec.ability_counts(5));
  CHECK(sum.payoff == doctest::Approx(rec.payoff).epsilon(1e-12));
}

TEST_CASE("pathwise dominance of the offline sort") {
  const auto d = oracle::kleinberg(0.05);
  for (const char* name : {"br", "dp", "ai", "index", "take-top"}) {
    const auto p = make_policy(name, d, 120, 50);
    for (std::uint64_t rep = 0; rep < 500; ++rep) {
      Stream s(9, rep);
      const auto path = simulate_summary(d, *p, 120, 50, s);
      CHECK(path.selected <= 50);
      CHECK(offline_sort(d, RealizationCounts{path.counts, 120}, 50).payoff >= path.payoff - 1e-12);
    }
  }
}

TEST_CASE("orbit diagnostics") {
  const auto d = oracle::uniform5();
  const double delta = d.half_min_mass() / 2;
  const auto br = make_policy("br", d, 1000, 300);
  CHECK(orbit_cutoff(1000, delta) == 1000 - 40 - 1);
  CHECK(orbit_cutoff(10, delta) == 0);

  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Stream s(1, rep);
    const auto rec = run_episode(d, *br, 1000, 300, s);
    const auto diag = orbit_diagnostics(d, rec, delta);
    // k/n = 0.30 = T_2: inside the orbit immediately.
    CHECK(diag.tau0 == 0);
    CHECK(diag.j_tau0 == 2);
    CHECK(diag.tau0 <= diag.tau);
    CHECK(diag.tau <= 1000);
    CHECK(std::abs(diag.y_path[0]) <= delta / 2 * (1000 - diag.tau0) + 1e-9);
    CHECK(diag.y_path.size() == 1001);
  }

  SUBCASE("starting away from thresholds enters later") {
    const auto br2 = make_policy("br", d, 1000, 400);
    int later = 0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
      Stream s(2, rep);
      const auto diag = orbit_diagnostics(d, run_episode(d, *br2, 1000, 400, s), delta);
      CHECK(diag.j_tau0 >= 1);
      CHECK(diag.j_tau0 <= 6);
      if (diag.j_tau0 <= 5) CHECK(std::abs(diag.y_path[0]) <= delta / 2 * (1000 - diag.tau0) + 1e-9);
      later += diag.tau0 > 0 ? 1 : 0;
    }
    CHECK(later == 50);
  }
  SUBCASE("short horizon reports the sentinel") {
    const auto shortp = make_policy("br", d, 20, 6);
    Stream s(3, 0);
    const auto diag = orbit_diagnostics(d, run_episode(d, *shortp, 20, 6, s), delta);
    CHECK(diag.j_tau0 == 6);
    CHECK(diag.tau0 == 0);
    CHECK(diag.tau == diag.tau0);
    CHECK(diag.y_path.empty());
  }
  Stream s(1, 0);
  const auto rec = run_episode(d, *br, 1000, 300, s);
  CHECK_THROWS_AS(orbit_diagnostics(d, rec, 0.1), Error);
  CHECK_THROWS_AS(orbit_diagnostics(d, rec, 0.0), Error);
}

TEST_CASE("jump bound before the cutoff") {
  const auto d = oracle::uniform5();
  const double delta = d.half_min_mass() / 2;
  const auto br = make_policy("br", d, 600, 200);
  const long cutoff = orbit_cutoff(600, delta);
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Stream s(4, rep);
    const auto rec = run_episode(d, *br, 600, 200, s);
    for (long t = 0; t <= cutoff && t + 1 < 600; ++t) {
      CHECK(std::abs(rec.ratio_path[t + 1] - rec.ratio_path[t]) <= delta / 2 + 1e-15);
    }
  }
}

TEST_CASE("analytic drift") {
  const AbilityDistribution d({1.0, 0.8, 0.7, 0.5, 0.2}, {5. / 28, 6. / 28, 7. / 28, 5. / 28, 5. / 28});
  const ThresholdSet t(d);
  const long n = 2000;
  const long time = 1000;  // 1000 candidates remain
  for (int j = 2; j <= 5; ++j) {
    const long above = static_cast<long>(std::ceil(t[j] * 1000 + 1e-9));
    const long below = static_cast<long>(std::floor(t[j] * 1000 - 1e-9));
    CHECK(drift_at_state(d, t, n, time, above, j) == doctest::Approx(-d.mass(j) / 2).epsilon(1e-13));
    CHECK(drift_at_state(d, t, n, time, below, j) == doctest::Approx(d.mass(j) / 2).epsilon(1e-13));
    CHECK(drift_at_state(d, t, n, time, 0, j) == t[j]);
  }
}

TEST_CASE("empirical drift of Y matches the analytic drift") {
  const auto d = oracle::uniform5();
  const ThresholdSet t(d);
  const double delta = d.half_min_mass() / 2;
  const long n = 1000;
  const auto br = make_policy("br", d, n, 300);
  struct Bin {
    double analytic = 0.0;
    long count = 0;
    double sum = 0.0;
    double sumsq = 0.0;
  };
  std::map<std::pair<int, long>, Bin> bins;  // (anchor, budget > 0 ? bucket : 0)
  for (std::uint64_t rep = 0; rep < 2000; ++rep) {
    Stream s(8, rep);
    const auto rec = run_episode(d, *br, n, 300, s);
    const auto diag = orbit_diagnostics(d, rec, delta);
    if (diag.j_tau0 > d.size()) continue;
    for (long u = 0; diag.tau0 + u < diag.tau; ++u) {
      const long time = diag.tau0 + u;
      const long budget = rec.budget_path[time];
      const int b = budget > 0 ? t.bucket(static_cast<double>(budget) / (n - time)) : 0;
      auto& bin = bins[{diag.j_tau0, b}];
      bin.analytic = drift_at_state(d, t, n, time, budget, diag.j_tau0);
      const double inc = diag.y_path[u + 1] - diag.y_path[u];
      ++bin.count;
      bin.sum += inc;
      bin.sumsq += inc * inc;
    }
  }
  CHECK(!bins.empty());
  for (const auto& [key, bin] : bins) {
    if (bin.count < 100) continue;
    const double mean = bin.sum / bin.count;
    const double var = bin.sumsq / bin.count - mean * mean;
    const double se = std::sqrt(std::max(var, 0.0) / bin.count);
    CHECK(std::abs(mean - bin.analytic) <= 3 * se + 1e-12);
  }
}

TEST_CASE("adaptive-index ratio is a martingale") {
  const auto d = oracle::uniform5();
  SUBCASE("analytically") {
    for (long n : {10L, 101L, 1000L}) {
      for (long t = 0; t + 2 <= n; t += std::max(1L, n / 37)) {
        for (long budget = 0; budget <= n - t; ++budget) {
          CHECK(std::abs(ai_ratio_increment(d, n, t, budget)) <= 1e-12);
        }
      }
    }
  }
  SUBCASE("empirically") {
    const auto ai = make_policy("ai", d, 200, 90);
    double sum = 0.0;
    double sumsq = 0.0;
    long count = 0;
    for (std::uint64_t rep = 0; count < 100000; ++rep) {
      Stream s(6, rep);
      const auto rec = run_episode(d, *ai, 200, 90, s);
      for (long t = 0; t + 1 < 199 && rec.ratio_path[t] <= 1.0; ++t) {
        const double inc = rec.ratio_path[t + 1] - rec.ratio_path[t];
        sum += inc;
        sumsq += inc * inc;
        ++count;
      }
    }
    const double mean = sum / count;
    const double se = std::sqrt((sumsq / count - mean * mean) / count);
    CHECK(std::abs(mean) <= 3 * se);
  }
}

TEST_CASE("ratio mean curves") {
  const auto d = oracle::uniform5();
  const auto br = make_policy("br", d, 200, 60);
  const auto curve = ratio_mean_curve(d, *br, 200, 60, 1, 12);
  Stream s(12, 0);
  const auto rec = run_episode(d, *br, 200, 60, s);
  for (long t = 0; t < 200; ++t) {
    CHECK(curve.mean_ratio[t] == doctest::Approx(rec.ratio_path[t]));
    CHECK(curve.mean_budget[t] == doctest::Approx(rec.budget_path[t]));
  }
  const auto full = ratio_mean_curve(d, *make_policy("br", d, 200, 200), 200, 200, 20, 1);
  for (double r : full.mean_ratio) CHECK(r == 1.0);
  CHECK_THROWS_AS(ratio_mean_curve(d, *br, 200, 60, 0, 1), Error);

  SUBCASE("dp and br both hug T_2 = 0.30") {
    const double delta = d.half_min_mass() / 2;
    const auto dp = make_policy("dp", d, 1000, 300);
    const auto br3 = make_policy("br", d, 1000, 300);
    const auto a = ratio_mean_curve(d, *dp, 1000, 300, 2000, 99);
    const auto b = ratio_mean_curve(d, *br3, 1000, 300, 2000, 99);
    double gap = 0.0;
    for (long t = 0; t <= orbit_cutoff(1000, delta); ++t) gap = std::max(gap, std::abs(a.mean_ratio[t] - b.mean_ratio[t]));
    CHECK(gap < delta);
  }
}
