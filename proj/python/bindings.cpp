#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "multisec/distribution.hpp"
#include "multisec/dp.hpp"
#include "multisec/error.hpp"
#include "multisec/evaluator.hpp"
#include "multisec/io.hpp"
#include "multisec/offline.hpp"
#include "multisec/policies.hpp"
#include "multisec/simulator.hpp"
#include "multisec/version.hpp"

namespace py = pybind11;
using namespace multisec;

namespace {

std::vector<double> threshold_list(const AbilityDistribution& d) {
  const ThresholdSet t(d);
  return {t.values().begin(), t.values().end()};
}

EpisodeRecord episode(const AbilityDistribution& d, const Policy& policy, long n, long k, std::uint64_t seed,
                      std::uint64_t rep) {
  Stream stream(seed, rep);
  return run_episode(d, policy, n, k, stream);
}

}  // namespace

PYBIND11_MODULE(multisec, m) {
  m.doc() = "Online selection policies and exact regret evaluation for the multi-secretary problem";

  m.attr("__version__") = std::string(kVersion);
  py::register_exception<Error>(m, "MultisecError", PyExc_ValueError);

  py::class_<AbilityDistribution>(m, "AbilityDistribution")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("support"), py::arg("pmf"))
      .def_static("from_json", [](const std::string& text) { return distribution_from_json(text); })
      .def("to_json", [](const AbilityDistribution& d) { return distribution_to_json(d); })
      .def_property_readonly("m", &AbilityDistribution::size)
      .def_property_readonly("support", [](const AbilityDistribution& d) {
        return std::vector<double>(d.support().begin(), d.support().end());
      })
      .def_property_readonly("pmf", [](const AbilityDistribution& d) {
        return std::vector<double>(d.pmf().begin(), d.pmf().end());
      })
      .def("ability", &AbilityDistribution::ability, py::arg("j"))
      .def("mass", &AbilityDistribution::mass, py::arg("j"))
      .def("survival", &AbilityDistribution::survival, py::arg("j"))
      .def("mean", &AbilityDistribution::mean)
      .def("half_min_mass", &AbilityDistribution::half_min_mass)
      .def("sample", &AbilityDistribution::sample, py::arg("u"))
      .def("thresholds", &threshold_list);

  m.def("kleinberg_distribution", &kleinberg_distribution, py::arg("eps"));
  m.def("action_index_j0", &action_index_j0, py::arg("d"), py::arg("n"), py::arg("k"));

  m.def(
      "offline_sort",
      [](const AbilityDistribution& d, std::vector<long> z, long k) {
        const auto r = offline_sort(d, RealizationCounts::from(std::move(z)), k);
        return py::make_tuple(r.selected, r.payoff);
      },
      py::arg("d"), py::arg("counts"), py::arg("k"));

  py::class_<OfflineValue>(m, "OfflineValue")
      .def_readonly("value", &OfflineValue::value)
      .def_readonly("expected_selected", &OfflineValue::expected_selected)
      .def_readonly("error_bound", &OfflineValue::error_bound);
  m.def("offline_expected_value", &offline_expected_value, py::arg("d"), py::arg("n"), py::arg("k"),
        py::arg("tail_tol") = kDefaultTailTol);
  m.def(
      "dr_solution",
      [](const AbilityDistribution& d, long n, long k) {
        const auto r = dr_solution(d, n, k);
        return py::make_tuple(r.selected, r.value);
      },
      py::arg("d"), py::arg("n"), py::arg("k"));
  m.def("binomial_overshoot", &binomial_overshoot, py::arg("n"), py::arg("p"), py::arg("k"));
  m.def("binomial_undershoot", &binomial_undershoot, py::arg("n"), py::arg("p"), py::arg("k"));

  py::class_<DPTable>(m, "DPTable")
      .def_property_readonly("n", &DPTable::horizon)
      .def_property_readonly("k", &DPTable::budget)
      .def("value", &DPTable::value, py::arg("periods_to_go"), py::arg("kappa"))
      .def("accept_threshold", &DPTable::accept_threshold, py::arg("periods_to_go"), py::arg("kappa"))
      .def("optimal_value", &DPTable::optimal_value);
  m.def("solve", &solve, py::arg("d"), py::arg("n"), py::arg("k"));
  m.def("optimal_online_value", &optimal_online_value, py::arg("d"), py::arg("n"), py::arg("k"));
  m.def("full_value_check", &full_value_check, py::arg("d"), py::arg("n"), py::arg("k"), py::arg("w"));

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("name", &Policy::name)
      .def("selection_probability", &Policy::selection_probability, py::arg("t_next"), py::arg("n"),
           py::arg("residual_budget"), py::arg("ability_index"))
      .def(
          "decide",
          [](const Policy& p, long t_next, long n, long residual_budget, int ability_index, double u) {
            return p.decide({t_next, n, residual_budget, ability_index, u}).select;
          },
          py::arg("t_next"), py::arg("n"), py::arg("residual_budget"), py::arg("ability_index"),
          py::arg("u") = 0.0);
  m.def("make_policy", &make_policy, py::arg("name"), py::arg("d"), py::arg("n"), py::arg("k"));

  py::class_<RegretRecord>(m, "RegretRecord")
      .def_readonly("n", &RegretRecord::n)
      .def_readonly("k", &RegretRecord::k)
      .def_readonly("policy", &RegretRecord::policy)
      .def_property_readonly("method", [](const RegretRecord& r) { return to_string(r.method); })
      .def_readonly("v_on", &RegretRecord::v_on)
      .def_readonly("v_off", &RegretRecord::v_off)
      .def_readonly("regret", &RegretRecord::regret)
      .def_readonly("ci_halfwidth", &RegretRecord::ci_halfwidth)
      .def_readonly("error_bound", &RegretRecord::error_bound);

  m.def("exact_policy_value", &exact_policy_value, py::arg("d"), py::arg("policy"), py::arg("n"), py::arg("k"));
  m.def("exact_regret", &exact_regret, py::arg("d"), py::arg("policy"), py::arg("n"), py::arg("k"),
        py::arg("tail_tol") = kDefaultTailTol);
  m.def("mc_regret", &mc_regret, py::arg("d"), py::arg("policy"), py::arg("n"), py::arg("k"), py::arg("reps"),
        py::arg("seed"), py::arg("threads") = 1);
  m.def(
      "sweep",
      [](const AbilityDistribution& d, const std::vector<std::string>& policies,
         const std::vector<std::pair<long, long>>& grid, const std::string& method, long reps, std::uint64_t seed,
         int threads) {
        SweepOptions opt;
        opt.method = method == "mc" ? Method::MonteCarlo : Method::Exact;
        opt.reps = reps;
        opt.seed = seed;
        opt.threads = threads;
        auto result = sweep(d, policies, grid, opt);
        if (!result.failures.empty()) {
          const auto& f = result.failures.front();
          throw Error(Errc::BadArgument, "cell (" + f.policy + ", " + std::to_string(f.n) + ", " +
                                             std::to_string(f.k) + ") failed: " + f.message);
        }
        return result.records;
      },
      py::arg("d"), py::arg("policies"), py::arg("grid"), py::arg("method") = "exact", py::arg("reps") = 1000,
      py::arg("seed") = 0, py::arg("threads") = 1);

  py::class_<EpisodeRecord>(m, "EpisodeRecord")
      .def_readonly("n", &EpisodeRecord::n)
      .def_readonly("k", &EpisodeRecord::k)
      .def_readonly("policy", &EpisodeRecord::policy)
      .def_readonly("abilities", &EpisodeRecord::abilities)
      .def_readonly("decisions", &EpisodeRecord::decisions)
      .def_readonly("payoff", &EpisodeRecord::payoff)
      .def_readonly("budget_path", &EpisodeRecord::budget_path)
      .def_readonly("ratio_path", &EpisodeRecord::ratio_path);
  m.def("run_episode", &episode, py::arg("d"), py::arg("policy"), py::arg("n"), py::arg("k"), py::arg("seed"),
        py::arg("rep") = 0);

  py::class_<OrbitDiagnostics>(m, "OrbitDiagnostics")
      .def_readonly("delta", &OrbitDiagnostics::delta)
      .def_readonly("tau0", &OrbitDiagnostics::tau0)
      .def_readonly("j_tau0", &OrbitDiagnostics::j_tau0)
      .def_readonly("tau", &OrbitDiagnostics::tau)
      .def_readonly("y_path", &OrbitDiagnostics::y_path);
  m.def("orbit_diagnostics", &orbit_diagnostics, py::arg("d"), py::arg("record"), py::arg("delta"));
  m.def(
      "drift_at_state",
      [](const AbilityDistribution& d, long n, long t, long budget, int j_anchor) {
        return drift_at_state(d, ThresholdSet(d), n, t, budget, j_anchor);
      },
      py::arg("d"), py::arg("n"), py::arg("t"), py::arg("budget"), py::arg("j_anchor"));
  m.def("ai_ratio_increment", &ai_ratio_increment, py::arg("d"), py::arg("n"), py::arg("t"), py::arg("budget"));
}
