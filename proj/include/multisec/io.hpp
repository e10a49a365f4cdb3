#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "multisec/distribution.hpp"
#include "multisec/evaluator.hpp"
#include "multisec/policies.hpp"
#include "multisec/simulator.hpp"

namespace multisec {

// {"support": [a_1, ..., a_m], "pmf": [f_1, ..., f_m]}, support descending.
AbilityDistribution distribution_from_json(std::string_view text);
AbilityDistribution load_distribution(const std::string& path);
std::string distribution_to_json(const AbilityDistribution& d);

// m rows by n columns of probabilities, comma separated.
NonAdaptiveMatrix read_matrix_csv(const std::string& path);

// %.12g
std::string format_real(double x);

void write_regret_csv(std::ostream& out, const std::vector<RegretRecord>& records);

// t,ability_index,decision,K_t,R_t. Row t = 0 carries the initial state
// (ability_index and decision 0); R_n is left empty.
void write_path_csv(std::ostream& out, const EpisodeRecord& record);

struct DiagnosticsRow {
  long rep = 0;
  OrbitDiagnostics diag;
  long n = 0;
};

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRow>& rows);

}  // namespace multisec
