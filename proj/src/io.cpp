#include "multisec/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "multisec/error.hpp"

namespace multisec {

AbilityDistribution distribution_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("support") || !doc.contains("pmf")) {
    throw Error(Errc::ParseError, "expected an object with \"support\" and \"pmf\" arrays");
  }
  try {
    return AbilityDistribution(doc.at("support").get<std::vector<double>>(),
                               doc.at("pmf").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

AbilityDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return distribution_from_json(buf.str());
}

std::string distribution_to_json(const AbilityDistribution& d) {
  nlohmann::json doc;
  doc["support"] = std::vector<double>(d.support().begin(), d.support().end());
  doc["pmf"] = std::vector<double>(d.pmf().begin(), d.pmf().end());
  return doc.dump();
}

NonAdaptiveMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  int rows = 0;
  long cols = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    long count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, path + ": bad number '" + cell + "'");
      }
      ++count;
    }
    if (cols >= 0 && count != cols) throw Error(Errc::DimensionMismatch, path + ": ragged rows");
    cols = count;
    ++rows;
  }
  if (rows == 0) throw Error(Errc::ParseError, path + ": empty matrix");
  return NonAdaptiveMatrix(rows, cols, std::move(values));
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_regret_csv(std::ostream& out, const std::vector<RegretRecord>& records) {
  out << "policy,n,k,method,v_on,v_off,regret,ci_halfwidth,error_bound\n";
  for (const auto& r : records) {
    out << r.policy << ',' << r.n << ',' << r.k << ',' << to_string(r.method) << ',' << format_real(r.v_on)
        << ',' << format_real(r.v_off) << ',' << format_real(r.regret) << ',' << format_real(r.ci_halfwidth)
        << ',' << format_real(r.error_bound) << '\n';
  }
}

void write_path_csv(std::ostream& out, const EpisodeRecord& record) {
  out << "t,ability_index,decision,K_t,R_t\n";
  for (long t = 0; t <= record.n; ++t) {
    out << t << ',' << (t == 0 ? 0 : record.abilities[t - 1]) << ',' << (t == 0 ? 0 : int(record.decisions[t - 1]))
        << ',' << record.budget_path[t] << ',';
    if (t < record.n) out << format_real(record.ratio_path[t]);
    out << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRow>& rows) {
  out << "rep,tau0,j_tau0,tau,n_minus_tau\n";
  for (const auto& r : rows) {
    out << r.rep << ',' << r.diag.tau0 << ',' << r.diag.j_tau0 << ',' << r.diag.tau << ',' << (r.n - r.diag.tau)
        << '\n';
  }
}

}  // namespace multisec
