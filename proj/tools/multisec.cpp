// multisec: regret sweeps, sample paths and orbit diagnostics as CSV.
//
// Exit codes: 0 all cells evaluated, 1 some cells failed (listed on stderr),
// 2 usage, parse or domain error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "multisec/distribution.hpp"
#include "multisec/error.hpp"
#include "multisec/evaluator.hpp"
#include "multisec/io.hpp"
#include "multisec/policies.hpp"
#include "multisec/rng.hpp"
#include "multisec/simulator.hpp"
#include "multisec/version.hpp"

using namespace multisec;
using nlohmann::json;

namespace {

constexpr std::string_view kRounding = "k = floor(ratio * n + 1/2), half-up";

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw Error(Errc::BadArgument, "bad " + what + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw Error(Errc::BadArgument, "bad " + what + ": '" + s + "'");
  return v;
}

// Shared state of one invocation.
struct Run {
  std::string command_line;
  std::string dist_path;
  std::string out;
  std::string policies;
  std::uint64_t seed = 0;
  int threads = 1;
  bool mc = false;
  long reps = 1000;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  std::vector<std::string> policy_list() const {
    auto list = split(policies, ',');
    if (list.empty()) throw Error(Errc::BadArgument, "--policies is empty");
    return list;
  }

  AbilityDistribution distribution(std::string& sha) const {
    const std::string bytes = read_file(dist_path);
    sha = sha256_hex(bytes);
    return distribution_from_json(bytes);
  }

  // Writes `body` to `path` (stdout when empty) and a manifest next to it.
  void emit(const std::string& path, const std::string& body, const std::string& sub, const std::string& dist_sha,
            json grid) const {
    if (path.empty()) {
      std::cout << body;
      return;
    }
    {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw Error(Errc::BadArgument, "cannot write " + path);
      f << body;
    }
    json manifest;
    manifest["command"] = command_line;
    manifest["subcommand"] = sub;
    manifest["dist_sha"] = dist_sha;
    manifest["seed"] = seed;
    manifest["grid"] = std::move(grid);
    manifest["version"] = std::string(kVersion);
    manifest["rng"] = std::string(kRngFamily);
    manifest["k_rounding"] = std::string(kRounding);
    manifest["method"] = mc ? "mc" : "exact";
    if (mc) manifest["reps"] = reps;
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream m(path + ".manifest.json", std::ios::binary);
    m << manifest.dump(2) << '\n';
  }

  SweepOptions sweep_options() const {
    SweepOptions opt;
    opt.method = mc ? Method::MonteCarlo : Method::Exact;
    opt.reps = reps;
    opt.seed = seed;
    opt.threads = threads;
    if (mc && reps < 1) throw Error(Errc::BadArgument, "--reps must be >= 1");
    if (threads < 1) throw Error(Errc::BadArgument, "--threads must be >= 1");
    return opt;
  }
};

int report(const SweepResult& result) {
  for (const auto& f : result.failures) {
    std::cerr << "failed cell policy=" << f.policy << " n=" << f.n << " k=" << f.k << ": " << f.message << '\n';
  }
  return result.failures.empty() ? 0 : 1;
}

std::string regret_csv(const std::vector<RegretRecord>& records) {
  std::ostringstream os;
  write_regret_csv(os, records);
  return os.str();
}

// A:B:STEP or a single K.
std::vector<long> parse_k_range(const std::string& spec, long n) {
  const auto parts = split(spec, ':');
  std::vector<long> ks;
  if (parts.size() == 1) {
    ks.push_back(parse_long(parts[0], "k"));
  } else if (parts.size() == 3) {
    const long a = parse_long(parts[0], "k-range start");
    const long b = parse_long(parts[1], "k-range end");
    const long step = parse_long(parts[2], "k-range step");
    if (step < 1 || b < a) throw Error(Errc::BadArgument, "k-range needs A <= B and STEP >= 1");
    for (long k = a; k <= b; k += step) ks.push_back(k);
  } else {
    throw Error(Errc::BadArgument, "k-range must be A:B:STEP");
  }
  for (long k : ks) {
    if (k < 0 || k > n) throw Error(Errc::InfeasiblePair, "k = " + std::to_string(k) + " outside [0, n]");
  }
  return ks;
}

// A number in [0, 1] or survival:<j>.
double parse_ratio(const std::string& spec, const AbilityDistribution& d) {
  double r = 0.0;
  if (spec.rfind("survival:", 0) == 0) {
    const long j = parse_long(spec.substr(9), "survival index");
    if (j < 1 || j > d.size() + 1) throw Error(Errc::IndexOutOfRange, "survival index outside [1, m+1]");
    r = d.survival(static_cast<int>(j));
  } else {
    r = parse_double(spec, "ratio");
  }
  if (!(r >= 0.0 && r <= 1.0)) throw Error(Errc::BadArgument, "ratio must lie in [0, 1]");
  return r;
}

long round_half_up(double ratio, long n) {
  // The small guard keeps products such as 0.7 * 5 = 3.4999999999999996 on the
  // intended side of the half.
  return std::min(n, static_cast<long>(std::floor(ratio * static_cast<double>(n) + 0.5 + 1e-9)));
}

void check_pair(long n, long k) {
  if (n < 1) throw Error(Errc::InfeasiblePair, "n must be >= 1");
  if (k < 0 || k > n) throw Error(Errc::InfeasiblePair, "k must lie in [0, n]");
}

std::string with_suffix(const std::string& out, const std::string& suffix) {
  if (out.empty()) return out;
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + suffix + out.substr(dot);
  }
  return out + suffix;
}

int cmd_validate(const Run& run, bool as_json, long n) {
  std::string sha;
  const auto d = run.distribution(sha);
  const ThresholdSet t(d);
  const int m = d.size();
  json doc;
  doc["dist_sha"] = sha;
  doc["m"] = m;
  doc["support"] = d.support();
  doc["pmf"] = d.pmf();
  std::vector<double> survival;
  for (int j = 1; j <= m + 1; ++j) survival.push_back(d.survival(j));
  doc["survival"] = survival;
  std::vector<json> thr;
  for (int j = 1; j <= m + 1; ++j) {
    if (std::isinf(t[j])) {
      thr.emplace_back("inf");
    } else {
      thr.emplace_back(t[j]);
    }
  }
  doc["thresholds"] = thr;
  doc["epsilon"] = d.half_min_mass();
  doc["mean"] = d.mean();
  std::vector<json> j0;
  const long step = std::max(1L, n / 20);
  for (long k = 0; k <= n; k += step) j0.push_back({{"k", k}, {"j0", action_index_j0(d, n, k)}});
  doc["j0"] = {{"n", n}, {"table", j0}};
  if (as_json) {
    std::cout << doc.dump(2) << '\n';
    return 0;
  }
  std::cout << "m = " << m << "\n";
  std::cout << "epsilon = " << format_real(d.half_min_mass()) << ", mean = " << format_real(d.mean()) << "\n";
  std::cout << " j  ability  mass  survival  threshold\n";
  for (int j = 1; j <= m + 1; ++j) {
    std::cout << ' ' << j << "  " << (j <= m ? format_real(d.ability(j)) : "-") << "  "
              << (j <= m ? format_real(d.mass(j)) : "-") << "  " << format_real(d.survival(j)) << "  "
              << (std::isinf(t[j]) ? "inf" : format_real(t[j])) << '\n';
  }
  std::cout << "j0 at n = " << n << ":\n";
  for (const auto& row : j0) std::cout << "  k = " << row["k"] << "  j0 = " << row["j0"] << '\n';
  return 0;
}

int cmd_sweep_k(const Run& run, long n, const std::string& k_spec) {
  std::string sha;
  const auto d = run.distribution(sha);
  check_pair(n, 0);
  const auto ks = parse_k_range(k_spec, n);
  const auto opt = run.sweep_options();
  std::vector<std::pair<long, long>> grid;
  for (long k : ks) grid.emplace_back(n, k);
  const auto result = sweep(d, run.policy_list(), grid, opt);
  run.emit(run.out, regret_csv(result.records), "sweep-k", sha,
           {{"n", n}, {"k", ks}, {"policies", run.policy_list()}});
  return report(result);
}

int cmd_sweep_n(const Run& run, const std::string& n_spec, const std::string& ratio_spec) {
  std::string sha;
  const auto d = run.distribution(sha);
  const double ratio = parse_ratio(ratio_spec, d);
  std::vector<long> ns;
  std::vector<std::pair<long, long>> grid;
  for (const auto& s : split(n_spec, ',')) {
    const long n = parse_long(s, "n");
    check_pair(n, 0);
    ns.push_back(n);
    grid.emplace_back(n, round_half_up(ratio, n));
  }
  if (ns.empty()) throw Error(Errc::BadArgument, "--n is empty");
  const auto result = sweep(d, run.policy_list(), grid, run.sweep_options());
  json cells = json::array();
  for (const auto& [n, k] : grid) cells.push_back({n, k});
  run.emit(run.out, regret_csv(result.records), "sweep-n", sha,
           {{"n", ns}, {"ratio", ratio}, {"ratio_spec", ratio_spec}, {"cells", cells}, {"policies", run.policy_list()}});
  return report(result);
}

int cmd_kleinberg(const Run& run, const std::string& eps_spec) {
  std::vector<double> epsilons;
  for (const auto& s : split(eps_spec, ',')) epsilons.push_back(parse_double(s, "epsilon"));
  if (epsilons.empty()) throw Error(Errc::BadArgument, "--epsilons is empty");
  std::vector<AbilityDistribution> dists;
  for (double eps : epsilons) dists.push_back(kleinberg_distribution(eps));  // validate all before any work
  const auto opt = run.sweep_options();
  std::vector<RegretRecord> records;
  std::vector<double> record_eps;
  SweepResult all;
  json cells = json::array();
  std::string ids;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const long n = static_cast<long>(std::ceil(1.0 / (epsilons[i] * epsilons[i]) - 1e-9));
    const long k = (n + 1) / 2;
    cells.push_back({{"epsilon", epsilons[i]}, {"n", n}, {"k", k}});
    ids += distribution_to_json(dists[i]);
    const auto result = sweep(dists[i], run.policy_list(), {{n, k}}, opt);
    for (const auto& r : result.records) {
      records.push_back(r);
      record_eps.push_back(epsilons[i]);
    }
    all.failures.insert(all.failures.end(), result.failures.begin(), result.failures.end());
  }
  // Regret schema with a leading epsilon column.
  std::istringstream lines(regret_csv(records));
  std::ostringstream os;
  std::string line;
  for (long row = -1; std::getline(lines, line); ++row) {
    os << (row < 0 ? std::string("epsilon") : format_real(record_eps[row])) << ',' << line << '\n';
  }
  run.emit(run.out, os.str(), "kleinberg", sha256_hex(ids), {{"cells", cells}, {"policies", run.policy_list()}});
  return report(all);
}

int cmd_paths(const Run& run, long n, long k, const std::string& seeds_spec) {
  std::string sha;
  const auto d = run.distribution(sha);
  check_pair(n, k);
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split(seeds_spec, ',')) {
    const long v = parse_long(s, "seed");
    if (v < 0) throw Error(Errc::BadArgument, "seeds must be >= 0");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  if (seeds.empty()) throw Error(Errc::BadArgument, "--seeds is empty");
  const bool single = seeds.size() == 1 && run.policy_list().size() == 1;
  if (!single && run.out.empty()) throw Error(Errc::BadArgument, "several paths need --out as a file-name stem");
  for (const auto& name : run.policy_list()) {
    const auto policy = make_policy(name, d, n, k);
    for (auto seed : seeds) {
      Stream stream(seed, 0);
      const auto record = run_episode(d, *policy, n, k, stream);
      std::ostringstream os;
      write_path_csv(os, record);
      const std::string path =
          single ? run.out : with_suffix(run.out, "_" + name + "_seed" + std::to_string(seed));
      Run tagged = run;
      tagged.seed = seed;
      tagged.emit(path, os.str(), "paths", sha, {{"n", n}, {"k", k}, {"policy", name}, {"rep", 0}});
    }
  }
  return 0;
}

int cmd_ratio_mean(const Run& run, long n, long k) {
  std::string sha;
  const auto d = run.distribution(sha);
  check_pair(n, k);
  if (run.reps < 1) throw Error(Errc::BadArgument, "--reps must be >= 1");
  std::ostringstream os;
  os << "policy,t,mean_ratio,mean_budget\n";
  for (const auto& name : run.policy_list()) {
    const auto policy = make_policy(name, d, n, k);
    const auto curve = ratio_mean_curve(d, *policy, n, k, run.reps, run.seed);
    for (long t = 0; t < n; ++t) {
      os << name << ',' << t << ',' << format_real(curve.mean_ratio[t]) << ',' << format_real(curve.mean_budget[t])
         << '\n';
    }
  }
  run.emit(run.out, os.str(), "ratio-mean", sha,
           {{"n", n}, {"k", k}, {"reps", run.reps}, {"policies", run.policy_list()}});
  return 0;
}

int cmd_diagnostics(const Run& run, long n, long k, double delta) {
  std::string sha;
  const auto d = run.distribution(sha);
  check_pair(n, k);
  if (run.reps < 1) throw Error(Errc::BadArgument, "--reps must be >= 1");
  if (std::isnan(delta)) delta = d.half_min_mass() / 2;
  if (!(delta > 0.0 && delta < d.half_min_mass())) throw Error(Errc::BadDelta, "delta must lie in (0, eps)");
  const auto br = make_policy("br", d, n, k);
  std::vector<DiagnosticsRow> rows;
  rows.reserve(run.reps);
  for (long rep = 0; rep < run.reps; ++rep) {
    Stream stream(run.seed, static_cast<std::uint64_t>(rep));
    rows.push_back({rep, orbit_diagnostics(d, run_episode(d, *br, n, k, stream), delta), n});
  }
  std::ostringstream os;
  write_diagnostics_csv(os, rows);
  run.emit(run.out, os.str(), "diagnostics", sha, {{"n", n}, {"k", k}, {"delta", delta}, {"reps", run.reps}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-secretary regret experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Run run;
  for (int i = 0; i < argc; ++i) run.command_line += (i ? " " : "") + std::string(argv[i]);

  long n = 0;
  long k = -1;
  std::string k_range;
  std::string n_list;
  std::string ratio;
  std::string epsilons;
  std::string seeds;
  double delta = std::nan("");
  bool as_json = false;

  auto add_dist = [&](CLI::App* sub) { sub->add_option("--dist", run.dist_path, "Distribution JSON file")->required(); };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", run.out, "Output CSV (stdout when omitted; manifest written next to files)");
  };
  auto add_policies = [&](CLI::App* sub) {
    sub->add_option("--policies", run.policies,
                    "Comma-separated: br,dp,ai,index,take-top,matrix:<csv> (default br,dp,ai,index; kleinberg dp,br)");
  };
  auto add_estimator = [&](CLI::App* sub) {
    sub->add_flag("--mc", run.mc, "Monte Carlo estimator instead of exact evaluation");
    sub->add_option("--reps", run.reps, "Monte Carlo replications")->capture_default_str();
    sub->add_option("--seed", run.seed, "Base seed")->capture_default_str();
    sub->add_option("--threads", run.threads, "Worker threads")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Print thresholds, epsilon, survivals and the j0 table");
  add_dist(validate);
  validate->add_flag("--json", as_json, "Machine-readable output");
  long validate_n = 100;
  validate->add_option("--n", validate_n, "Horizon for the j0 table")->capture_default_str();

  auto* sweep_k = app.add_subcommand("sweep-k", "Regret over a range of budgets at fixed n");
  add_dist(sweep_k);
  sweep_k->add_option("--n", n, "Horizon")->required();
  auto* k_opt = sweep_k->add_option("--k", k_range, "Single budget K");
  sweep_k->add_option("--k-range", k_range, "A:B:STEP")->excludes(k_opt);
  add_policies(sweep_k);
  add_estimator(sweep_k);
  add_out(sweep_k);

  auto* sweep_n = app.add_subcommand("sweep-n", "Regret over horizons at a fixed budget ratio");
  add_dist(sweep_n);
  sweep_n->add_option("--n", n_list, "Comma-separated horizons")->required();
  sweep_n->add_option("--ratio", ratio, "k/n as a number or survival:<j>")->required();
  add_policies(sweep_n);
  add_estimator(sweep_n);
  add_out(sweep_n);

  auto* kleinberg = app.add_subcommand("kleinberg", "Regret at n = ceil(1/eps^2), k = ceil(n/2) on {3, 2, 1}");
  kleinberg->add_option("--epsilons", epsilons, "Comma-separated eps values in (0, 1/8)")->required();
  add_policies(kleinberg);
  add_estimator(kleinberg);
  add_out(kleinberg);

  auto* paths = app.add_subcommand("paths", "Sample paths with common random numbers across policies");
  add_dist(paths);
  paths->add_option("--n", n, "Horizon")->required();
  paths->add_option("--k", k, "Budget")->required();
  paths->add_option("--seeds", seeds, "Comma-separated seeds")->required();
  add_policies(paths);
  add_out(paths);

  auto* ratio_mean = app.add_subcommand("ratio-mean", "Average ratio and budget paths");
  add_dist(ratio_mean);
  ratio_mean->add_option("--n", n, "Horizon")->required();
  ratio_mean->add_option("--k", k, "Budget")->required();
  ratio_mean->add_option("--reps", run.reps, "Replications")->capture_default_str();
  ratio_mean->add_option("--seed", run.seed, "Base seed")->capture_default_str();
  add_policies(ratio_mean);
  add_out(ratio_mean);

  auto* diagnostics = app.add_subcommand("diagnostics", "Orbit entry and exit times of the budget-ratio policy");
  add_dist(diagnostics);
  diagnostics->add_option("--n", n, "Horizon")->required();
  diagnostics->add_option("--k", k, "Budget")->required();
  diagnostics->add_option("--delta", delta, "Orbit half-width in (0, eps); default eps/2");
  diagnostics->add_option("--reps", run.reps, "Replications")->capture_default_str();
  diagnostics->add_option("--seed", run.seed, "Base seed")->capture_default_str();
  add_out(diagnostics);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run.policies.empty()) run.policies = kleinberg->parsed() ? "dp,br" : "br,dp,ai,index";

  try {
    if (validate->parsed()) return cmd_validate(run, as_json, validate_n);
    if (sweep_k->parsed()) {
      if (k_range.empty()) throw Error(Errc::BadArgument, "one of --k or --k-range is required");
      return cmd_sweep_k(run, n, k_range);
    }
    if (sweep_n->parsed()) return cmd_sweep_n(run, n_list, ratio);
    if (kleinberg->parsed()) return cmd_kleinberg(run, epsilons);
    if (paths->parsed()) return cmd_paths(run, n, k, seeds);
    if (ratio_mean->parsed()) return cmd_ratio_mean(run, n, k);
    if (diagnostics->parsed()) return cmd_diagnostics(run, n, k, delta);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
