#include "fdsec/analytic_sop.hpp"
#include "fdsec/optimizer.hpp"
#include "fdsec/scenario.hpp"
#include "fdsec/self_check.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct Inputs {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::string output;
  int workers = -1;
};

fdsec::Scenario resolve(const Inputs& in) {
  json doc = json::object();
  if (!in.scenario_path.empty()) {
    std::ifstream file(in.scenario_path);
    if (!file) throw fdsec::ScenarioError("cannot open scenario file '" + in.scenario_path + "'");
    try {
      doc = json::parse(file);
    } catch (const json::parse_error& e) {
      throw fdsec::ScenarioError("cannot parse '" + in.scenario_path + "': " + e.what());
    }
    if (doc.is_object() && doc.contains("scenario") && doc.contains("subcommand")) doc = doc.at("scenario");
  }
  for (const auto& o : in.overrides) fdsec::apply_override(doc, o);
  fdsec::Scenario sc = fdsec::parse_scenario(doc);

  if (const char* env = std::getenv(fdsec::kSeedEnvVar); env && *env) {
    try {
      std::size_t used = 0;
      sc.run.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw fdsec::ScenarioError(std::string(fdsec::kSeedEnvVar) + " must be an unsigned integer, got '" + env + "'");
    }
  }
  if (!in.output.empty()) sc.run.output = in.output;
  if (in.workers >= 0) sc.run.workers = in.workers;
  return sc;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_sidecar(const std::string& stem, const std::string& subcommand, const fdsec::Scenario& sc,
                   const json& summary) {
  const json side = {{"subcommand", subcommand},
                     {"seed", sc.run.seed},
                     {"scenario", fdsec::to_json(sc)},
                     {"summary", summary}};
  write_file(stem + ".json", side.dump(2) + "\n");
}

void emit_sweep(const std::string& stem, const std::string& subcommand, const fdsec::Scenario& sc,
                const fdsec::SweepResult& result, const json& extra = json::object()) {
  write_file(stem + ".csv", fdsec::sweep_csv(result, sc.run.seed));
  json summary = fdsec::sweep_summary(result);
  summary.update(extra);
  write_sidecar(stem, subcommand, sc, summary);
  std::printf("%s: argmax=%g max_throughput=%.6g (stderr %.3g) -> %s.csv\n", subcommand.c_str(), result.argmax,
              result.max_throughput.mean, result.max_throughput.std_error, stem.c_str());
}

fdsec::McOptions mc_options(const fdsec::Scenario& sc) {
  fdsec::McOptions opts;
  opts.workers = sc.run.workers;
  return opts;
}

int run_single(const fdsec::Scenario& sc) {
  const auto& cfg = sc.system;
  const auto reports = fdsec::run_trials(cfg, sc.run.n_trials, sc.run.seed, mc_options(sc));
  std::vector<double> secrecy;
  secrecy.reserve(reports.size());
  for (const auto& r : reports) secrecy.push_back(r.secrecy_rate);
  fdsec::SweepResult result;
  fdsec::SweepPoint p;
  p.parameter = cfg.l_proc;
  p.sop = fdsec::sop_from_secrecy(secrecy, cfg.target_rate);
  p.throughput = fdsec::throughput_from_sop(p.sop, cfg.target_rate);
  result.points.push_back(p);
  fdsec::finalize_argmax(result);

  // Closed-form per-subcarrier outage with the trial-averaged AN power.
  const fdsec::RealVector delta = fdsec::mean_an_power(cfg, sc.run.n_trials, sc.run.seed, mc_options(sc));
  json analytic = json::array();
  for (fdsec::Index k = 0; k < delta.size(); ++k)
    analytic.push_back(fdsec::sop_subchannel(fdsec::sop_inputs_from_config(cfg, delta(k))).probability);
  emit_sweep(sc.run.output, "single", sc, result, {{"sop", p.sop.mean}, {"analytic_subchannel_sop", analytic}});
  std::printf("sop=%.6g (stderr %.3g)\n", p.sop.mean, p.sop.std_error);
  return kExitOk;
}

int run_self_check(const fdsec::Scenario& sc, int cases) {
  const auto checks = fdsec::run_self_check(sc.system, cases, sc.run.seed);
  bool ok = true;
  json rows = json::array();
  for (const auto& c : checks) {
    std::printf("%-30s worst=%.3e tol=%.1e %s\n", c.name.c_str(), c.worst, c.tolerance, c.passed ? "ok" : "FAIL");
    rows.push_back({{"name", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    ok = ok && c.passed;
  }
  write_sidecar(sc.run.output, "self-check", sc, {{"cases", cases}, {"checks", rows}, {"passed", ok}});
  return ok ? kExitOk : kExitCheckFailed;
}

void add_common(CLI::App* sub, Inputs& in) {
  sub->add_option("-s,--scenario", in.scenario_path, "Scenario JSON (or a result sidecar)");
  sub->add_option("--set", in.overrides, "Override a scenario key, e.g. system.theta=0.25")->take_all();
  sub->add_option("-o,--output", in.output, "Output path stem (writes <stem>.csv and <stem>.json)");
  sub->add_option("-w,--workers", in.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy outage and secure throughput of a full-duplex AF relay link with CP null-space AN"};
  app.require_subcommand(1);

  Inputs in;
  int cases = 50;
  auto* single = app.add_subcommand("single", "One Monte Carlo evaluation at the configured point");
  auto* lproc = app.add_subcommand("sweep-lproc", "Sweep the relay processing delay (n_cp = l_proc)");
  auto* rate = app.add_subcommand("sweep-rate", "Sweep the target secrecy rate");
  auto* bench = app.add_subcommand("benchmarks", "Proposed scheme and baselines over the delay grid");
  auto* check = app.add_subcommand("self-check", "Structural checks of the block model");
  for (auto* sub : {single, lproc, rate, bench, check}) add_common(sub, in);
  check->add_option("--cases", cases, "Random channel draws")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  fdsec::Scenario sc;
  try {
    sc = resolve(in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*single) return run_single(sc);
    if (*check) return run_self_check(sc, cases);
    if (*lproc) {
      emit_sweep(sc.run.output, "sweep-lproc", sc,
                 fdsec::sweep_lproc(sc.system, sc.run.lproc_grid, sc.run.n_trials, sc.run.seed, mc_options(sc)));
      return kExitOk;
    }
    if (*rate) {
      emit_sweep(sc.run.output, "sweep-rate", sc,
                 fdsec::sweep_target_rate(sc.system, sc.run.rate_grid, sc.run.n_trials, sc.run.seed, mc_options(sc)));
      return kExitOk;
    }
    if (*bench) {
      json summary = json::object();
      for (const auto& s :
           fdsec::benchmark_suite(sc.system, sc.run.lproc_grid, sc.run.n_trials, sc.run.seed, mc_options(sc))) {
        const std::string stem = sc.run.output + "_" + s.label;
        write_file(stem + ".csv", fdsec::sweep_csv(s.result, sc.run.seed));
        summary[s.label] = fdsec::sweep_summary(s.result);
        std::printf("%-18s argmax=%g max_throughput=%.6g\n", s.label.c_str(), s.result.argmax,
                    s.result.max_throughput.mean);
      }
      write_sidecar(sc.run.output, "benchmarks", sc, summary);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
