// Scenario files and result artifacts for the command-line runner.
//
// A scenario is a JSON document with four sections (all optional):
//
//   system   n_subchannels, n_cp, l_proc, snr_db | psd_alice + psd_relay,
//            theta, target_rate, full_sic, include_forwarded_relay_noise,
//            eve_decoder ("joint" | "per_subcarrier")
//   noise    relay, bob, eve                      (PSDs, W/Hz)
//   channel  var_ab, var_ae, var_ar, var_rb, var_re, var_rr
//   run      n_trials, seed, workers, lproc_grid, rate_grid, output
//
// Unknown keys are rejected. The JSON sidecar written next to every CSV has
// the resolved scenario under "scenario" and can be loaded back as input.
#pragma once

#include "fdsec/optimizer.hpp"
#include "fdsec/system_config.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fdsec {

struct RunControls {
  std::int64_t n_trials = 20000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::vector<int> lproc_grid = default_lproc_grid();
  std::vector<double> rate_grid = default_rate_grid();
  std::string output = "fdsec_results";
};

struct Scenario {
  SystemConfig system = default_config();
  RunControls run;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeedEnvVar = "FDSEC_SEED";

/// Parses a scenario (or a result sidecar) document. Throws ScenarioError.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Applies "section.key=value" to the raw document before parsing. The value
/// is read as JSON when possible, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Fully resolved scenario: explicit PSDs, every key present.
nlohmann::json to_json(const Scenario& scenario);

inline constexpr const char* kCsvHeader =
    "parameter,sop_mean,sop_stderr,throughput_mean,throughput_stderr,n_trials,seed";

std::string sweep_csv(const SweepResult& result, std::uint64_t seed);
nlohmann::json sweep_summary(const SweepResult& result);

}  // namespace fdsec
