#include "fdsec/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace fdsec {

namespace {

using nlohmann::json;

void reject_unknown(const json& section, const std::string& name, const std::set<std::string>& allowed) {
  if (!section.is_object()) throw ScenarioError("section '" + name + "' must be an object");
  for (const auto& [key, _] : section.items())
    if (!allowed.contains(key)) throw ScenarioError("unknown key '" + name + "." + key + "'");
}

template <typename T>
void read(const json& section, const std::string& section_name, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError("bad value for '" + section_name + "." + key + "': " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const json& input) {
  if (!input.is_object()) throw ScenarioError("scenario must be a JSON object");
  const json& doc = input.contains("scenario") && input.contains("subcommand") ? input.at("scenario") : input;
  reject_unknown(doc, "<root>", {"system", "noise", "channel", "run"});

  Scenario sc;
  SystemConfig& cfg = sc.system;
  std::optional<double> snr_db;

  if (doc.contains("system")) {
    const json& s = doc.at("system");
    reject_unknown(s, "system",
                   {"n_subchannels", "n_cp", "l_proc", "snr_db", "psd_alice", "psd_relay", "theta", "target_rate",
                    "full_sic", "include_forwarded_relay_noise", "eve_decoder"});
    read(s, "system", "n_subchannels", cfg.n_subchannels);
    read(s, "system", "n_cp", cfg.n_cp);
    read(s, "system", "l_proc", cfg.l_proc);
    read(s, "system", "theta", cfg.theta);
    read(s, "system", "target_rate", cfg.target_rate);
    read(s, "system", "full_sic", cfg.full_sic);
    read(s, "system", "include_forwarded_relay_noise", cfg.include_forwarded_relay_noise);
    if (s.contains("eve_decoder")) {
      std::string name;
      read(s, "system", "eve_decoder", name);
      try {
        cfg.eve_decoder = eve_decoder_from_string(name);
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
      }
    }
    const bool has_psd = s.contains("psd_alice") || s.contains("psd_relay");
    if (s.contains("snr_db")) {
      if (has_psd) throw ScenarioError("give either system.snr_db or system.psd_alice/psd_relay, not both");
      double v = 0.0;
      read(s, "system", "snr_db", v);
      snr_db = v;
    }
    if (has_psd) {
      if (!(s.contains("psd_alice") && s.contains("psd_relay")))
        throw ScenarioError("system.psd_alice and system.psd_relay must be given together");
      read(s, "system", "psd_alice", cfg.psd_alice);
      read(s, "system", "psd_relay", cfg.psd_relay);
    } else {
      snr_db = snr_db.value_or(30.0);
    }
  } else {
    snr_db = 30.0;
  }

  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    reject_unknown(n, "noise", {"relay", "bob", "eve"});
    read(n, "noise", "relay", cfg.noise_psd_relay);
    read(n, "noise", "bob", cfg.noise_psd_bob);
    read(n, "noise", "eve", cfg.noise_psd_eve);
  }
  if (doc.contains("channel")) {
    const json& c = doc.at("channel");
    reject_unknown(c, "channel", {"var_ab", "var_ae", "var_ar", "var_rb", "var_re", "var_rr"});
    read(c, "channel", "var_ab", cfg.var_ab);
    read(c, "channel", "var_ae", cfg.var_ae);
    read(c, "channel", "var_ar", cfg.var_ar);
    read(c, "channel", "var_rb", cfg.var_rb);
    read(c, "channel", "var_re", cfg.var_re);
    read(c, "channel", "var_rr", cfg.var_rr);
  }
  // Block length is known only once the system section is read.
  if (snr_db) set_symbol_snr_db(cfg, *snr_db);

  if (doc.contains("run")) {
    const json& r = doc.at("run");
    reject_unknown(r, "run", {"n_trials", "seed", "workers", "lproc_grid", "rate_grid", "output"});
    read(r, "run", "n_trials", sc.run.n_trials);
    read(r, "run", "seed", sc.run.seed);
    read(r, "run", "workers", sc.run.workers);
    read(r, "run", "lproc_grid", sc.run.lproc_grid);
    read(r, "run", "rate_grid", sc.run.rate_grid);
    read(r, "run", "output", sc.run.output);
  }
  if (sc.run.n_trials < 1) throw ScenarioError("run.n_trials must be >= 1");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("cannot parse '" + path.string() + "': " + e.what());
  }
  return parse_scenario(doc);
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ScenarioError("override must look like section.key=value, got '" + std::string(assignment) + "'");
  const std::string section(assignment.substr(0, dot));
  const std::string key(assignment.substr(dot + 1, eq - dot - 1));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  if (section == "system" && (key == "psd_alice" || key == "psd_relay") && doc.contains("system"))
    doc["system"].erase("snr_db");
  if (section == "system" && key == "snr_db" && doc.contains("system")) {
    doc["system"].erase("psd_alice");
    doc["system"].erase("psd_relay");
  }
  doc[section][key] = value;
}

json to_json(const Scenario& sc) {
  const SystemConfig& c = sc.system;
  json j;
  j["system"] = {{"n_subchannels", c.n_subchannels},
                 {"n_cp", c.n_cp},
                 {"l_proc", c.l_proc},
                 {"psd_alice", c.psd_alice},
                 {"psd_relay", c.psd_relay},
                 {"theta", c.theta},
                 {"target_rate", c.target_rate},
                 {"full_sic", c.full_sic},
                 {"include_forwarded_relay_noise", c.include_forwarded_relay_noise},
                 {"eve_decoder", std::string(to_string(c.eve_decoder))}};
  j["noise"] = {{"relay", c.noise_psd_relay}, {"bob", c.noise_psd_bob}, {"eve", c.noise_psd_eve}};
  j["channel"] = {{"var_ab", c.var_ab}, {"var_ae", c.var_ae}, {"var_ar", c.var_ar},
                  {"var_rb", c.var_rb}, {"var_re", c.var_re}, {"var_rr", c.var_rr}};
  j["run"] = {{"n_trials", sc.run.n_trials}, {"seed", sc.run.seed},           {"workers", sc.run.workers},
              {"lproc_grid", sc.run.lproc_grid}, {"rate_grid", sc.run.rate_grid}, {"output", sc.run.output}};
  return j;
}

std::string sweep_csv(const SweepResult& result, std::uint64_t seed) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& p : result.points) {
    os << fmt(p.parameter) << ',' << fmt(p.sop.mean) << ',' << fmt(p.sop.std_error) << ','
       << fmt(p.throughput.mean) << ',' << fmt(p.throughput.std_error) << ',' << p.sop.n_trials << ',' << seed
       << '\n';
  }
  return os.str();
}

json sweep_summary(const SweepResult& result) {
  return {{"argmax", result.argmax},
          {"max_throughput", result.max_throughput.mean},
          {"max_throughput_stderr", result.max_throughput.std_error},
          {"points", result.points.size()}};
}

}  // namespace fdsec
