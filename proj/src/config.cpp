#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mpt {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() +
                                  "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  waveform.validate();
  scenario.validate();
  if (n_samples < 1 || n_lags < 1 || n_basis < 1)
    throw std::invalid_argument("config: dims must be >= 1");
  if (n_basis > n_lags)
    throw std::invalid_argument("config: n_basis > n_lags");
  if (!(train_pings < onset && onset <= scenario.n_pings))
    throw std::invalid_argument("config: require train_pings < onset <= n_pings");
  if (models.empty() || snr_grid_db.empty())
    throw std::invalid_argument("config: models and snr_grid_db must be nonempty");
  if (n_mc < 1) throw std::invalid_argument("config: n_mc must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("config: alpha must be in (0,1]");
  if (!(pfa > 0.0 && pfa <= 1.0))
    throw std::invalid_argument("config: pfa must be in (0,1]");
  if (!(sigma_e2 > 0.0))
    throw std::invalid_argument("config: sigma_e2 must be > 0");
  if (!(pri_s > 0.0))
    throw std::invalid_argument("config: pri_s must be > 0");
  if (target_delay_s < 0.0 ||
      scenario.guard_s + target_delay_s >= n_samples / waveform.sample_hz)
    throw std::invalid_argument("config: target_delay_s outside window");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                err.what());
  }

  check_keys(root, "top level",
             {"waveform", "dims", "scenario", "target", "models",
              "snr_grid_db", "inr_db", "n_mc", "train_pings", "onset",
              "alpha", "pfa", "sigma_e2", "cdf_snr_db", "master_seed",
              "output_dir"});

  ExperimentConfig cfg;
  if (root.contains("waveform")) {
    const json& w = root["waveform"];
    check_keys(w, "waveform",
               {"carrier_hz", "bandwidth_hz", "pulse_s", "sample_hz"});
    read(w, "carrier_hz", cfg.waveform.carrier_hz);
    read(w, "bandwidth_hz", cfg.waveform.bandwidth_hz);
    read(w, "pulse_s", cfg.waveform.pulse_s);
    read(w, "sample_hz", cfg.waveform.sample_hz);
  }
  if (root.contains("dims")) {
    const json& d = root["dims"];
    check_keys(d, "dims", {"n_samples", "n_lags", "n_basis"});
    read(d, "n_samples", cfg.n_samples);
    read(d, "n_lags", cfg.n_lags);
    read(d, "n_basis", cfg.n_basis);
  }
  if (root.contains("scenario")) {
    const json& s = root["scenario"];
    check_keys(s, "scenario",
               {"kind", "depth_m", "range_m", "node_depth_m",
                "sound_speed_mps", "n_paths", "bottom_loss",
                "surface_rate_std", "drift_rate_std", "amp_walk_std",
                "n_pings", "guard_s"});
    if (s.contains("kind"))
      cfg.scenario.kind = scenario_from_name(s["kind"].get<std::string>());
    read(s, "depth_m", cfg.scenario.depth_m);
    read(s, "range_m", cfg.scenario.range_m);
    read(s, "node_depth_m", cfg.scenario.node_depth_m);
    read(s, "sound_speed_mps", cfg.scenario.sound_speed_mps);
    read(s, "n_paths", cfg.scenario.n_paths);
    read(s, "bottom_loss", cfg.scenario.bottom_loss);
    read(s, "surface_rate_std", cfg.scenario.surface_rate_std);
    read(s, "drift_rate_std", cfg.scenario.drift_rate_std);
    read(s, "amp_walk_std", cfg.scenario.amp_walk_std);
    read(s, "n_pings", cfg.scenario.n_pings);
    read(s, "guard_s", cfg.scenario.guard_s);
  }
  if (root.contains("target")) {
    const json& t = root["target"];
    check_keys(t, "target", {"kind", "delay_s", "pri_s"});
    if (t.contains("kind"))
      cfg.target_kind = target_from_name(t["kind"].get<std::string>());
    read(t, "delay_s", cfg.target_delay_s);
    read(t, "pri_s", cfg.pri_s);
  }
  if (root.contains("models")) {
    cfg.models.clear();
    for (const auto& name : root["models"])
      cfg.models.push_back(model_from_name(name.get<std::string>()));
  }
  read(root, "snr_grid_db", cfg.snr_grid_db);
  read(root, "inr_db", cfg.inr_db);
  read(root, "n_mc", cfg.n_mc);
  read(root, "train_pings", cfg.train_pings);
  read(root, "onset", cfg.onset);
  read(root, "alpha", cfg.alpha);
  read(root, "pfa", cfg.pfa);
  read(root, "sigma_e2", cfg.sigma_e2);
  read(root, "cdf_snr_db", cfg.cdf_snr_db);
  read(root, "master_seed", cfg.master_seed);
  read(root, "output_dir", cfg.output_dir);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

}  // namespace mpt
