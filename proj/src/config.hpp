// Experiment configuration and its JSON file format.
#pragma once

#include <string>
#include <vector>

#include "oceansim.hpp"

namespace mpt {

struct ExperimentConfig {
  WaveformSpec waveform;
  int n_samples = 512;  // N
  int n_lags = 64;      // N_l
  int n_basis = 64;     // M; centers at every lag — see build_basis notes
  ScenarioConfig scenario;
  TargetKind target_kind = TargetKind::Stationary;
  double target_delay_s = 0.0015;  // relative to the direct path
  double pri_s = 0.12;
  std::vector<CovarianceModelKind> models = {CovarianceModelKind::M0,
                                             CovarianceModelKind::Md};
  std::vector<double> snr_grid_db = {0, 5, 10, 15, 20};
  double inr_db = 30.0;
  int n_mc = 200;
  int train_pings = 40;
  int onset = 41;
  double alpha = 0.05;
  double pfa = 0.05;
  double sigma_e2 = 1.0;
  double cdf_snr_db = 10.0;
  uint64_t master_seed = 1;
  std::string output_dir = "out";

  void validate() const;
};

// Strict parse: unknown keys anywhere in the file are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

}  // namespace mpt
