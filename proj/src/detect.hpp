// Sequential likelihood-ratio test with restart for target-onset detection,
// and empirical threshold calibration.
#pragma once

#include <functional>
#include <limits>

#include "tracker.hpp"

namespace mpt {

struct SlrtConfig {
  double h0 = 0.0;  // lower (restart) threshold; h0 = 0 gives Page's test
  double h1 = std::numeric_limits<double>::infinity();
  bool restart_on_lower = true;

  void validate() const;
};

struct SlrtState {
  double g = 0.0;     // cumulative statistic G
  int k_start = 0;    // restart index k_o
  FilterState h0_filter;
  FilterState h1_filter;
};

struct TargetTrack {
  int onset = 0;  // first ping with a target return (1-based)
  VectorXd amplitudes;  // a_{o,k}, index k-1
  VectorXd delays_s;    // tau_bar_{o,k}, window-referenced
  VectorXd betas;       // beta_{o,k}
  std::vector<VectorXd> waveforms;  // x_{o,k}; zero vectors before onset

  int n_pings() const { return static_cast<int>(waveforms.size()); }
  const VectorXd& waveform(int ping) const { return waveforms.at(ping - 1); }
};

struct DetectionOutcome {
  bool detected = false;
  int alarm_ping = -1;
  int delay = -1;   // alarm_ping - onset when detected
  double max_g = 0.0;
};

enum class SlrtDecision { Monitor, Restart, Detect };

// One SLRT update: advances the H0 filter (no offset) and the H1 filter
// (offset = target waveform for this ping), accumulates the per-ping
// log-likelihood ratio, and applies the stopping rule.
std::pair<SlrtState, SlrtDecision> slrt_step(
    const SlrtState& state, const PingRecord& rec, const Hyperparams& hp,
    CovarianceModelKind kind, const EkfTracker& tracker,
    const TargetTrack& track, const SlrtConfig& cfg);

// Runs the SLRT over the detection horizon starting with k_o = start_ping.
// On restart the H1 filter is re-cloned from the continuously running H0
// filter. Returns the first upper-threshold crossing or a miss.
DetectionOutcome slrt_run(const std::vector<PingRecord>& records,
                          const Hyperparams& hp, CovarianceModelKind kind,
                          const EkfTracker& tracker, const TargetTrack& track,
                          const SlrtConfig& cfg, int start_ping,
                          const FilterState& init_state);

struct SlrtTrialInput {
  std::vector<PingRecord> records;  // detection horizon, background-only
  FilterState init_state;
  int start_ping = 1;
};

// Empirical upper threshold: (1 - pfa_target) quantile with higher
// interpolation of per-trial max statistics from background-only runs.
double calibrate_h1(const std::function<SlrtTrialInput(int)>& trial_generator,
                    int n_trials, double pfa_target, const Hyperparams& hp,
                    CovarianceModelKind kind, const EkfTracker& tracker,
                    const TargetTrack& track, const SlrtConfig& cfg);

// Quantile selection rule on already-collected max statistics.
double calibrate_h1_from_stats(std::vector<double> max_stats,
                               double pfa_target);

}  // namespace mpt
