#include "detect.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace mpt {

void SlrtConfig::validate() const {
  if (!(h0 <= 0.0) || std::isnan(h1) || h1 < 0.0)
    throw std::invalid_argument("SlrtConfig: require h0 <= 0 <= h1");
}

std::pair<SlrtState, SlrtDecision> slrt_step(
    const SlrtState& state, const PingRecord& rec, const Hyperparams& hp,
    CovarianceModelKind kind, const EkfTracker& tracker,
    const TargetTrack& track, const SlrtConfig& cfg) {
  cfg.validate();
  const VectorXd& offset = track.waveform(rec.ping_index);

  SlrtState next;
  StepOutput out0 = tracker.step(state.h0_filter, rec, hp, kind);
  StepOutput out1 = tracker.step(state.h1_filter, rec, hp, kind, &offset);
  const double gamma = out1.loglik_increment - out0.loglik_increment;

  next.h0_filter = std::move(out0.state);
  next.h1_filter = std::move(out1.state);
  next.g = state.g + gamma;
  next.k_start = state.k_start;

  SlrtDecision decision = SlrtDecision::Monitor;
  if (next.g >= cfg.h1) {
    decision = SlrtDecision::Detect;
  } else if (cfg.restart_on_lower && next.g <= cfg.h0) {
    decision = SlrtDecision::Restart;
    next.g = 0.0;
    next.k_start = rec.ping_index + 1;
    next.h1_filter = next.h0_filter;
  }
  return {std::move(next), decision};
}

DetectionOutcome slrt_run(const std::vector<PingRecord>& records,
                          const Hyperparams& hp, CovarianceModelKind kind,
                          const EkfTracker& tracker, const TargetTrack& track,
                          const SlrtConfig& cfg, int start_ping,
                          const FilterState& init_state) {
  if (start_ping < 1)
    throw std::invalid_argument("slrt_run: start_ping must be >= 1");

  SlrtState state;
  state.g = 0.0;
  state.k_start = start_ping;
  state.h0_filter = init_state;
  state.h1_filter = init_state;

  DetectionOutcome outcome;
  outcome.max_g = 0.0;
  for (const PingRecord& rec : records) {
    auto [next, decision] = slrt_step(state, rec, hp, kind, tracker, track, cfg);
    outcome.max_g = std::max(outcome.max_g, next.g);
    if (decision == SlrtDecision::Detect) {
      outcome.detected = true;
      outcome.alarm_ping = rec.ping_index;
      outcome.delay = rec.ping_index - track.onset;
      return outcome;
    }
    state = std::move(next);
  }
  return outcome;
}

double calibrate_h1_from_stats(std::vector<double> max_stats,
                               double pfa_target) {
  if (max_stats.empty())
    throw std::invalid_argument("calibrate_h1: no trials");
  if (!(pfa_target > 0.0 && pfa_target <= 1.0))
    throw std::invalid_argument("calibrate_h1: pfa_target must be in (0,1]");
  const int n = static_cast<int>(max_stats.size());
  if (n < static_cast<int>(std::ceil(1.0 / pfa_target)))
    throw std::invalid_argument("calibrate_h1: need n_trials >= 1/pfa_target");

  std::sort(max_stats.begin(), max_stats.end(), std::greater<double>());
  if (max_stats.front() == max_stats.back())
    std::cerr << "calibrate_h1: warning, all trial maxima are equal ("
              << max_stats.front() << ")\n";
  const int m = std::max(1, static_cast<int>(std::floor(pfa_target * n)));
  return max_stats[m - 1];
}

double calibrate_h1(const std::function<SlrtTrialInput(int)>& trial_generator,
                    int n_trials, double pfa_target, const Hyperparams& hp,
                    CovarianceModelKind kind, const EkfTracker& tracker,
                    const TargetTrack& track, const SlrtConfig& cfg) {
  SlrtConfig open = cfg;
  open.h1 = std::numeric_limits<double>::infinity();
  std::vector<double> maxima;
  maxima.reserve(n_trials);
  for (int t = 0; t < n_trials; ++t) {
    SlrtTrialInput input = trial_generator(t);
    DetectionOutcome out = slrt_run(input.records, hp, kind, tracker, track,
                                    open, input.start_ping, input.init_state);
    maxima.push_back(out.max_g);
  }
  return calibrate_h1_from_stats(std::move(maxima), pfa_target);
}

}  // namespace mpt
