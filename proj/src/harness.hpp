// Monte Carlo orchestration: per-trial pipeline (simulate, learn, track,
// detect), threshold calibration, metrics aggregation, CSV and plot output.
#pragma once

#include <map>
#include <memory>

#include "config.hpp"
#include "detect.hpp"
#include "learn.hpp"

namespace mpt {

// Immutable per-configuration objects shared by all trials.
class Problem {
 public:
  explicit Problem(const ExperimentConfig& cfg);
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  const SampledWaveform& s() const { return s_; }
  const SampledWaveform& u() const { return u_; }
  const ConvolutionOperator& s_op() const { return s_op_; }
  const ConvolutionOperator& u_op() const { return u_op_; }
  const ChannelBasis& basis() const { return basis_; }
  const EkfTracker& tracker() const { return *tracker_; }

 private:
  SampledWaveform s_, u_;
  ConvolutionOperator s_op_, u_op_;
  ChannelBasis basis_;
  std::unique_ptr<EkfTracker> tracker_;
};

// Random-stream purposes; part of the seed derivation, so values are fixed.
enum class TrialTag : uint64_t {
  Calibration = 1,
  Detection = 2,
  FalseAlarmCheck = 3,
  Significance = 4,
  Simulate = 5,
};

// Full background-only ping sequence for one trial, INR-scaled.
std::vector<PingRecord> simulate_background(const ExperimentConfig& cfg,
                                            const Problem& problem,
                                            TrialTag tag, int trial_id);

// Unit target track rendered for the configured geometry, then scaled so the
// onset-ping waveform meets snr_db.
TargetTrack scaled_target_track(const ExperimentConfig& cfg,
                                const Problem& problem, double snr_db);

// One trial's learned models and carried filter states; the detection-horizon
// records stay background-only (targets are injected additively per cell).
struct Dataset {
  int trial_id = 0;
  bool failed = false;
  std::string error;
  std::vector<PingRecord> detect_records;  // pings onset..n_pings
  std::map<CovarianceModelKind, FitResult> fits;
  std::map<CovarianceModelKind, FilterState> post_train;
};

Dataset prepare_dataset(const ExperimentConfig& cfg, const Problem& problem,
                        TrialTag tag, int trial_id,
                        const std::vector<CovarianceModelKind>& models);

// SLRT over a dataset's detection horizon. When inject_target is set the
// scaled track is added to the recorded pings (H1 data); the H1 filter
// offset uses the same track either way.
DetectionOutcome run_dataset_slrt(const ExperimentConfig& cfg,
                                  const Problem& problem,
                                  const Dataset& dataset,
                                  CovarianceModelKind model,
                                  const TargetTrack& track, double h1,
                                  bool inject_target);

double calibrate_cell(const ExperimentConfig& cfg, const Problem& problem,
                      const std::vector<Dataset>& cal_datasets,
                      CovarianceModelKind model, const TargetTrack& track);

struct TrialResult {
  DetectionOutcome detection;
  FitResult fit;
  bool failed = false;
  std::string error;
};

// Single end-to-end trial against a given threshold.
TrialResult run_trial(const ExperimentConfig& cfg, const Problem& problem,
                      CovarianceModelKind model, double snr_db, int trial_id,
                      double h1);

struct CellMetrics {
  CovarianceModelKind model = CovarianceModelKind::M0;
  double snr_db = 0.0;
  double h1 = 0.0;
  int n_trials = 0;
  int n_detected = 0;
  int n_failed = 0;
  double pd = 0.0;
  double mtd = 0.0;        // mean delay over detected trials
  double delay_p10 = 0.0;
  double delay_p90 = 0.0;
  std::vector<int> delays;  // detected trials only; not serialized
};

struct CdfPoint {
  CovarianceModelKind model = CovarianceModelKind::M0;
  int delay = 0;
  double value = 0.0;
};

// Empirical false-alarm rate at the reference SNR: the calibrated threshold
// applied to background-only trials that were not used for calibration.
struct PfaCheck {
  CovarianceModelKind model = CovarianceModelKind::M0;
  double snr_db = 0.0;
  double h1 = 0.0;
  int n_trials = 0;
  int n_false_alarms = 0;
  double pfa = 0.0;
};

struct MetricsSummary {
  std::vector<CellMetrics> cells;
  std::vector<CdfPoint> cdf;  // at cdf_snr_db
  double cdf_snr_db = 0.0;
  std::vector<PfaCheck> pfa_checks;  // at cdf_snr_db
};

// Full sweep: per (model, snr) calibration + n_mc trials; writes
// pd_vs_snr.csv, mtd_vs_snr.csv, cdf_delay.csv and SVG plots to
// cfg.output_dir.
MetricsSummary run_sweep(const ExperimentConfig& cfg);

struct SignificanceRow {
  std::string scenario;
  double inr_db = 0.0;
  int replicate = 0;
  std::string model;
  double statistic_2t = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool significant = false;
  double sigma_q2 = 0.0, sigma_c2 = 0.0, sigma_d2 = 0.0;
  double loglik = 0.0;
};

// Fits all models on training pings for every (scenario, INR) cell, n_mc
// replicates each; writes significance.csv under cfg.output_dir.
std::vector<SignificanceRow> run_significance_sweep(
    const ExperimentConfig& cfg, const std::vector<double>& inr_grid_db,
    const std::vector<ScenarioKind>& scenarios = {
        ScenarioKind::Static, ScenarioKind::SurfaceOnly,
        ScenarioKind::SurfaceAndDrift});

void write_metrics(const MetricsSummary& summary, const std::string& dir);
MetricsSummary read_metrics(const std::string& dir);
void write_significance_csv(const std::vector<SignificanceRow>& rows,
                            const std::string& path);
void write_plots(const MetricsSummary& summary, const std::string& dir);

// Bounded worker pool; results are indexed, so aggregation stays
// deterministic regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

std::string format_double(double v);  // %.17g, round-trips exactly

}  // namespace mpt
