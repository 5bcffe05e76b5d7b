// Parametric desk-scale substitute for ray-traced channel simulations:
// image-method multipath geometry in an iso-velocity waveguide, per-ping
// surface/drift perturbations, target injection, and INR/SNR scaling.
#pragma once

#include "detect.hpp"
#include "rng.hpp"

namespace mpt {

enum class ScenarioKind { Static, SurfaceOnly, SurfaceAndDrift };

const char* scenario_name(ScenarioKind kind);
ScenarioKind scenario_from_name(const std::string& name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::SurfaceAndDrift;
  double depth_m = 50.0;
  double range_m = 2000.0;
  double node_depth_m = 2.0;
  double sound_speed_mps = 1500.0;
  int n_paths = 6;
  double bottom_loss = 0.7;
  // Calibration knobs emulating surface motion and node drift; these are
  // not physical measurements.
  double surface_rate_std = 1e-4;
  double drift_rate_std = 2e-4;
  double amp_walk_std = 0.005;
  int n_pings = 100;
  // Window offset of the direct arrival. Keeps the earliest arrivals clear
  // of the window edge, where the interpolator (and the lag-grid
  // representation) would be truncated.
  double guard_s = 1.1e-3;

  void validate() const;
  // Scenario gating: static zeroes both rate noises, surface-only zeroes
  // the common-mode term.
  double effective_surface_std() const;
  double effective_drift_std() const;
};

struct Arrival {
  double delay_s = 0.0;   // window-referenced initial delay tau_io
  double amplitude = 0.0;
  double log_scale = 0.0; // r_i = c_i + d
  int n_surface = 0;
  int n_bottom = 0;
};

struct ArrivalSet {
  std::vector<Arrival> arrivals;  // delays ascending, direct path first
  double direct_delay_s = 0.0;    // absolute slant-range delay
};

// First n_paths image-method arrivals; delays are referenced to the direct
// path (direct arrival lands at window sample 0).
ArrivalSet image_method_arrivals(const ScenarioConfig& cfg);

// Per-ping perturbation draws: common log-scale d, per-path c_i, and a
// sign-preserving amplitude random walk.
ArrivalSet evolve_ping(const ArrivalSet& arrivals, const ScenarioConfig& cfg,
                       int ping_index, Rng& rng);

// y = sum_i a_i * s(beta_i (t - tau_i)) + x_o + e, exact time-scaled
// rendering anchored at each arrival time (not the linearized model).
PingRecord render_ping(const ArrivalSet& arrivals, const SampledWaveform& s,
                       int n_samples, double sigma_e2,
                       const TargetTrack* track, int ping_index, Rng& rng);

// Background-only render with no noise, for INR bookkeeping.
VectorXd render_background(const ArrivalSet& arrivals,
                           const SampledWaveform& s, int n_samples);

// Gain g so that 10*log10(||g x||^2 / (N sigma_e^2)) = level_db.
double gain_for_level(const VectorXd& x, double sigma_e2, double level_db);

std::pair<double, double> scale_to_inr_snr(const VectorXd& x_b,
                                           const VectorXd& x_o,
                                           double sigma_e2, double inr_db,
                                           double snr_db);

enum class TargetKind { Stationary, Crossing };

const char* target_name(TargetKind kind);
TargetKind target_from_name(const std::string& name);

// Unit-amplitude target track; the harness scales amplitudes to SNR.
// delay_s is relative to the direct path (guard_s in window coordinates);
// crossing tracks sweep the delay down to the direct-path delay at the
// midpoint of the post-onset horizon and back.
TargetTrack make_target_track(TargetKind kind, const SampledWaveform& s,
                              int n_samples, int n_pings, int onset,
                              double pri_s, double delay_s,
                              double guard_s = 0.0);

// Replay file: header "n_samples,dt_s,n_pings", one CSV row per ping.
void save_pings(const std::string& path, const std::vector<PingRecord>& pings,
                double dt_s);
std::pair<std::vector<PingRecord>, double> load_pings(const std::string& path);

}  // namespace mpt
