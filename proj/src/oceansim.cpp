#include "oceansim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "resample.hpp"

namespace mpt {

const char* scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Static: return "static";
    case ScenarioKind::SurfaceOnly: return "surface_only";
    case ScenarioKind::SurfaceAndDrift: return "surface_and_drift";
  }
  return "?";
}

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "static") return ScenarioKind::Static;
  if (name == "surface_only") return ScenarioKind::SurfaceOnly;
  if (name == "surface_and_drift") return ScenarioKind::SurfaceAndDrift;
  throw std::invalid_argument("unknown scenario: " + name);
}

const char* target_name(TargetKind kind) {
  return kind == TargetKind::Stationary ? "stationary" : "crossing";
}

TargetKind target_from_name(const std::string& name) {
  if (name == "stationary") return TargetKind::Stationary;
  if (name == "crossing") return TargetKind::Crossing;
  throw std::invalid_argument("unknown target kind: " + name);
}

void ScenarioConfig::validate() const {
  if (!(depth_m > 0.0) || !(range_m > 0.0) || !(sound_speed_mps > 0.0))
    throw std::invalid_argument("ScenarioConfig: geometry must be positive");
  if (node_depth_m < 0.0 || node_depth_m > depth_m)
    throw std::invalid_argument("ScenarioConfig: node depth outside water column");
  if (n_paths < 1 || n_pings < 1)
    throw std::invalid_argument("ScenarioConfig: n_paths and n_pings must be >= 1");
  if (surface_rate_std < 0.0 || drift_rate_std < 0.0 || amp_walk_std < 0.0)
    throw std::invalid_argument("ScenarioConfig: noise stds must be >= 0");
  if (guard_s < 0.0)
    throw std::invalid_argument("ScenarioConfig: guard_s must be >= 0");
}

double ScenarioConfig::effective_surface_std() const {
  return kind == ScenarioKind::Static ? 0.0 : surface_rate_std;
}

double ScenarioConfig::effective_drift_std() const {
  return kind == ScenarioKind::SurfaceAndDrift ? drift_rate_std : 0.0;
}

ArrivalSet image_method_arrivals(const ScenarioConfig& cfg) {
  cfg.validate();
  const double zs = cfg.node_depth_m, zr = cfg.node_depth_m;
  const double r = cfg.range_m, depth = cfg.depth_m, c = cfg.sound_speed_mps;

  struct Candidate {
    double slant;
    int ns, nb;
  };
  std::vector<Candidate> cands;
  auto add = [&](double dz, int ns, int nb) {
    cands.push_back({std::sqrt(r * r + dz * dz), ns, nb});
  };
  // Image-source families per reflection order.
  const int max_order = std::max(2, cfg.n_paths);
  for (int m = 0; m <= max_order; ++m) {
    add(2.0 * m * depth + (zr - zs), m, m);
    add(2.0 * m * depth + (zr + zs), m + 1, m);
    add(2.0 * (m + 1) * depth - (zr + zs), m, m + 1);
    add(2.0 * (m + 1) * depth - (zr - zs) - 0.0, m + 1, m + 1);
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.slant < b.slant; });

  ArrivalSet set;
  set.direct_delay_s = cands.front().slant / c;
  const int n = std::min<int>(cfg.n_paths, static_cast<int>(cands.size()));
  for (int i = 0; i < n; ++i) {
    Arrival a;
    a.delay_s = cands[i].slant / c - set.direct_delay_s + cfg.guard_s;
    a.amplitude = (1.0 / cands[i].slant) *
                  ((cands[i].ns % 2) ? -1.0 : 1.0) *
                  std::pow(cfg.bottom_loss, cands[i].nb);
    a.n_surface = cands[i].ns;
    a.n_bottom = cands[i].nb;
    set.arrivals.push_back(a);
  }
  return set;
}

ArrivalSet evolve_ping(const ArrivalSet& arrivals, const ScenarioConfig& cfg,
                       int ping_index, Rng& rng) {
  if (ping_index < 1)
    throw std::invalid_argument("evolve_ping: ping_index must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double drift_std = cfg.effective_drift_std();
  const double surf_std = cfg.effective_surface_std();

  ArrivalSet next = arrivals;
  const double d = drift_std > 0.0 ? drift_std * gauss(rng) : 0.0;
  for (Arrival& a : next.arrivals) {
    const double c_i = surf_std > 0.0 ? surf_std * gauss(rng) : 0.0;
    a.log_scale = c_i + d;
    if (cfg.amp_walk_std > 0.0) {
      // Reflected walk: magnitude perturbed, sign preserved.
      const double sign = a.amplitude < 0.0 ? -1.0 : 1.0;
      a.amplitude = sign * std::abs(a.amplitude + cfg.amp_walk_std * gauss(rng));
    }
  }
  return next;
}

VectorXd render_background(const ArrivalSet& arrivals,
                           const SampledWaveform& s, int n_samples) {
  VectorXd x = VectorXd::Zero(n_samples);
  const double window_s = n_samples * s.dt_s;
  for (const Arrival& a : arrivals.arrivals) {
    if (a.delay_s < 0.0 || a.delay_s >= window_s)
      throw std::invalid_argument("render: arrival outside measurement window");
    // Wideband scaling anchored at the arrival time: s(beta * (t - tau)),
    // whose first-order term in log beta is the shifted companion waveform
    // (t - tau) * sdot(t - tau) -- the column of U at this lag.
    const double beta = std::exp(a.log_scale);
    x += a.amplitude * resample_scaled(s, beta, a.delay_s, n_samples);
  }
  return x;
}

PingRecord render_ping(const ArrivalSet& arrivals, const SampledWaveform& s,
                       int n_samples, double sigma_e2,
                       const TargetTrack* track, int ping_index, Rng& rng) {
  PingRecord rec;
  rec.ping_index = ping_index;
  rec.y = render_background(arrivals, s, n_samples);
  if (track) rec.y += track->waveform(ping_index);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma_e2));
  for (int n = 0; n < n_samples; ++n) rec.y[n] += gauss(rng);
  return rec;
}

double gain_for_level(const VectorXd& x, double sigma_e2, double level_db) {
  const double energy = x.squaredNorm();
  if (energy == 0.0) {
    if (std::isinf(level_db) && level_db < 0.0) return 0.0;
    throw std::invalid_argument("gain_for_level: zero-energy vector");
  }
  if (std::isinf(level_db) && level_db < 0.0) return 0.0;
  return std::sqrt(std::pow(10.0, level_db / 10.0) * x.size() * sigma_e2 /
                   energy);
}

std::pair<double, double> scale_to_inr_snr(const VectorXd& x_b,
                                           const VectorXd& x_o,
                                           double sigma_e2, double inr_db,
                                           double snr_db) {
  return {gain_for_level(x_b, sigma_e2, inr_db),
          gain_for_level(x_o, sigma_e2, snr_db)};
}

TargetTrack make_target_track(TargetKind kind, const SampledWaveform& s,
                              int n_samples, int n_pings, int onset,
                              double pri_s, double delay_s, double guard_s) {
  if (onset < 1 || onset > n_pings)
    throw std::invalid_argument("make_target_track: onset outside ping range");
  if (!(pri_s > 0.0))
    throw std::invalid_argument("make_target_track: pri_s must be > 0");

  TargetTrack track;
  track.onset = onset;
  track.amplitudes = VectorXd::Zero(n_pings);
  track.delays_s = VectorXd::Zero(n_pings);
  track.betas = VectorXd::Ones(n_pings);
  track.waveforms.assign(n_pings, VectorXd::Zero(n_samples));

  // Delay profile over the post-onset horizon: constant for a stationary
  // target; for a crossing target a parabola that touches the direct-path
  // delay (guard_s in window coordinates) at the midpoint of the horizon.
  std::vector<double> delays(n_pings + 1, guard_s + delay_s);
  if (kind == TargetKind::Crossing && n_pings > onset) {
    const double mid = 0.5 * (onset + n_pings);
    const double half = mid - onset;
    for (int k = onset; k <= n_pings; ++k) {
      const double f = (k - mid) / half;
      delays[k] = guard_s + delay_s * f * f;
    }
  }

  for (int k = onset; k <= n_pings; ++k) {
    track.amplitudes[k - 1] = 1.0;
    track.delays_s[k - 1] = delays[k];
    const double next = (k < n_pings) ? delays[k + 1] : delays[k];
    const double eta = (next - delays[k]) / pri_s;
    track.betas[k - 1] = 1.0 - eta;
    track.waveforms[k - 1] = resample_scaled(s, track.betas[k - 1],
                                             track.delays_s[k - 1], n_samples);
  }
  return track;
}

void save_pings(const std::string& path, const std::vector<PingRecord>& pings,
                double dt_s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_pings: cannot open " + path);
  const int n = pings.empty() ? 0 : static_cast<int>(pings.front().y.size());
  out << n << "," << dt_s << "," << pings.size() << "\n";
  out.precision(17);
  for (const PingRecord& rec : pings) {
    for (int i = 0; i < rec.y.size(); ++i)
      out << (i ? "," : "") << rec.y[i];
    out << "\n";
  }
}

std::pair<std::vector<PingRecord>, double> load_pings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pings: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_pings: empty file " + path);
  int n = 0, n_pings = 0;
  double dt = 0.0;
  {
    std::istringstream hdr(line);
    char comma;
    hdr >> n >> comma >> dt >> comma >> n_pings;
    if (!hdr || n <= 0)
      throw std::runtime_error("load_pings: bad header in " + path);
  }
  std::vector<PingRecord> pings;
  for (int k = 1; k <= n_pings; ++k) {
    if (!std::getline(in, line))
      throw std::runtime_error("load_pings: truncated file " + path);
    PingRecord rec;
    rec.ping_index = k;
    rec.y.resize(n);
    std::istringstream row(line);
    std::string field;
    for (int i = 0; i < n; ++i) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error("load_pings: short row in " + path);
      rec.y[i] = std::stod(field);
    }
    pings.push_back(std::move(rec));
  }
  return {std::move(pings), dt};
}

}  // namespace mpt
