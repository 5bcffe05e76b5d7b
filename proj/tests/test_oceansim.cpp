#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oceansim.hpp"
#include "resample.hpp"

using namespace mpt;

namespace {

ScenarioConfig test_scenario() {
  ScenarioConfig sc;
  sc.kind = ScenarioKind::SurfaceAndDrift;
  sc.n_pings = 10;
  return sc;
}

}  // namespace

TEST_CASE("image method geometry: direct path, ordering, signs, losses") {
  ScenarioConfig sc = test_scenario();
  const ArrivalSet set = image_method_arrivals(sc);
  REQUIRE(static_cast<int>(set.arrivals.size()) == sc.n_paths);

  // Direct path: horizontal slant range, no reflections.
  CHECK(set.direct_delay_s ==
        doctest::Approx(sc.range_m / sc.sound_speed_mps));
  const Arrival& direct = set.arrivals.front();
  CHECK(direct.delay_s == doctest::Approx(sc.guard_s));
  CHECK(direct.n_surface == 0);
  CHECK(direct.n_bottom == 0);
  CHECK(direct.amplitude == doctest::Approx(1.0 / sc.range_m));

  for (size_t i = 0; i + 1 < set.arrivals.size(); ++i)
    CHECK(set.arrivals[i].delay_s <= set.arrivals[i + 1].delay_s);

  for (const Arrival& a : set.arrivals) {
    // Expected amplitude from the image construction.
    const double slant =
        (a.delay_s - sc.guard_s + set.direct_delay_s) * sc.sound_speed_mps;
    const double expect = (1.0 / slant) * ((a.n_surface % 2) ? -1.0 : 1.0) *
                          std::pow(sc.bottom_loss, a.n_bottom);
    CHECK(a.amplitude == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("scenario gating of the perturbation knobs") {
  ScenarioConfig sc = test_scenario();
  sc.kind = ScenarioKind::Static;
  CHECK(sc.effective_surface_std() == 0.0);
  CHECK(sc.effective_drift_std() == 0.0);
  sc.kind = ScenarioKind::SurfaceOnly;
  CHECK(sc.effective_surface_std() == sc.surface_rate_std);
  CHECK(sc.effective_drift_std() == 0.0);
  sc.kind = ScenarioKind::SurfaceAndDrift;
  CHECK(sc.effective_drift_std() == sc.drift_rate_std);
}

TEST_CASE("static evolution with no amplitude walk is the identity") {
  ScenarioConfig sc = test_scenario();
  sc.kind = ScenarioKind::Static;
  sc.amp_walk_std = 0.0;
  const ArrivalSet base = image_method_arrivals(sc);
  Rng rng(9);
  const ArrivalSet next = evolve_ping(base, sc, 1, rng);
  for (size_t i = 0; i < base.arrivals.size(); ++i) {
    CHECK(next.arrivals[i].log_scale == 0.0);
    CHECK(next.arrivals[i].amplitude == base.arrivals[i].amplitude);
    CHECK(next.arrivals[i].delay_s == base.arrivals[i].delay_s);
  }
}

TEST_CASE("amplitude walk preserves arrival signs") {
  ScenarioConfig sc = test_scenario();
  sc.amp_walk_std = 0.5;
  ArrivalSet cur = image_method_arrivals(sc);
  const ArrivalSet base = cur;
  Rng rng(10);
  for (int k = 1; k <= 50; ++k) {
    cur = evolve_ping(cur, sc, k, rng);
    for (size_t i = 0; i < cur.arrivals.size(); ++i)
      CHECK(cur.arrivals[i].amplitude * base.arrivals[i].amplitude >= 0.0);
  }
}

TEST_CASE("render uses the anchored time-scaling convention") {
  ScenarioConfig sc = test_scenario();
  sc.n_paths = 1;
  ArrivalSet set = image_method_arrivals(sc);
  set.arrivals.resize(1);
  set.arrivals[0].amplitude = 2.0;
  set.arrivals[0].log_scale = 3e-4;

  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  const int n = 256;
  const VectorXd x = render_background(set, s, n);
  const double beta = std::exp(3e-4);
  const VectorXd ref =
      2.0 * resample_scaled(s, beta, set.arrivals[0].delay_s, n);
  CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-12);

  set.arrivals[0].delay_s = -1e-4;
  CHECK_THROWS_AS(render_background(set, s, n), std::invalid_argument);
}

TEST_CASE("INR and SNR gains hit the requested level") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  ScenarioConfig sc = test_scenario();
  const ArrivalSet set = image_method_arrivals(sc);
  const VectorXd x = render_background(set, s, 256);
  const double g = gain_for_level(x, 1.0, 30.0);
  const double inr =
      10.0 * std::log10((g * x).squaredNorm() / (256 * 1.0));
  CHECK(inr == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(gain_for_level(x, 1.0, -std::numeric_limits<double>::infinity()) ==
        0.0);
  CHECK_THROWS_AS(gain_for_level(VectorXd::Zero(8), 1.0, 0.0),
                  std::invalid_argument);

  const auto [gb, go] = scale_to_inr_snr(x, x, 2.0, 20.0, 5.0);
  CHECK(10.0 * std::log10((gb * x).squaredNorm() / (256 * 2.0)) ==
        doctest::Approx(20.0));
  CHECK(10.0 * std::log10((go * x).squaredNorm() / (256 * 2.0)) ==
        doctest::Approx(5.0));
}

TEST_CASE("target tracks: onset masking, stationary and crossing delays") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  const int n = 256, n_pings = 21, onset = 11;
  const double guard = 1.1e-3, delay = 1.5e-3;

  const TargetTrack st = make_target_track(TargetKind::Stationary, s, n,
                                           n_pings, onset, 0.12, delay, guard);
  CHECK(st.onset == onset);
  CHECK(st.n_pings() == n_pings);
  for (int k = 1; k < onset; ++k) {
    CHECK(st.waveform(k).cwiseAbs().maxCoeff() == 0.0);
    CHECK(st.amplitudes[k - 1] == 0.0);
  }
  for (int k = onset; k <= n_pings; ++k) {
    CHECK(st.waveform(k).cwiseAbs().maxCoeff() > 0.0);
    CHECK(st.delays_s[k - 1] == doctest::Approx(guard + delay));
    CHECK(st.betas[k - 1] == doctest::Approx(1.0));
  }

  const TargetTrack cr = make_target_track(TargetKind::Crossing, s, n,
                                           n_pings, onset, 0.12, delay, guard);
  const int mid = (onset + n_pings) / 2;
  CHECK(cr.delays_s[onset - 1] == doctest::Approx(guard + delay));
  CHECK(cr.delays_s[mid - 1] == doctest::Approx(guard));
  CHECK(cr.delays_s[n_pings - 1] == doctest::Approx(guard + delay));
  // Doppler factor from the per-ping delay slope.
  const double eta =
      (cr.delays_s[onset] - cr.delays_s[onset - 1]) / 0.12;
  CHECK(cr.betas[onset - 1] == doctest::Approx(1.0 - eta));

  CHECK_THROWS_AS(make_target_track(TargetKind::Stationary, s, n, 10, 11,
                                    0.12, delay, guard),
                  std::invalid_argument);
}

TEST_CASE("ping replay file round trip") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  ScenarioConfig sc = test_scenario();
  const ArrivalSet set = image_method_arrivals(sc);
  Rng rng(77);
  std::vector<PingRecord> pings;
  for (int k = 1; k <= 3; ++k)
    pings.push_back(render_ping(set, s, 64, 1.0, nullptr, k, rng));

  const std::string path =
      (std::filesystem::temp_directory_path() / "mpt_test_pings.csv").string();
  save_pings(path, pings, s.dt_s);
  const auto [loaded, dt] = load_pings(path);
  std::remove(path.c_str());

  CHECK(dt == doctest::Approx(s.dt_s));
  REQUIRE(loaded.size() == pings.size());
  for (size_t k = 0; k < pings.size(); ++k) {
    CHECK(loaded[k].ping_index == pings[k].ping_index);
    CHECK((loaded[k].y - pings[k].y).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("scenario and target names round trip, config validation") {
  for (auto kind : {ScenarioKind::Static, ScenarioKind::SurfaceOnly,
                    ScenarioKind::SurfaceAndDrift})
    CHECK(scenario_from_name(scenario_name(kind)) == kind);
  CHECK_THROWS_AS(scenario_from_name("x"), std::invalid_argument);
  for (auto kind : {TargetKind::Stationary, TargetKind::Crossing})
    CHECK(target_from_name(target_name(kind)) == kind);
  CHECK_THROWS_AS(target_from_name("x"), std::invalid_argument);

  ScenarioConfig bad = test_scenario();
  bad.depth_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = test_scenario();
  bad.node_depth_m = bad.depth_m + 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = test_scenario();
  bad.guard_s = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
