#include <doctest.h>

#include <atomic>
#include <filesystem>

#include "harness.hpp"

using namespace mpt;

namespace {

// Small but structurally complete configuration for harness-level tests.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.n_samples = 96;
  cfg.n_lags = 16;
  cfg.n_basis = 16;
  cfg.scenario.n_pings = 8;
  cfg.train_pings = 4;
  cfg.onset = 5;
  cfg.n_mc = 2;
  cfg.pfa = 0.5;
  cfg.target_delay_s = 5e-4;
  cfg.snr_grid_db = {10.0};
  cfg.cdf_snr_db = 10.0;
  cfg.models = {CovarianceModelKind::M0};
  cfg.master_seed = 3;
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("strict config parsing") {
  // Empty object: all defaults, valid.
  CHECK_NOTHROW(config_from_json_text("{}"));

  CHECK_THROWS_WITH_AS(config_from_json_text("{\"bogus\": 1}"),
                       doctest::Contains("unknown key 'bogus'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      config_from_json_text("{\"scenario\": {\"depth\": 1}}"),
      doctest::Contains("unknown key 'depth'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      config_from_json_text("{\"dims\": {\"n\": 1}}"),
      doctest::Contains("unknown key 'n'"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"models\": [\"m7\"]}"),
                  std::invalid_argument);
  // Constraint violations surface as config errors.
  CHECK_THROWS_AS(
      config_from_json_text("{\"train_pings\": 50, \"onset\": 10}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      config_from_json_text("{\"target\": {\"delay_s\": 99.0}}"),
      std::invalid_argument);

  const ExperimentConfig cfg = config_from_json_text(
      "{\"dims\": {\"n_samples\": 128}, \"models\": [\"mcd\"],"
      " \"scenario\": {\"kind\": \"static\"}}");
  CHECK(cfg.n_samples == 128);
  CHECK(cfg.models == std::vector<CovarianceModelKind>{
                          CovarianceModelKind::Mcd});
  CHECK(cfg.scenario.kind == ScenarioKind::Static);
}

TEST_CASE("background simulation is deterministic per (tag, trial)") {
  const ExperimentConfig cfg = tiny_config();
  const Problem problem(cfg);

  const auto a = simulate_background(cfg, problem, TrialTag::Detection, 0);
  const auto b = simulate_background(cfg, problem, TrialTag::Detection, 0);
  REQUIRE(a.size() == b.size());
  for (size_t k = 0; k < a.size(); ++k)
    CHECK((a[k].y - b[k].y).cwiseAbs().maxCoeff() == 0.0);

  const auto c = simulate_background(cfg, problem, TrialTag::Detection, 1);
  const auto d = simulate_background(cfg, problem, TrialTag::Calibration, 0);
  CHECK((a[0].y - c[0].y).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a[0].y - d[0].y).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("background meets the configured INR before noise") {
  ExperimentConfig cfg = tiny_config();
  cfg.scenario.kind = ScenarioKind::Static;  // no perturbations
  cfg.inr_db = 80.0;  // noise contributes < 1e-4 dB to the measured power
  const Problem problem(cfg);
  const auto pings = simulate_background(cfg, problem, TrialTag::Simulate, 0);
  const double inr = 10.0 * std::log10(pings[0].y.squaredNorm() /
                                       (cfg.n_samples * cfg.sigma_e2));
  CHECK(inr == doctest::Approx(80.0).epsilon(1e-5));
}

TEST_CASE("scaled target track meets the configured SNR at onset") {
  const ExperimentConfig cfg = tiny_config();
  const Problem problem(cfg);
  const TargetTrack track = scaled_target_track(cfg, problem, 10.0);
  const double snr =
      10.0 *
      std::log10(track.waveform(cfg.onset).squaredNorm() /
                 (cfg.n_samples * cfg.sigma_e2));
  CHECK(snr == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(track.waveform(cfg.onset - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prepare_dataset fits every requested model and carries state") {
  const ExperimentConfig cfg = tiny_config();
  const Problem problem(cfg);
  const Dataset ds = prepare_dataset(cfg, problem, TrialTag::Detection, 0,
                                     {CovarianceModelKind::M0,
                                      CovarianceModelKind::Md});
  REQUIRE(!ds.failed);
  CHECK(ds.fits.count(CovarianceModelKind::M0) == 1);
  CHECK(ds.fits.count(CovarianceModelKind::Md) == 1);
  CHECK(ds.post_train.count(CovarianceModelKind::Md) == 1);
  CHECK(static_cast<int>(ds.detect_records.size()) ==
        cfg.scenario.n_pings - cfg.onset + 1);
  CHECK(ds.detect_records.front().ping_index == cfg.onset);
  CHECK(ds.post_train.at(CovarianceModelKind::M0).ping_index ==
        cfg.train_pings);
}

TEST_CASE("parallel_for covers every index and propagates exceptions") {
  std::vector<std::atomic<int>> hits(64);
  parallel_for(64, [&](int i) { hits[i]++; });
  for (int i = 0; i < 64; ++i) CHECK(hits[i].load() == 1);

  CHECK_THROWS_AS(parallel_for(8,
                               [](int i) {
                                 if (i == 5)
                                   throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("format_double round trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 12345.6789, -0.0,
                   2.2250738585072014e-308})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("metrics CSV round trip") {
  MetricsSummary s;
  s.cdf_snr_db = 10.0;
  CellMetrics c;
  c.model = CovarianceModelKind::Md;
  c.snr_db = 10.0;
  c.h1 = 12.3456789012345678;
  c.n_trials = 7;
  c.n_detected = 3;
  c.n_failed = 1;
  c.pd = 0.5;
  c.mtd = 2.5;
  c.delay_p10 = 0;
  c.delay_p90 = 5;
  s.cells.push_back(c);
  c.model = CovarianceModelKind::M0;
  c.pd = 1.0 / 3.0;
  s.cells.push_back(c);
  for (int d = 0; d <= 3; ++d)
    s.cdf.push_back({CovarianceModelKind::Md, d, d / 3.0});
  PfaCheck pc;
  pc.model = CovarianceModelKind::Md;
  pc.snr_db = 10.0;
  pc.h1 = c.h1;
  pc.n_trials = 7;
  pc.n_false_alarms = 1;
  pc.pfa = 1.0 / 7.0;
  s.pfa_checks.push_back(pc);

  const std::string dir =
      (std::filesystem::temp_directory_path() / "mpt_test_metrics").string();
  write_metrics(s, dir);
  const MetricsSummary r = read_metrics(dir);
  std::filesystem::remove_all(dir);

  REQUIRE(r.cells.size() == s.cells.size());
  for (size_t i = 0; i < s.cells.size(); ++i) {
    CHECK(r.cells[i].model == s.cells[i].model);
    CHECK(r.cells[i].snr_db == s.cells[i].snr_db);
    CHECK(r.cells[i].h1 == s.cells[i].h1);
    CHECK(r.cells[i].n_trials == s.cells[i].n_trials);
    CHECK(r.cells[i].n_detected == s.cells[i].n_detected);
    CHECK(r.cells[i].n_failed == s.cells[i].n_failed);
    CHECK(r.cells[i].pd == s.cells[i].pd);
    CHECK(r.cells[i].mtd == s.cells[i].mtd);
  }
  REQUIRE(r.cdf.size() == s.cdf.size());
  for (size_t i = 0; i < s.cdf.size(); ++i) {
    CHECK(r.cdf[i].delay == s.cdf[i].delay);
    CHECK(r.cdf[i].value == s.cdf[i].value);
  }
  REQUIRE(r.pfa_checks.size() == 1);
  CHECK(r.pfa_checks[0].pfa == pc.pfa);
  CHECK(r.pfa_checks[0].h1 == pc.h1);
  CHECK(r.pfa_checks[0].n_false_alarms == 1);
}

TEST_CASE("tiny end-to-end sweep produces coherent outputs") {
  ExperimentConfig cfg = tiny_config();
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "mpt_test_sweep").string();
  const MetricsSummary s = run_sweep(cfg);
  REQUIRE(s.cells.size() == 1);
  CHECK(s.cells[0].n_trials == cfg.n_mc);
  CHECK(s.cells[0].pd >= 0.0);
  CHECK(s.cells[0].pd <= 1.0);
  REQUIRE(s.pfa_checks.size() == 1);
  CHECK(s.pfa_checks[0].n_trials <= cfg.n_mc);
  // CDF plateau equals Pd at the reference SNR.
  REQUIRE(!s.cdf.empty());
  CHECK(s.cdf.back().value == doctest::Approx(s.cells[0].pd));
  for (const char* f : {"pd_vs_snr.csv", "mtd_vs_snr.csv", "cdf_delay.csv",
                        "pfa_check.csv", "pd_vs_snr.svg", "mtd_vs_snr.svg",
                        "cdf_delay.svg"})
    CHECK(std::filesystem::exists(cfg.output_dir + "/" + f));
  std::filesystem::remove_all(cfg.output_dir);
}
