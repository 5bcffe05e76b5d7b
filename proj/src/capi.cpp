#include "mptrack.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "harness.hpp"

using nlohmann::json;

struct mpt_config {
  mpt::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return MPT_OK;
  } catch (const std::invalid_argument& err) {
    g_last_error = err.what();
    return MPT_ERR_CONFIG;
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return MPT_ERR_NUMERICAL;
  }
}

mpt::CovarianceModelKind parse_model(const char* model) {
  if (!model) throw std::invalid_argument("model name is null");
  return mpt::model_from_name(model);
}

json hp_to_json(const mpt::Hyperparams& hp) {
  return {{"sigma_q2", hp.sigma_q2},
          {"sigma_c2", hp.sigma_c2},
          {"sigma_d2", hp.sigma_d2},
          {"sigma_e2", hp.sigma_e2}};
}

}  // namespace

extern "C" {

const char* mpt_last_error(void) { return g_last_error.c_str(); }

void mpt_string_free(char* s) { std::free(s); }

int mpt_config_load(const char* path, mpt_config** out) {
  return guarded([&] {
    if (!path || !out) throw std::invalid_argument("null argument");
    *out = new mpt_config{mpt::load_config(path)};
  });
}

int mpt_config_parse(const char* json_text, mpt_config** out) {
  return guarded([&] {
    if (!json_text || !out) throw std::invalid_argument("null argument");
    *out = new mpt_config{mpt::config_from_json_text(json_text)};
  });
}

void mpt_config_free(mpt_config* cfg) { delete cfg; }

int mpt_run_simulate(const mpt_config* cfg, const char* out_dir) {
  return guarded([&] {
    if (!cfg || !out_dir) throw std::invalid_argument("null argument");
    const mpt::ExperimentConfig& c = cfg->cfg;
    const mpt::Problem problem(c);
    std::vector<mpt::PingRecord> pings =
        mpt::simulate_background(c, problem, mpt::TrialTag::Simulate, 0);
    std::filesystem::create_directories(out_dir);
    const std::string dir(out_dir);
    mpt::save_pings(dir + "/pings.csv", pings, problem.s().dt_s);
    json meta = {{"n_pings", c.scenario.n_pings},
                 {"n_samples", c.n_samples},
                 {"sample_hz", c.waveform.sample_hz},
                 {"inr_db", c.inr_db},
                 {"scenario", mpt::scenario_name(c.scenario.kind)},
                 {"master_seed", c.master_seed}};
    std::ofstream(dir + "/simulate.json") << meta.dump(2) << "\n";
  });
}

int mpt_run_fit(const mpt_config* cfg, const char* model, char** result_json) {
  return guarded([&] {
    if (!cfg || !result_json) throw std::invalid_argument("null argument");
    const mpt::CovarianceModelKind kind = parse_model(model);
    const mpt::ExperimentConfig& c = cfg->cfg;
    const mpt::Problem problem(c);
    std::vector<mpt::PingRecord> pings =
        mpt::simulate_background(c, problem, mpt::TrialTag::Simulate, 0);
    const std::vector<mpt::PingRecord> train(pings.begin(),
                                             pings.begin() + c.train_pings);
    const mpt::Hyperparams init =
        mpt::default_init_hp(train, problem.tracker(), c.sigma_e2);
    const mpt::FitResult fr =
        mpt::fit(train, kind, problem.tracker(), c.sigma_e2, init);
    json out = {{"model", mpt::model_name(fr.kind)},
                {"loglik", fr.loglik},
                {"n_evals", fr.n_evals},
                {"converged", fr.converged},
                {"hyperparams", hp_to_json(fr.hp_hat)}};
    *result_json = dup_string(out.dump(2));
  });
}

int mpt_run_significance(const mpt_config* cfg, const double* inr_grid_db,
                         size_t n_inr, char** result_json) {
  return guarded([&] {
    if (!cfg || !result_json || (!inr_grid_db && n_inr > 0))
      throw std::invalid_argument("null argument");
    const mpt::ExperimentConfig& c = cfg->cfg;
    std::vector<double> grid(inr_grid_db, inr_grid_db + n_inr);
    if (grid.empty()) grid.push_back(c.inr_db);
    const std::vector<mpt::SignificanceRow> rows =
        mpt::run_significance_sweep(c, grid);

    // Rejection rate per (scenario, inr, model).
    std::map<std::string, std::pair<int, int>> tally;  // key -> (reject, n)
    for (const mpt::SignificanceRow& r : rows) {
      auto& t = tally[r.scenario + "," + mpt::format_double(r.inr_db) + "," +
                      r.model];
      t.second += 1;
      if (r.significant) t.first += 1;
    }
    json cells = json::array();
    for (const auto& [key, t] : tally) {
      const auto c1 = key.find(','), c2 = key.rfind(',');
      cells.push_back({{"scenario", key.substr(0, c1)},
                       {"inr_db", std::stod(key.substr(c1 + 1, c2 - c1 - 1))},
                       {"model", key.substr(c2 + 1)},
                       {"n_replicates", t.second},
                       {"rejection_rate",
                        t.second ? static_cast<double>(t.first) / t.second
                                 : 0.0}});
    }
    json out = {{"alpha", c.alpha},
                {"csv", c.output_dir + "/significance.csv"},
                {"cells", cells}};
    *result_json = dup_string(out.dump(2));
  });
}

int mpt_run_detect(const mpt_config* cfg, const char* model, double snr_db,
                   char** result_json) {
  return guarded([&] {
    if (!cfg || !result_json) throw std::invalid_argument("null argument");
    const mpt::CovarianceModelKind kind = parse_model(model);
    const mpt::ExperimentConfig& c = cfg->cfg;
    const mpt::Problem problem(c);

    std::vector<mpt::Dataset> cal(c.n_mc), det(c.n_mc);
    mpt::parallel_for(c.n_mc, [&](int t) {
      cal[t] = mpt::prepare_dataset(c, problem, mpt::TrialTag::Calibration, t,
                                    {kind});
      det[t] = mpt::prepare_dataset(c, problem, mpt::TrialTag::Detection, t,
                                    {kind});
    });
    const mpt::TargetTrack track = mpt::scaled_target_track(c, problem, snr_db);
    const double h1 = mpt::calibrate_cell(c, problem, cal, kind, track);

    int n_failed = 0, n_detected = 0;
    double delay_sum = 0.0;
    for (int t = 0; t < c.n_mc; ++t) {
      if (det[t].failed) {
        ++n_failed;
        continue;
      }
      const mpt::DetectionOutcome out =
          mpt::run_dataset_slrt(c, problem, det[t], kind, track, h1, true);
      if (out.detected) {
        ++n_detected;
        delay_sum += out.delay;
      }
    }
    const int n_ok = c.n_mc - n_failed;
    json out = {{"model", mpt::model_name(kind)},
                {"snr_db", snr_db},
                {"h1", h1},
                {"n_trials", c.n_mc},
                {"n_failed", n_failed},
                {"n_detected", n_detected},
                {"pd", n_ok ? static_cast<double>(n_detected) / n_ok : 0.0},
                {"mtd", n_detected ? delay_sum / n_detected : -1.0}};
    *result_json = dup_string(out.dump(2));
  });
}

int mpt_run_mc(const mpt_config* cfg, char** result_json) {
  return guarded([&] {
    if (!cfg || !result_json) throw std::invalid_argument("null argument");
    const mpt::ExperimentConfig& c = cfg->cfg;
    const mpt::MetricsSummary summary = mpt::run_sweep(c);
    json cells = json::array();
    for (const mpt::CellMetrics& cell : summary.cells)
      cells.push_back({{"model", mpt::model_name(cell.model)},
                       {"snr_db", cell.snr_db},
                       {"h1", cell.h1},
                       {"n_trials", cell.n_trials},
                       {"n_detected", cell.n_detected},
                       {"n_failed", cell.n_failed},
                       {"pd", cell.pd},
                       {"mtd", cell.mtd}});
    json pfa = json::array();
    for (const mpt::PfaCheck& check : summary.pfa_checks)
      pfa.push_back({{"model", mpt::model_name(check.model)},
                     {"snr_db", check.snr_db},
                     {"h1", check.h1},
                     {"n_trials", check.n_trials},
                     {"n_false_alarms", check.n_false_alarms},
                     {"pfa", check.pfa}});
    json out = {{"output_dir", c.output_dir},
                {"cdf_snr_db", summary.cdf_snr_db},
                {"cells", cells},
                {"pfa_checks", pfa}};
    *result_json = dup_string(out.dump(2));
  });
}

}  // extern "C"
