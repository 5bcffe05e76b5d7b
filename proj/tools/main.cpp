// Command-line front end; all work goes through the C API in mptrack.h.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mptrack.h"

namespace {

int fail(int code) {
  std::fprintf(stderr, "error: %s\n", mpt_last_error());
  return code;
}

int with_config(const std::string& path,
                const std::function<int(const mpt_config*)>& fn) {
  mpt_config* cfg = nullptr;
  const int rc = mpt_config_load(path.c_str(), &cfg);
  if (rc != MPT_OK) return fail(rc);
  const int result = fn(cfg);
  mpt_config_free(cfg);
  return result;
}

int print_result(int rc, char* json) {
  if (rc != MPT_OK) return fail(rc);
  std::printf("%s\n", json);
  mpt_string_free(json);
  return MPT_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipath background tracking and target detection pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", model = "md";
  double snr_db = 10.0;
  std::vector<double> inr_grid;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "Render one background-only trial to a replay CSV");
  add_config(sim);
  sim->add_option("--out", out_dir, "Output directory");

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit a covariance model on the training pings of one trial");
  add_config(fit);
  fit->add_option("--model", model, "One of m0, mc, md, mcd")->required();

  CLI::App* sig = app.add_subcommand(
      "significance", "Wilks model-significance sweep over scenarios and INR");
  add_config(sig);
  sig->add_option("--inr-grid", inr_grid, "INR grid in dB")->delimiter(',');

  CLI::App* det = app.add_subcommand(
      "detect", "Calibrate and run one detection cell (model, SNR)");
  add_config(det);
  det->add_option("--model", model, "One of m0, mc, md, mcd")->required();
  det->add_option("--snr", snr_db, "Target SNR in dB")->required();

  CLI::App* mc = app.add_subcommand(
      "mc", "Full Monte Carlo sweep over the configured models and SNR grid");
  add_config(mc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : MPT_ERR_CONFIG;
  }

  if (sim->parsed())
    return with_config(config_path, [&](const mpt_config* cfg) {
      const int rc = mpt_run_simulate(cfg, out_dir.c_str());
      if (rc != MPT_OK) return fail(rc);
      std::printf("wrote %s/pings.csv\n", out_dir.c_str());
      return MPT_OK;
    });

  if (fit->parsed())
    return with_config(config_path, [&](const mpt_config* cfg) {
      char* json = nullptr;
      const int rc = mpt_run_fit(cfg, model.c_str(), &json);
      return print_result(rc, json);
    });

  if (sig->parsed())
    return with_config(config_path, [&](const mpt_config* cfg) {
      char* json = nullptr;
      const int rc =
          mpt_run_significance(cfg, inr_grid.data(), inr_grid.size(), &json);
      return print_result(rc, json);
    });

  if (det->parsed())
    return with_config(config_path, [&](const mpt_config* cfg) {
      char* json = nullptr;
      const int rc = mpt_run_detect(cfg, model.c_str(), snr_db, &json);
      return print_result(rc, json);
    });

  return with_config(config_path, [&](const mpt_config* cfg) {
    char* json = nullptr;
    const int rc = mpt_run_mc(cfg, &json);
    return print_result(rc, json);
  });
}
