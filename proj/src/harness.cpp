#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace mpt {

namespace fs = std::filesystem;

Problem::Problem(const ExperimentConfig& cfg) {
  cfg.validate();
  s_ = generate_lfm(cfg.waveform);
  u_ = companion_waveform(cfg.waveform);
  s_op_ = ConvolutionOperator{s_, cfg.n_samples, cfg.n_lags};
  u_op_ = ConvolutionOperator{u_, cfg.n_samples, cfg.n_lags};
  basis_ = build_basis(s_.dt_s, cfg.n_lags, cfg.n_basis,
                       cfg.waveform.bandwidth_hz, s_op_);
  tracker_ = std::make_unique<EkfTracker>(basis_, u_op_);
}

std::vector<PingRecord> simulate_background(const ExperimentConfig& cfg,
                                            const Problem& problem,
                                            TrialTag tag, int trial_id) {
  Rng rng = make_rng(cfg.master_seed, static_cast<uint64_t>(tag),
                     static_cast<uint64_t>(trial_id));
  ArrivalSet arrivals = image_method_arrivals(cfg.scenario);

  const VectorXd xb0 =
      render_background(arrivals, problem.s(), cfg.n_samples);
  const double gb = gain_for_level(xb0, cfg.sigma_e2, cfg.inr_db);
  double mean_amp = 0.0;
  for (Arrival& a : arrivals.arrivals) {
    a.amplitude *= gb;
    mean_amp += std::abs(a.amplitude);
  }
  mean_amp /= arrivals.arrivals.size();

  // The walk std knob is relative to the typical INR-scaled amplitude, and
  // frozen entirely in the static scenario so that only noise varies there.
  ScenarioConfig sc = cfg.scenario;
  sc.amp_walk_std = cfg.scenario.kind == ScenarioKind::Static
                        ? 0.0
                        : cfg.scenario.amp_walk_std * mean_amp;

  std::vector<PingRecord> records;
  records.reserve(sc.n_pings);
  ArrivalSet current = arrivals;
  for (int k = 1; k <= sc.n_pings; ++k) {
    current = evolve_ping(current, sc, k, rng);
    records.push_back(render_ping(current, problem.s(), cfg.n_samples,
                                  cfg.sigma_e2, nullptr, k, rng));
  }
  return records;
}

TargetTrack scaled_target_track(const ExperimentConfig& cfg,
                                const Problem& problem, double snr_db) {
  TargetTrack track = make_target_track(
      cfg.target_kind, problem.s(), cfg.n_samples, cfg.scenario.n_pings,
      cfg.onset, cfg.pri_s, cfg.target_delay_s, cfg.scenario.guard_s);
  const double go =
      gain_for_level(track.waveform(cfg.onset), cfg.sigma_e2, snr_db);
  track.amplitudes *= go;
  for (VectorXd& w : track.waveforms) w *= go;
  return track;
}

Dataset prepare_dataset(const ExperimentConfig& cfg, const Problem& problem,
                        TrialTag tag, int trial_id,
                        const std::vector<CovarianceModelKind>& models) {
  Dataset ds;
  ds.trial_id = trial_id;
  try {
    std::vector<PingRecord> pings =
        simulate_background(cfg, problem, tag, trial_id);
    const std::vector<PingRecord> train(pings.begin(),
                                        pings.begin() + cfg.train_pings);
    const Hyperparams init_hp =
        default_init_hp(train, problem.tracker(), cfg.sigma_e2);
    for (CovarianceModelKind model : models) {
      FitResult fr =
          fit(train, model, problem.tracker(), cfg.sigma_e2, init_hp);
      // Carry the filter state across the training/detection boundary.
      auto [outputs, loglik] = problem.tracker().run(
          train, fr.hp_hat, model, problem.tracker().wls_init(train[0].y));
      (void)loglik;
      ds.post_train[model] = outputs.back().state;
      ds.fits[model] = std::move(fr);
    }
    ds.detect_records.assign(pings.begin() + (cfg.onset - 1), pings.end());
  } catch (const std::exception& err) {
    ds.failed = true;
    ds.error = err.what();
  }
  return ds;
}

DetectionOutcome run_dataset_slrt(const ExperimentConfig& cfg,
                                  const Problem& problem,
                                  const Dataset& dataset,
                                  CovarianceModelKind model,
                                  const TargetTrack& track, double h1,
                                  bool inject_target) {
  if (dataset.failed)
    throw numerical_error("run_dataset_slrt: dataset failed: " + dataset.error);
  std::vector<PingRecord> records = dataset.detect_records;
  if (inject_target)
    for (PingRecord& rec : records) rec.y += track.waveform(rec.ping_index);

  SlrtConfig slrt;
  slrt.h0 = 0.0;
  slrt.h1 = h1;
  slrt.restart_on_lower = true;
  return slrt_run(records, dataset.fits.at(model).hp_hat, model,
                  problem.tracker(), track, slrt, cfg.onset,
                  dataset.post_train.at(model));
}

double calibrate_cell(const ExperimentConfig& cfg, const Problem& problem,
                      const std::vector<Dataset>& cal_datasets,
                      CovarianceModelKind model, const TargetTrack& track) {
  std::vector<double> maxima;
  maxima.reserve(cal_datasets.size());
  for (const Dataset& ds : cal_datasets) {
    if (ds.failed) continue;
    DetectionOutcome out =
        run_dataset_slrt(cfg, problem, ds, model, track,
                         std::numeric_limits<double>::infinity(), false);
    maxima.push_back(out.max_g);
  }
  return calibrate_h1_from_stats(std::move(maxima), cfg.pfa);
}

TrialResult run_trial(const ExperimentConfig& cfg, const Problem& problem,
                      CovarianceModelKind model, double snr_db, int trial_id,
                      double h1) {
  TrialResult result;
  Dataset ds =
      prepare_dataset(cfg, problem, TrialTag::Detection, trial_id, {model});
  if (ds.failed) {
    result.failed = true;
    result.error = ds.error;
    return result;
  }
  result.fit = ds.fits.at(model);
  const TargetTrack track = scaled_target_track(cfg, problem, snr_db);
  try {
    result.detection =
        run_dataset_slrt(cfg, problem, ds, model, track, h1, true);
  } catch (const std::exception& err) {
    result.failed = true;
    result.error = err.what();
  }
  return result;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min<int>(
      n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

CellMetrics aggregate_cell(CovarianceModelKind model, double snr_db,
                           double h1, const std::vector<int>& delays,
                           int n_trials, int n_failed) {
  CellMetrics cell;
  cell.model = model;
  cell.snr_db = snr_db;
  cell.h1 = h1;
  cell.n_trials = n_trials;
  cell.n_failed = n_failed;
  cell.n_detected = static_cast<int>(delays.size());
  cell.delays = delays;
  const int n_ok = n_trials - n_failed;
  cell.pd = n_ok > 0 ? static_cast<double>(cell.n_detected) / n_ok : 0.0;
  if (!delays.empty()) {
    std::vector<int> sorted = delays;
    std::sort(sorted.begin(), sorted.end());
    const int n = static_cast<int>(sorted.size());
    cell.mtd = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    auto rank = [&](double q) {
      return sorted[std::max(0, static_cast<int>(std::ceil(q * n)) - 1)];
    };
    cell.delay_p10 = rank(0.10);
    cell.delay_p90 = rank(0.90);
  } else {
    cell.mtd = std::numeric_limits<double>::quiet_NaN();
    cell.delay_p10 = std::numeric_limits<double>::quiet_NaN();
    cell.delay_p90 = std::numeric_limits<double>::quiet_NaN();
  }
  return cell;
}

}  // namespace

MetricsSummary run_sweep(const ExperimentConfig& cfg) {
  const Problem problem(cfg);

  std::vector<Dataset> cal(cfg.n_mc), det(cfg.n_mc);
  parallel_for(cfg.n_mc, [&](int t) {
    cal[t] = prepare_dataset(cfg, problem, TrialTag::Calibration, t,
                             cfg.models);
  });
  parallel_for(cfg.n_mc, [&](int t) {
    det[t] = prepare_dataset(cfg, problem, TrialTag::Detection, t,
                             cfg.models);
  });

  MetricsSummary summary;
  summary.cdf_snr_db = cfg.cdf_snr_db;
  const int horizon = cfg.scenario.n_pings - cfg.onset;

  for (double snr : cfg.snr_grid_db) {
    const TargetTrack track = scaled_target_track(cfg, problem, snr);
    for (CovarianceModelKind model : cfg.models) {
      const double h1 = calibrate_cell(cfg, problem, cal, model, track);
      std::vector<int> delays;
      std::vector<DetectionOutcome> outcomes(cfg.n_mc);
      std::vector<char> ok(cfg.n_mc, 0);
      parallel_for(cfg.n_mc, [&](int t) {
        if (det[t].failed) return;
        outcomes[t] =
            run_dataset_slrt(cfg, problem, det[t], model, track, h1, true);
        ok[t] = 1;
      });
      int n_failed = 0;
      for (int t = 0; t < cfg.n_mc; ++t) {
        if (!ok[t]) {
          ++n_failed;
          continue;
        }
        if (outcomes[t].detected) delays.push_back(outcomes[t].delay);
      }
      CellMetrics cell =
          aggregate_cell(model, snr, h1, delays, cfg.n_mc, n_failed);
      if (snr == cfg.cdf_snr_db) {
        // False-alarm check on the same background draws without the target;
        // these trials are fresh with respect to the calibration set.
        std::vector<char> alarm(cfg.n_mc, 0), ok_fa(cfg.n_mc, 0);
        parallel_for(cfg.n_mc, [&](int t) {
          if (det[t].failed) return;
          DetectionOutcome out =
              run_dataset_slrt(cfg, problem, det[t], model, track, h1, false);
          alarm[t] = out.detected ? 1 : 0;
          ok_fa[t] = 1;
        });
        PfaCheck check;
        check.model = model;
        check.snr_db = snr;
        check.h1 = h1;
        for (int t = 0; t < cfg.n_mc; ++t) {
          if (!ok_fa[t]) continue;
          ++check.n_trials;
          check.n_false_alarms += alarm[t];
        }
        check.pfa = check.n_trials > 0
                        ? static_cast<double>(check.n_false_alarms) /
                              check.n_trials
                        : 0.0;
        summary.pfa_checks.push_back(check);
      }
      if (snr == cfg.cdf_snr_db) {
        const int n_ok = cell.n_trials - cell.n_failed;
        for (int d = 0; d <= horizon; ++d) {
          CdfPoint pt;
          pt.model = model;
          pt.delay = d;
          int count = 0;
          for (int dl : cell.delays)
            if (dl <= d) ++count;
          pt.value = n_ok > 0 ? static_cast<double>(count) / n_ok : 0.0;
          summary.cdf.push_back(pt);
        }
      }
      summary.cells.push_back(std::move(cell));
    }
  }

  fs::create_directories(cfg.output_dir);
  write_metrics(summary, cfg.output_dir);
  write_plots(summary, cfg.output_dir);
  return summary;
}

std::vector<SignificanceRow> run_significance_sweep(
    const ExperimentConfig& cfg, const std::vector<double>& inr_grid_db,
    const std::vector<ScenarioKind>& scenarios) {
  std::vector<SignificanceRow> rows;
  std::mutex rows_mu;
  for (size_t si = 0; si < scenarios.size(); ++si) {
    for (size_t ii = 0; ii < inr_grid_db.size(); ++ii) {
      ExperimentConfig sub = cfg;
      sub.scenario.kind = scenarios[si];
      sub.inr_db = inr_grid_db[ii];
      sub.scenario.n_pings = cfg.train_pings;
      sub.onset = cfg.train_pings;  // keep validate() happy; no detection here
      sub.train_pings = cfg.train_pings - 1;
      const Problem problem(sub);

      std::vector<std::vector<SignificanceRow>> cell_rows(cfg.n_mc);
      parallel_for(cfg.n_mc, [&](int rep) {
        // Distinct stream per (scenario, inr, replicate).
        ExperimentConfig trial_cfg = sub;
        trial_cfg.master_seed =
            derive_seed(cfg.master_seed,
                        static_cast<uint64_t>(TrialTag::Significance),
                        si * 1000 + ii);
        try {
          std::vector<PingRecord> pings = simulate_background(
              trial_cfg, problem, TrialTag::Significance, rep);
          const Hyperparams init_hp =
              default_init_hp(pings, problem.tracker(), cfg.sigma_e2);
          const FitResult fit_null =
              fit(pings, CovarianceModelKind::M0, problem.tracker(),
                  cfg.sigma_e2, init_hp);
          FitOptions ext_opts;
          ext_opts.extra_inits.push_back(null_seed(fit_null, cfg.sigma_e2));
          for (CovarianceModelKind ext :
               {CovarianceModelKind::Mc, CovarianceModelKind::Md,
                CovarianceModelKind::Mcd}) {
            const FitResult fit_ext = fit(pings, ext, problem.tracker(),
                                          cfg.sigma_e2, init_hp, ext_opts);
            SignificanceResult res = llr_statistic(fit_ext, fit_null);
            res.significant = res.p_value <= cfg.alpha;
            SignificanceRow row;
            row.scenario = scenario_name(scenarios[si]);
            row.inr_db = inr_grid_db[ii];
            row.replicate = rep;
            row.model = model_name(ext);
            row.statistic_2t = res.statistic_2t;
            row.dof = res.dof;
            row.p_value = res.p_value;
            row.significant = res.significant;
            row.sigma_q2 = fit_ext.hp_hat.sigma_q2;
            row.sigma_c2 = fit_ext.hp_hat.sigma_c2;
            row.sigma_d2 = fit_ext.hp_hat.sigma_d2;
            row.loglik = fit_ext.loglik;
            cell_rows[rep].push_back(row);
          }
        } catch (const numerical_error&) {
          // Replicate dropped; the CSV simply has no rows for it.
        }
      });
      std::lock_guard<std::mutex> lock(rows_mu);
      for (auto& rr : cell_rows)
        rows.insert(rows.end(), rr.begin(), rr.end());
    }
  }
  fs::create_directories(cfg.output_dir);
  write_significance_csv(rows, cfg.output_dir + "/significance.csv");
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metrics(const MetricsSummary& summary, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/pd_vs_snr.csv");
    out << "model,snr_db,h1,n_trials,n_detected,n_failed,pd\n";
    for (const CellMetrics& c : summary.cells)
      out << model_name(c.model) << "," << format_double(c.snr_db) << ","
          << format_double(c.h1) << "," << c.n_trials << "," << c.n_detected
          << "," << c.n_failed << "," << format_double(c.pd) << "\n";
  }
  {
    std::ofstream out(dir + "/mtd_vs_snr.csv");
    out << "model,snr_db,mtd_pings,delay_p10,delay_p90\n";
    for (const CellMetrics& c : summary.cells)
      out << model_name(c.model) << "," << format_double(c.snr_db) << ","
          << format_double(c.mtd) << "," << format_double(c.delay_p10) << ","
          << format_double(c.delay_p90) << "\n";
  }
  {
    std::ofstream out(dir + "/cdf_delay.csv");
    out << "model,snr_db,delay,cdf\n";
    for (const CdfPoint& p : summary.cdf)
      out << model_name(p.model) << "," << format_double(summary.cdf_snr_db)
          << "," << p.delay << "," << format_double(p.value) << "\n";
  }
  {
    std::ofstream out(dir + "/pfa_check.csv");
    out << "model,snr_db,h1,n_trials,n_false_alarms,pfa\n";
    for (const PfaCheck& c : summary.pfa_checks)
      out << model_name(c.model) << "," << format_double(c.snr_db) << ","
          << format_double(c.h1) << "," << c.n_trials << ","
          << c.n_false_alarms << "," << format_double(c.pfa) << "\n";
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

MetricsSummary read_metrics(const std::string& dir) {
  MetricsSummary summary;
  {
    std::ifstream in(dir + "/pd_vs_snr.csv");
    if (!in) throw std::runtime_error("read_metrics: missing pd_vs_snr.csv");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      CellMetrics c;
      c.model = model_from_name(f.at(0));
      c.snr_db = std::stod(f.at(1));
      c.h1 = std::stod(f.at(2));
      c.n_trials = std::stoi(f.at(3));
      c.n_detected = std::stoi(f.at(4));
      c.n_failed = std::stoi(f.at(5));
      c.pd = std::stod(f.at(6));
      summary.cells.push_back(c);
    }
  }
  {
    std::ifstream in(dir + "/mtd_vs_snr.csv");
    if (!in) throw std::runtime_error("read_metrics: missing mtd_vs_snr.csv");
    std::string line;
    std::getline(in, line);
    size_t i = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (i >= summary.cells.size())
        throw std::runtime_error("read_metrics: row count mismatch");
      CellMetrics& c = summary.cells[i++];
      if (model_from_name(f.at(0)) != c.model ||
          std::stod(f.at(1)) != c.snr_db)
        throw std::runtime_error("read_metrics: cell order mismatch");
      c.mtd = std::stod(f.at(2));
      c.delay_p10 = std::stod(f.at(3));
      c.delay_p90 = std::stod(f.at(4));
    }
  }
  {
    std::ifstream in(dir + "/cdf_delay.csv");
    if (!in) throw std::runtime_error("read_metrics: missing cdf_delay.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      CdfPoint p;
      p.model = model_from_name(f.at(0));
      summary.cdf_snr_db = std::stod(f.at(1));
      p.delay = std::stoi(f.at(2));
      p.value = std::stod(f.at(3));
      summary.cdf.push_back(p);
    }
  }
  {
    std::ifstream in(dir + "/pfa_check.csv");
    if (!in) throw std::runtime_error("read_metrics: missing pfa_check.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      PfaCheck c;
      c.model = model_from_name(f.at(0));
      c.snr_db = std::stod(f.at(1));
      c.h1 = std::stod(f.at(2));
      c.n_trials = std::stoi(f.at(3));
      c.n_false_alarms = std::stoi(f.at(4));
      c.pfa = std::stod(f.at(5));
      summary.pfa_checks.push_back(c);
    }
  }
  return summary;
}

void write_significance_csv(const std::vector<SignificanceRow>& rows,
                            const std::string& path) {
  std::ofstream out(path);
  out << "scenario,inr_db,replicate,model,statistic_2t,dof,p_value,"
         "significant,sigma_q2,sigma_c2,sigma_d2,loglik\n";
  for (const SignificanceRow& r : rows)
    out << r.scenario << "," << format_double(r.inr_db) << "," << r.replicate
        << "," << r.model << "," << format_double(r.statistic_2t) << ","
        << r.dof << "," << format_double(r.p_value) << ","
        << (r.significant ? 1 : 0) << "," << format_double(r.sigma_q2) << ","
        << format_double(r.sigma_c2) << "," << format_double(r.sigma_d2)
        << "," << format_double(r.loglik) << "\n";
}

namespace {

struct Series {
  std::string name;
  std::vector<double> xs, ys;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<Series>& series) {
  const int width = 640, height = 420, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.ys[i])) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out(path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
         "font-family='sans-serif' font-size='15'>" << title << "</text>\n";
  out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='"
      << width - margin << "' y2='" << height - margin
      << "' stroke='black'/>\n";
  out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + i * (xmax - xmin) / 4;
    const double yv = ymin + i * (ymax - ymin) / 4;
    out << "<text x='" << px(xv) << "' y='" << height - margin + 18
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
        << xv << "</text>\n";
    out << "<text x='" << margin - 8 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
        << yv << "</text>\n";
  }
  for (size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = colors[si % 4];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
    for (size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.ys[i])) continue;
      out << px(s.xs[i]) << "," << py(s.ys[i]) << " ";
    }
    out << "'/>\n";
    out << "<text x='" << width - margin + 4 << "' y='"
        << margin + 16 * static_cast<int>(si)
        << "' font-family='sans-serif' font-size='12' fill='" << color << "'>"
        << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_plots(const MetricsSummary& summary, const std::string& dir) {
  fs::create_directories(dir);
  std::vector<CovarianceModelKind> models;
  for (const CellMetrics& c : summary.cells)
    if (std::find(models.begin(), models.end(), c.model) == models.end())
      models.push_back(c.model);

  std::vector<Series> pd_series, mtd_series, cdf_series;
  for (CovarianceModelKind m : models) {
    Series pd{model_name(m), {}, {}}, mtd{model_name(m), {}, {}};
    for (const CellMetrics& c : summary.cells) {
      if (c.model != m) continue;
      pd.xs.push_back(c.snr_db);
      pd.ys.push_back(c.pd);
      mtd.xs.push_back(c.snr_db);
      mtd.ys.push_back(c.mtd);
    }
    pd_series.push_back(std::move(pd));
    mtd_series.push_back(std::move(mtd));

    Series cdf{model_name(m), {}, {}};
    for (const CdfPoint& p : summary.cdf) {
      if (p.model != m) continue;
      cdf.xs.push_back(p.delay);
      cdf.ys.push_back(p.value);
    }
    cdf_series.push_back(std::move(cdf));
  }
  write_svg_plot(dir + "/pd_vs_snr.svg", "Pd vs SNR [dB]", pd_series);
  write_svg_plot(dir + "/mtd_vs_snr.svg", "MTD [pings] vs SNR [dB]",
                 mtd_series);
  write_svg_plot(dir + "/cdf_delay.svg", "Detection-delay CDF", cdf_series);
}

}  // namespace mpt
