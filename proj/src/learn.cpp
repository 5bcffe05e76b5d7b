#include "learn.hpp"

#include <cmath>
#include <limits>

namespace mpt {

namespace {

// Map the optimizer vector (log variances) onto a full Hyperparams set.
Hyperparams unpack(const Eigen::VectorXd& x, CovarianceModelKind kind,
                   double sigma_e2) {
  Hyperparams hp;
  hp.sigma_e2 = sigma_e2;
  hp.sigma_q2 = std::exp(x[0]);
  int i = 1;
  if (uses_sigma_c(kind)) hp.sigma_c2 = std::exp(x[i++]);
  if (uses_sigma_d(kind)) hp.sigma_d2 = std::exp(x[i++]);
  return hp;
}

Eigen::VectorXd pack(const Hyperparams& hp, CovarianceModelKind kind) {
  Eigen::VectorXd x(1 + extra_param_count(kind));
  auto safe_log = [](double v) { return std::log(std::max(v, 1e-300)); };
  x[0] = safe_log(hp.sigma_q2);
  int i = 1;
  if (uses_sigma_c(kind)) x[i++] = safe_log(hp.sigma_c2);
  if (uses_sigma_d(kind)) x[i++] = safe_log(hp.sigma_d2);
  return x;
}

}  // namespace

Hyperparams default_init_hp(const std::vector<PingRecord>& records,
                            const EkfTracker& tracker, double sigma_e2) {
  if (records.size() < 2)
    throw std::invalid_argument("default_init_hp: need at least 2 records");
  const VectorXd t0 = tracker.wls_init(records[0].y).mean;
  const VectorXd t1 = tracker.wls_init(records[1].y).mean;
  Hyperparams hp;
  hp.sigma_e2 = sigma_e2;
  hp.sigma_q2 = std::max((t1 - t0).squaredNorm() / t0.size(), 1e-12);
  hp.sigma_c2 = 1e-7;
  hp.sigma_d2 = 1e-7;
  return hp;
}

FitResult fit(const std::vector<PingRecord>& records,
              CovarianceModelKind kind, const EkfTracker& tracker,
              double sigma_e2, const Hyperparams& init_hp,
              const FitOptions& opts) {
  if (records.size() < 2)
    throw std::invalid_argument("fit: need at least 2 records");
  if (!(sigma_e2 > 0.0))
    throw std::invalid_argument("fit: sigma_e2 must be > 0");

  const FilterState init_state = tracker.wls_init(records[0].y);
  int total_evals = 0;
  auto objective = [&](const Eigen::VectorXd& x) -> double {
    ++total_evals;
    try {
      return -tracker.run_loglik(records, unpack(x, kind, sigma_e2), kind,
                                 init_state);
    } catch (const numerical_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const int dim = 1 + extra_param_count(kind);
  NelderMeadOptions nm;
  nm.initial_step = std::log(10.0);
  nm.ftol = opts.ftol;
  nm.max_evals = opts.max_evals_per_dim * dim;

  const Eigen::VectorXd x_init = pack(init_hp, kind);
  const double shift = std::log(10.0);
  std::vector<Eigen::VectorXd> starts = {
      x_init, x_init.array() + shift, x_init.array() - shift};
  for (const Hyperparams& extra : opts.extra_inits)
    starts.push_back(pack(extra, kind));

  NelderMeadResult best;
  best.fval = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (const auto& x0 : starts) {
    auto wrapped = [&](const Eigen::VectorXd& x) { return objective(x); };
    NelderMeadResult r = nelder_mead(wrapped, x0, nm);
    any_converged = any_converged || (r.converged && std::isfinite(r.fval));
    if (r.fval < best.fval) best = r;
  }
  if (!std::isfinite(best.fval))
    throw numerical_error("fit: likelihood evaluation failed for all restarts");

  // Maximizer dominance over the starting point.
  const double f_init = objective(x_init);
  if (f_init < best.fval) {
    best.fval = f_init;
    best.x = x_init;
  }

  FitResult result;
  result.kind = kind;
  result.hp_hat = unpack(best.x, kind, sigma_e2);
  result.loglik = -best.fval;
  result.n_evals = total_evals;
  result.converged = any_converged;
  return result;
}

double chi2_sf(double x, int dof) {
  if (x < 0.0) throw std::invalid_argument("chi2_sf: x must be >= 0");
  if (dof == 1) return std::erfc(std::sqrt(x / 2.0));
  if (dof == 2) return std::exp(-x / 2.0);
  throw std::invalid_argument("chi2_sf: dof must be 1 or 2");
}

SignificanceResult llr_statistic(const FitResult& fit_ext,
                                 const FitResult& fit_null) {
  if (fit_null.kind != CovarianceModelKind::M0)
    throw std::invalid_argument("llr_statistic: null fit must be M0");
  if (fit_ext.kind == CovarianceModelKind::M0)
    throw std::invalid_argument("llr_statistic: extended fit must not be M0");
  SignificanceResult res;
  res.kind = fit_ext.kind;
  res.statistic_2t = 2.0 * (fit_ext.loglik - fit_null.loglik);
  res.dof = extra_param_count(fit_ext.kind);
  res.p_value = chi2_sf(std::max(res.statistic_2t, 0.0), res.dof);
  return res;
}

Hyperparams null_seed(const FitResult& fit_null, double sigma_e2) {
  Hyperparams seed;
  seed.sigma_e2 = sigma_e2;
  seed.sigma_q2 = fit_null.hp_hat.sigma_q2;
  seed.sigma_c2 = 1e-12;
  seed.sigma_d2 = 1e-12;
  return seed;
}

std::vector<SignificanceResult> significance_test(
    const std::vector<PingRecord>& records, const EkfTracker& tracker,
    double sigma_e2, const Hyperparams& init_hp, double alpha,
    const FitOptions& opts) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("significance_test: alpha must be in (0,1]");

  auto fit_model = [&](CovarianceModelKind kind) {
    try {
      return fit(records, kind, tracker, sigma_e2, init_hp, opts);
    } catch (const numerical_error& err) {
      throw numerical_error(std::string("significance_test[") +
                            model_name(kind) + "]: " + err.what());
    }
  };

  const FitResult null_fit = fit_model(CovarianceModelKind::M0);
  FitOptions ext_opts = opts;
  ext_opts.extra_inits.push_back(null_seed(null_fit, sigma_e2));

  std::vector<SignificanceResult> results;
  for (CovarianceModelKind kind : {CovarianceModelKind::Mc,
                                   CovarianceModelKind::Md,
                                   CovarianceModelKind::Mcd}) {
    FitResult ext;
    try {
      ext = fit(records, kind, tracker, sigma_e2, init_hp, ext_opts);
    } catch (const numerical_error& err) {
      throw numerical_error(std::string("significance_test[") +
                            model_name(kind) + "]: " + err.what());
    }
    SignificanceResult res = llr_statistic(ext, null_fit);
    res.significant = res.p_value <= alpha;
    results.push_back(res);
  }
  return results;
}

}  // namespace mpt
