// Hyperparameter MLE over the marginal likelihood, likelihood-ratio
// statistics between nested covariance models, and chi-square p-values.
#pragma once

#include "nelder_mead.hpp"
#include "tracker.hpp"

namespace mpt {

struct FitResult {
  CovarianceModelKind kind = CovarianceModelKind::M0;
  Hyperparams hp_hat;
  double loglik = 0.0;
  int n_evals = 0;
  bool converged = false;
};

struct SignificanceResult {
  CovarianceModelKind kind = CovarianceModelKind::M0;
  double statistic_2t = 0.0;  // recorded raw, may be slightly negative
  int dof = 0;
  double p_value = 1.0;       // upper tail at max(2T, 0)
  bool significant = false;
};

struct FitOptions {
  double ftol = 1e-3;
  int max_evals_per_dim = 50;  // per restart
  // Additional starting points, one optimizer run each (no +/- decade
  // shifts). Used to seed an extended-model fit from the null optimum so the
  // likelihood-ratio statistic cannot go far negative by optimizer failure.
  std::vector<Hyperparams> extra_inits;
};

// Maximizes the filter marginal likelihood over the kind-appropriate subset
// of {sigma_q^2, sigma_c^2, sigma_d^2} in log-variance coordinates.
// Three deterministic restarts: init, 10x init, 0.1x init.
FitResult fit(const std::vector<PingRecord>& records,
              CovarianceModelKind kind, const EkfTracker& tracker,
              double sigma_e2, const Hyperparams& init_hp,
              const FitOptions& opts = {});

// Data-driven starting point for fit(): process variance from the change
// between the first two per-ping WLS solutions.
Hyperparams default_init_hp(const std::vector<PingRecord>& records,
                            const EkfTracker& tracker, double sigma_e2);

SignificanceResult llr_statistic(const FitResult& fit_ext,
                                 const FitResult& fit_null);

// Starting point for an extended-model fit on the null-model boundary:
// the null's sigma_q^2 with vanishing extension variances.
Hyperparams null_seed(const FitResult& fit_null, double sigma_e2);

// Upper-tail probability of chi-square with 1 or 2 degrees of freedom.
double chi2_sf(double x, int dof);

std::vector<SignificanceResult> significance_test(
    const std::vector<PingRecord>& records, const EkfTracker& tracker,
    double sigma_e2, const Hyperparams& init_hp, double alpha,
    const FitOptions& opts = {});

}  // namespace mpt
