// Plug-in EKF for the background coefficients: random-walk time update,
// state-dependent measurement covariance evaluated at the predicted state,
// information-form posterior, and per-ping marginal log-likelihood
// increments.
#pragma once

#include <optional>
#include <utility>

#include "channel.hpp"

namespace mpt {

struct FilterState {
  VectorXd mean;   // theta_hat
  MatrixXd cov;    // P
  int ping_index = 0;
};

struct PingRecord {
  VectorXd y;
  int ping_index = 0;
};

struct StepOutput {
  FilterState state;
  VectorXd innovation;
  double nis = 0.0;           // nu' Sigma^-1 nu
  double logdet_sigma = 0.0;
  double loglik_increment = 0.0;  // -(nis + logdet)/2, 2*pi constant omitted
};

// Per-configuration workspace: caches H'H, U'U and U'H so that every step
// works in the low-dimensional factor space. The measurement covariance
// R = sigma_e^2 I + G G' is inverted through a core of size
// #active lags + 1 (matrix inversion and determinant lemmas), and the
// posterior comes from the information form P_post = (Pp^-1 + H'R^-1 H)^-1,
// which is positive definite by construction; innovation statistics follow
// from the same lemmas applied to Sigma = R + H Pp H'. The result is
// algebraically identical to the dense N x N Cholesky route.
class EkfTracker {
 public:
  EkfTracker(const ChannelBasis& basis, const ConvolutionOperator& u_op);

  static FilterState init(const VectorXd& prior_mean, double prior_var);

  // Regularized least-squares warm start from the first ping, with
  // prior_var = 10*(max|theta|+1)^2.
  FilterState wls_init(const VectorXd& y_first) const;

  StepOutput step(const FilterState& state, const PingRecord& rec,
                  const Hyperparams& hp, CovarianceModelKind kind,
                  const VectorXd* offset = nullptr) const;

  std::pair<std::vector<StepOutput>, double> run(
      const std::vector<PingRecord>& records, const Hyperparams& hp,
      CovarianceModelKind kind, const FilterState& init_state,
      const std::vector<VectorXd>* offsets = nullptr) const;

  // Same recursion, returns only the total log-likelihood.
  double run_loglik(const std::vector<PingRecord>& records,
                    const Hyperparams& hp, CovarianceModelKind kind,
                    const FilterState& init_state,
                    const std::vector<VectorXd>* offsets = nullptr) const;

  const ChannelBasis& basis() const { return *basis_; }
  const ConvolutionOperator& u_op() const { return *u_op_; }
  int n_samples() const { return u_op_->n_rows; }

 private:
  const ChannelBasis* basis_;       // not owned; immutable and shared
  const ConvolutionOperator* u_op_;
  MatrixXd hth_;  // M x M
  MatrixXd uth_;  // N_l x M
  MatrixXd utu_;  // N_l x N_l
};

}  // namespace mpt
