// Gaussian basis dictionary, measurement matrix H = S*B, and the four
// heteroscedastic measurement covariance models.
#pragma once

#include "signals.hpp"

namespace mpt {

struct ChannelBasis {
  int n_lags = 0;   // N_l
  int n_basis = 0;  // M
  double dt_s = 0.0;
  VectorXd centers_s;  // mu_m
  double scale_s = 0.0;  // sigma_m
  MatrixXd B;  // N_l x M
  MatrixXd H;  // N x M, H = S*B
};

enum class CovarianceModelKind { M0, Mc, Md, Mcd };

const char* model_name(CovarianceModelKind kind);
CovarianceModelKind model_from_name(const std::string& name);

// Number of hyperparameters beyond sigma_q^2.
int extra_param_count(CovarianceModelKind kind);
bool uses_sigma_c(CovarianceModelKind kind);
bool uses_sigma_d(CovarianceModelKind kind);

struct Hyperparams {
  double sigma_q2 = 0.0;
  double sigma_c2 = 0.0;
  double sigma_d2 = 0.0;
  double sigma_e2 = 1.0;  // known ambient noise power, never learned

  void validate() const;
};

// Centers at cell midpoints by default; endpoints-inclusive spacing optional.
ChannelBasis build_basis(double dt_s, int n_lags, int n_basis,
                         double bandwidth_hz, const ConvolutionOperator& s_op,
                         bool endpoint_centers = false);

// a = B * theta
VectorXd amplitudes_from_state(const ChannelBasis& basis, const VectorXd& theta);

// Background covariance factor G such that R = sigma_e^2 I + G G^T.
// Columns: sigma_c * a_l * u_l for active lags, then sigma_d * (U a).
// Empty (N x 0) for M0.
MatrixXd covariance_background_factor(CovarianceModelKind kind,
                                      const Hyperparams& hp,
                                      const ChannelBasis& basis,
                                      const ConvolutionOperator& u_op,
                                      const VectorXd& theta);

// Dense N x N covariance R_M(theta).
MatrixXd covariance(CovarianceModelKind kind, const Hyperparams& hp,
                    const ChannelBasis& basis, const ConvolutionOperator& u_op,
                    const VectorXd& theta);

// Lags kept in the rank-1 sum of Sigma_c: |a_l| > 1e-12 * max|a|.
std::vector<int> active_lags(const VectorXd& a);

}  // namespace mpt
