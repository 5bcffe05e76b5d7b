#include "channel.hpp"

#include <cmath>

namespace mpt {

const char* model_name(CovarianceModelKind kind) {
  switch (kind) {
    case CovarianceModelKind::M0: return "m0";
    case CovarianceModelKind::Mc: return "mc";
    case CovarianceModelKind::Md: return "md";
    case CovarianceModelKind::Mcd: return "mcd";
  }
  return "?";
}

CovarianceModelKind model_from_name(const std::string& name) {
  if (name == "m0") return CovarianceModelKind::M0;
  if (name == "mc") return CovarianceModelKind::Mc;
  if (name == "md") return CovarianceModelKind::Md;
  if (name == "mcd") return CovarianceModelKind::Mcd;
  throw std::invalid_argument("unknown covariance model: " + name);
}

int extra_param_count(CovarianceModelKind kind) {
  switch (kind) {
    case CovarianceModelKind::M0: return 0;
    case CovarianceModelKind::Mc: return 1;
    case CovarianceModelKind::Md: return 1;
    case CovarianceModelKind::Mcd: return 2;
  }
  return 0;
}

bool uses_sigma_c(CovarianceModelKind kind) {
  return kind == CovarianceModelKind::Mc || kind == CovarianceModelKind::Mcd;
}

bool uses_sigma_d(CovarianceModelKind kind) {
  return kind == CovarianceModelKind::Md || kind == CovarianceModelKind::Mcd;
}

void Hyperparams::validate() const {
  if (sigma_q2 < 0.0 || sigma_c2 < 0.0 || sigma_d2 < 0.0)
    throw std::invalid_argument("Hyperparams: variances must be >= 0");
  if (!(sigma_e2 > 0.0))
    throw std::invalid_argument("Hyperparams: sigma_e2 must be > 0");
}

ChannelBasis build_basis(double dt_s, int n_lags, int n_basis,
                         double bandwidth_hz, const ConvolutionOperator& s_op,
                         bool endpoint_centers) {
  if (n_basis > n_lags)
    throw std::invalid_argument("build_basis: n_basis > n_lags");
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("build_basis: bandwidth_hz must be > 0");
  if (s_op.n_lags != n_lags)
    throw std::invalid_argument("build_basis: s_op.n_lags mismatch");

  ChannelBasis basis;
  basis.n_lags = n_lags;
  basis.n_basis = n_basis;
  basis.dt_s = dt_s;
  basis.scale_s = 0.42 / bandwidth_hz;
  basis.centers_s.resize(n_basis);
  const double span = n_lags * dt_s;
  for (int m = 0; m < n_basis; ++m) {
    basis.centers_s[m] = endpoint_centers
        ? (n_basis > 1 ? m * (n_lags - 1) * dt_s / (n_basis - 1) : 0.0)
        : (m + 0.5) * span / n_basis;
  }

  basis.B.resize(n_lags, n_basis);
  const double inv2s2 = 1.0 / (2.0 * basis.scale_s * basis.scale_s);
  for (int l = 0; l < n_lags; ++l) {
    for (int m = 0; m < n_basis; ++m) {
      const double d = l * dt_s - basis.centers_s[m];
      basis.B(l, m) = std::exp(-d * d * inv2s2);
    }
  }

  basis.H.resize(s_op.n_rows, n_basis);
  for (int m = 0; m < n_basis; ++m)
    basis.H.col(m) = s_op.apply(basis.B.col(m));
  return basis;
}

VectorXd amplitudes_from_state(const ChannelBasis& basis, const VectorXd& theta) {
  if (theta.size() != basis.n_basis)
    throw std::invalid_argument("amplitudes_from_state: theta length != n_basis");
  return basis.B * theta;
}

std::vector<int> active_lags(const VectorXd& a) {
  const double thresh = 1e-12 * a.cwiseAbs().maxCoeff();
  std::vector<int> lags;
  for (int l = 0; l < a.size(); ++l)
    if (std::abs(a[l]) > thresh) lags.push_back(l);
  return lags;
}

MatrixXd covariance_background_factor(CovarianceModelKind kind,
                                      const Hyperparams& hp,
                                      const ChannelBasis& basis,
                                      const ConvolutionOperator& u_op,
                                      const VectorXd& theta) {
  hp.validate();
  const VectorXd a = amplitudes_from_state(basis, theta);
  const int n = u_op.n_rows;
  const bool with_c = uses_sigma_c(kind) && hp.sigma_c2 > 0.0;
  const bool with_d = uses_sigma_d(kind) && hp.sigma_d2 > 0.0;
  const bool zero_a = a.cwiseAbs().maxCoeff() == 0.0;

  std::vector<int> lags;
  if (with_c && !zero_a) lags = active_lags(a);

  const int cols = static_cast<int>(lags.size()) + ((with_d && !zero_a) ? 1 : 0);
  MatrixXd g = MatrixXd::Zero(n, cols);
  const double sc = std::sqrt(hp.sigma_c2);
  const int len = u_op.kernel.size();
  int j = 0;
  for (int l : lags) {
    const double w = sc * a[l];
    const int hi = std::min(n, l + len);
    for (int row = l; row < hi; ++row)
      g(row, j) = w * u_op.kernel.samples[row - l];
    ++j;
  }
  if (with_d && !zero_a)
    g.col(j) = std::sqrt(hp.sigma_d2) * u_op.apply(a);
  return g;
}

MatrixXd covariance(CovarianceModelKind kind, const Hyperparams& hp,
                    const ChannelBasis& basis, const ConvolutionOperator& u_op,
                    const VectorXd& theta) {
  const MatrixXd g =
      covariance_background_factor(kind, hp, basis, u_op, theta);
  MatrixXd r = hp.sigma_e2 * MatrixXd::Identity(u_op.n_rows, u_op.n_rows);
  if (g.cols() > 0)
    r.selfadjointView<Eigen::Lower>().rankUpdate(g);
  return MatrixXd(r.selfadjointView<Eigen::Lower>());
}

}  // namespace mpt
