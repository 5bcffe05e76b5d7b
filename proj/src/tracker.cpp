#include "tracker.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

namespace mpt {

EkfTracker::EkfTracker(const ChannelBasis& basis, const ConvolutionOperator& u_op)
    : basis_(&basis), u_op_(&u_op) {
  if (u_op.n_lags != basis.n_lags)
    throw std::invalid_argument("EkfTracker: u_op.n_lags != basis.n_lags");
  if (u_op.n_rows != basis.H.rows())
    throw std::invalid_argument("EkfTracker: u_op.n_rows != rows of H");
  hth_.noalias() = basis.H.transpose() * basis.H;

  const int nl = basis.n_lags;
  uth_.resize(nl, basis.n_basis);
  utu_.resize(nl, nl);
  // Columns of U are the u kernel shifted by l rows; Gram entries reduce to
  // truncated kernel correlations.
  const int n = u_op.n_rows;
  const int len = u_op.kernel.size();
  for (int l = 0; l < nl; ++l) {
    VectorXd ul = VectorXd::Zero(n);
    const int hi = std::min(n, l + len);
    for (int row = l; row < hi; ++row) ul[row] = u_op.kernel.samples[row - l];
    uth_.row(l) = ul.transpose() * basis.H;
    for (int l2 = 0; l2 <= l; ++l2) {
      const int lo = l;                       // ul zero below l
      const int hi2 = std::min(hi, l2 + len); // u_{l2} zero at/above l2+len
      double acc = 0.0;
      for (int row = lo; row < hi2; ++row)
        acc += ul[row] * u_op.kernel.samples[row - l2];
      utu_(l, l2) = acc;
      utu_(l2, l) = acc;
    }
  }
}

FilterState EkfTracker::init(const VectorXd& prior_mean, double prior_var) {
  if (!(prior_var > 0.0))
    throw std::invalid_argument("EkfTracker::init: prior_var must be > 0");
  FilterState st;
  st.mean = prior_mean;
  st.cov = prior_var * MatrixXd::Identity(prior_mean.size(), prior_mean.size());
  st.ping_index = 0;
  return st;
}

FilterState EkfTracker::wls_init(const VectorXd& y_first) const {
  if (y_first.size() != basis_->H.rows())
    throw std::invalid_argument("wls_init: measurement length mismatch");
  const int m = basis_->n_basis;
  const double eps = 1e-6 * hth_.trace() / m;
  MatrixXd reg = hth_ + eps * MatrixXd::Identity(m, m);
  VectorXd mean = reg.llt().solve(basis_->H.transpose() * y_first);
  const double prior_var = 10.0 * std::pow(mean.cwiseAbs().maxCoeff() + 1.0, 2);
  return init(mean, prior_var);
}

StepOutput EkfTracker::step(const FilterState& state, const PingRecord& rec,
                            const Hyperparams& hp, CovarianceModelKind kind,
                            const VectorXd* offset) const {
  hp.validate();
  const MatrixXd& h = basis_->H;
  const int n = static_cast<int>(h.rows());
  const int m = basis_->n_basis;
  if (rec.y.size() != n)
    throw std::invalid_argument("step: measurement length mismatch");
  if (state.mean.size() != m)
    throw std::invalid_argument("step: state dimension mismatch");
  if (offset && offset->size() != n)
    throw std::invalid_argument("step: offset length mismatch");

  // Time update
  const VectorXd theta_p = state.mean;
  MatrixXd p_pred = 0.5 * (state.cov + state.cov.transpose());
  p_pred.diagonal().array() += hp.sigma_q2;

  Eigen::LLT<MatrixXd> llt_p(p_pred);
  if (llt_p.info() != Eigen::Success)
    throw numerical_error("step: predicted covariance not positive definite");
  const MatrixXd lp = llt_p.matrixL();

  // Innovation
  VectorXd nu = rec.y - h * theta_p;
  if (offset) nu -= *offset;

  const double e = hp.sigma_e2;
  const bool with_c = uses_sigma_c(kind) && hp.sigma_c2 > 0.0;
  const bool with_d = uses_sigma_d(kind) && hp.sigma_d2 > 0.0;

  VectorXd a, utnu, utua;
  std::vector<int> lags;
  bool have_bg = false;
  if (with_c || with_d) {
    a = basis_->B * theta_p;
    if (a.cwiseAbs().maxCoeff() > 0.0) {
      have_bg = true;
      utnu = u_op_->apply_adjoint(nu);
      utua.noalias() = utu_ * a;
      if (with_c) lags = active_lags(a);
    }
  }

  const int nact = have_bg && with_c ? static_cast<int>(lags.size()) : 0;
  const int nd = have_bg && with_d ? 1 : 0;
  const int gtot = nact + nd;
  const double sc = std::sqrt(hp.sigma_c2);
  const double sd = std::sqrt(hp.sigma_d2);

  // Background factor G = [sc*a_l*u_l ..., sd*U*a], R = sigma_e^2 I + G G'.
  // R^{-1} acts through the small core C = I + G'G/e; the state update uses
  // the information form, whose normal matrix Pp^{-1} + H'R^{-1}H is
  // positive definite by construction.
  MatrixXd gth(gtot, m);    // G' H
  VectorXd gtnu(gtot);      // G' nu
  MatrixXd gtg(gtot, gtot); // G' G

  for (int i = 0; i < nact; ++i) {
    const int l = lags[i];
    const double w = sc * a[l];
    gth.row(i) = w * uth_.row(l);
    gtnu[i] = w * utnu[l];
    for (int j = 0; j <= i; ++j) {
      const double v = w * sc * a[lags[j]] * utu_(l, lags[j]);
      gtg(i, j) = v;
      gtg(j, i) = v;
    }
  }
  if (nd) {
    const int r = nact;
    gth.row(r).noalias() = sd * (a.transpose() * uth_);
    gtnu[r] = sd * a.dot(utnu);
    for (int i = 0; i < nact; ++i)
      gtg(r, i) = gtg(i, r) = sd * sc * a[lags[i]] * utua[lags[i]];
    gtg(r, r) = sd * sd * a.dot(utua);
  }

  const VectorXd htnu = h.transpose() * nu;
  MatrixXd ar;          // H' R^-1 H
  VectorXd br;          // H' R^-1 nu
  double nu_rinv_nu;    // nu' R^-1 nu
  double logdet_r;
  if (gtot == 0) {
    ar = hth_ / e;
    br = htnu / e;
    nu_rinv_nu = nu.squaredNorm() / e;
    logdet_r = n * std::log(e);
  } else {
    MatrixXd core = gtg / e;
    core.diagonal().array() += 1.0;
    Eigen::LLT<MatrixXd> llt_c(core);
    if (llt_c.info() != Eigen::Success)
      throw numerical_error("step: measurement covariance factorization failed");
    const MatrixXd cinv_gth = llt_c.solve(gth);
    const VectorXd cinv_gtnu = llt_c.solve(gtnu);
    ar = (hth_ - gth.transpose() * cinv_gth / e) / e;
    br = (htnu - gth.transpose() * cinv_gtnu / e) / e;
    nu_rinv_nu = (nu.squaredNorm() - gtnu.dot(cinv_gtnu) / e) / e;
    logdet_r = n * std::log(e) +
               2.0 * MatrixXd(llt_c.matrixL()).diagonal().array().log().sum();
  }
  ar = 0.5 * (ar + ar.transpose());

  MatrixXd s_m = llt_p.solve(MatrixXd::Identity(m, m));  // Pp^-1
  const double logdet_pp =
      2.0 * MatrixXd(lp).diagonal().array().log().sum();
  s_m += ar;
  s_m = 0.5 * (s_m + s_m.transpose());
  Eigen::LLT<MatrixXd> llt_s(s_m);
  if (llt_s.info() != Eigen::Success)
    throw numerical_error("step: information matrix factorization failed");
  MatrixXd p_post = llt_s.solve(MatrixXd::Identity(m, m));

  StepOutput out;
  // Sigma = R + H Pp H'; matrix inversion and determinant lemmas give both
  // quadratic form and determinant in M-dimensional quantities.
  out.nis = nu_rinv_nu - br.dot(p_post * br);
  out.logdet_sigma =
      logdet_r + logdet_pp +
      2.0 * MatrixXd(llt_s.matrixL()).diagonal().array().log().sum();
  out.loglik_increment = -0.5 * (out.nis + out.logdet_sigma);
  if (!std::isfinite(out.loglik_increment))
    throw numerical_error("step: non-finite log-likelihood increment");

  out.state.mean = theta_p + p_post * br;
  out.state.cov = 0.5 * (p_post + p_post.transpose());
  out.state.ping_index = rec.ping_index;
  out.innovation = std::move(nu);
  return out;
}

std::pair<std::vector<StepOutput>, double> EkfTracker::run(
    const std::vector<PingRecord>& records, const Hyperparams& hp,
    CovarianceModelKind kind, const FilterState& init_state,
    const std::vector<VectorXd>* offsets) const {
  if (records.empty())
    throw std::invalid_argument("run: empty record sequence");
  if (offsets && offsets->size() != records.size())
    throw std::invalid_argument("run: offsets length mismatch");

  std::vector<StepOutput> outputs;
  outputs.reserve(records.size());
  double total = 0.0;
  FilterState state = init_state;
  for (size_t k = 0; k < records.size(); ++k) {
    try {
      outputs.push_back(step(state, records[k], hp, kind,
                             offsets ? &(*offsets)[k] : nullptr));
    } catch (const numerical_error& err) {
      throw numerical_error(std::string(err.what()) + " (ping " +
                            std::to_string(records[k].ping_index) + ")");
    }
    state = outputs.back().state;
    total += outputs.back().loglik_increment;
  }
  return {std::move(outputs), total};
}

double EkfTracker::run_loglik(const std::vector<PingRecord>& records,
                              const Hyperparams& hp, CovarianceModelKind kind,
                              const FilterState& init_state,
                              const std::vector<VectorXd>* offsets) const {
  if (records.empty())
    throw std::invalid_argument("run_loglik: empty record sequence");
  double total = 0.0;
  FilterState state = init_state;
  for (size_t k = 0; k < records.size(); ++k) {
    StepOutput out = step(state, records[k], hp, kind,
                          offsets ? &(*offsets)[k] : nullptr);
    total += out.loglik_increment;
    state = std::move(out.state);
  }
  return total;
}

}  // namespace mpt
