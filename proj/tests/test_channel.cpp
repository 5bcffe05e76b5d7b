#include <doctest.h>

#include <random>

#include "channel.hpp"
#include "oracles.hpp"

using namespace mpt;

namespace {

struct Fixture {
  WaveformSpec spec;
  SampledWaveform s, u;
  ConvolutionOperator s_op, u_op;
  ChannelBasis basis;

  Fixture(int n = 96, int nl = 16, int m = 8) {
    s = generate_lfm(spec);
    u = companion_waveform(spec);
    s_op = ConvolutionOperator{s, n, nl};
    u_op = ConvolutionOperator{u, n, nl};
    basis = build_basis(s.dt_s, nl, m, spec.bandwidth_hz, s_op);
  }
};

}  // namespace

TEST_CASE("model name round trips and parameter counts") {
  for (auto kind : {CovarianceModelKind::M0, CovarianceModelKind::Mc,
                    CovarianceModelKind::Md, CovarianceModelKind::Mcd})
    CHECK(model_from_name(model_name(kind)) == kind);
  CHECK_THROWS_AS(model_from_name("m1"), std::invalid_argument);
  CHECK(extra_param_count(CovarianceModelKind::M0) == 0);
  CHECK(extra_param_count(CovarianceModelKind::Mc) == 1);
  CHECK(extra_param_count(CovarianceModelKind::Md) == 1);
  CHECK(extra_param_count(CovarianceModelKind::Mcd) == 2);
  CHECK(!uses_sigma_c(CovarianceModelKind::Md));
  CHECK(uses_sigma_c(CovarianceModelKind::Mcd));
  CHECK(uses_sigma_d(CovarianceModelKind::Md));
  CHECK(!uses_sigma_d(CovarianceModelKind::Mc));
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  hp.sigma_e2 = 1.0;
  CHECK_NOTHROW(hp.validate());
  hp.sigma_q2 = -1.0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  hp.sigma_q2 = 0.0;
  hp.sigma_e2 = 0.0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("basis geometry: gaussian columns, midpoint centers, H = S B") {
  Fixture f;
  const ChannelBasis& b = f.basis;
  CHECK(b.scale_s == doctest::Approx(0.42 / f.spec.bandwidth_hz));
  CHECK(b.B.rows() == 16);
  CHECK(b.B.cols() == 8);
  const double span = 16 * f.s.dt_s;
  for (int m = 0; m < 8; ++m)
    CHECK(b.centers_s[m] == doctest::Approx((m + 0.5) * span / 8));
  // Gaussian entries.
  for (int l = 0; l < 16; l += 3)
    for (int m = 0; m < 8; m += 2) {
      const double d = l * f.s.dt_s - b.centers_s[m];
      CHECK(b.B(l, m) ==
            doctest::Approx(std::exp(-d * d / (2 * b.scale_s * b.scale_s))));
    }
  // H = dense Toeplitz(s) * B.
  const Eigen::MatrixXd s_dense = oracle::toeplitz_matrix(f.s.samples, 96, 16);
  CHECK((b.H - s_dense * b.B).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_basis rejects bad arguments") {
  Fixture f;
  CHECK_THROWS_AS(build_basis(f.s.dt_s, 16, 17, 4000.0, f.s_op),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_basis(f.s.dt_s, 16, 8, 0.0, f.s_op),
                  std::invalid_argument);
}

TEST_CASE("active lags keep coefficients above the relative threshold") {
  VectorXd a(5);
  a << 1.0, 0.0, 1e-13, -2.0, 3e-12;
  const std::vector<int> lags = active_lags(a);
  CHECK(lags == std::vector<int>{0, 3, 4});
}

TEST_CASE("covariance matches the dense construction for all models") {
  Fixture f;
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd;
  const Eigen::MatrixXd u_dense = oracle::toeplitz_matrix(f.u.samples, 96, 16);

  Hyperparams hp;
  hp.sigma_e2 = 0.7;
  hp.sigma_q2 = 0.1;
  hp.sigma_c2 = 3e-3;
  hp.sigma_d2 = 2e-4;

  for (int rep = 0; rep < 3; ++rep) {
    VectorXd theta(8);
    for (int i = 0; i < 8; ++i) theta[i] = nd(gen);
    const VectorXd a = amplitudes_from_state(f.basis, theta);
    for (auto kind : {CovarianceModelKind::M0, CovarianceModelKind::Mc,
                      CovarianceModelKind::Md, CovarianceModelKind::Mcd}) {
      const MatrixXd r = covariance(kind, hp, f.basis, f.u_op, theta);
      const MatrixXd ref = oracle::dense_covariance(
          uses_sigma_c(kind), uses_sigma_d(kind), hp.sigma_e2, hp.sigma_c2,
          hp.sigma_d2, u_dense, a);
      const double scale = ref.cwiseAbs().maxCoeff();
      CHECK((r - ref).cwiseAbs().maxCoeff() / scale < 1e-12);

      // Factor consistency: R = sigma_e^2 I + G G'.
      const MatrixXd g =
          covariance_background_factor(kind, hp, f.basis, f.u_op, theta);
      MatrixXd r2 = hp.sigma_e2 * MatrixXd::Identity(96, 96);
      if (g.cols() > 0) r2 += g * g.transpose();
      CHECK((r - r2).cwiseAbs().maxCoeff() / scale < 1e-12);
    }
  }
}

TEST_CASE("covariance with zero state reduces to white noise") {
  Fixture f;
  Hyperparams hp;
  hp.sigma_c2 = 1.0;
  hp.sigma_d2 = 1.0;
  const VectorXd theta = VectorXd::Zero(8);
  const MatrixXd r =
      covariance(CovarianceModelKind::Mcd, hp, f.basis, f.u_op, theta);
  CHECK((r - MatrixXd::Identity(96, 96)).cwiseAbs().maxCoeff() == 0.0);
}
