#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "resample.hpp"
#include "signals.hpp"

using namespace mpt;

TEST_CASE("lfm chirp matches its analytic definition") {
  WaveformSpec spec;  // defaults: 3 kHz carrier, 4 kHz BW, 25 ms, 15 kHz
  const SampledWaveform s = generate_lfm(spec);

  CHECK(s.size() == 375);
  CHECK(s.dt_s == doctest::Approx(1.0 / 15000.0));

  // Up-sweep from fc - BW/2 with zero initial phase:
  // s(t) = cos(2 pi ((fc - BW/2) t + BW t^2 / (2 T))).
  const double f0 = spec.carrier_hz - spec.bandwidth_hz / 2.0;
  for (int n = 0; n < s.size(); n += 7) {
    const double t = n * s.dt_s;
    const double phase =
        2.0 * M_PI * (f0 * t + spec.bandwidth_hz * t * t / (2.0 * spec.pulse_s));
    CHECK(s.samples[n] == doctest::Approx(std::cos(phase)).epsilon(1e-12));
  }
  CHECK(s.samples[0] == doctest::Approx(1.0));
}

TEST_CASE("companion waveform is t times the chirp derivative") {
  WaveformSpec spec;
  const SampledWaveform u = companion_waveform(spec);
  const double f0 = spec.carrier_hz - spec.bandwidth_hz / 2.0;
  CHECK(u.size() == 375);
  for (int n = 0; n < u.size(); n += 11) {
    const double t = n * u.dt_s;
    const double phase =
        2.0 * M_PI * (f0 * t + spec.bandwidth_hz * t * t / (2.0 * spec.pulse_s));
    const double finst = f0 + spec.bandwidth_hz * t / spec.pulse_s;
    const double sdot = -2.0 * M_PI * finst * std::sin(phase);
    CHECK(u.samples[n] == doctest::Approx(t * sdot).epsilon(1e-12));
  }
  CHECK(u.samples[0] == 0.0);
}

TEST_CASE("convolution operator agrees with the dense Toeplitz matrix") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  const int n = 40, nl = 12, klen = 17;
  VectorXd kernel(klen);
  for (int i = 0; i < klen; ++i) kernel[i] = nd(gen);

  ConvolutionOperator op;
  op.kernel.samples = kernel;
  op.kernel.dt_s = 1.0;
  op.n_rows = n;
  op.n_lags = nl;

  const Eigen::MatrixXd dense = oracle::toeplitz_matrix(kernel, n, nl);
  for (int rep = 0; rep < 5; ++rep) {
    VectorXd c(nl), v(n);
    for (int i = 0; i < nl; ++i) c[i] = nd(gen);
    for (int i = 0; i < n; ++i) v[i] = nd(gen);
    CHECK((op.apply(c) - dense * c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((toeplitz_apply(op, c) - dense * c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((op.apply_adjoint(v) - dense.transpose() * v).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("resample_scaled matches the oversampled oracle") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  const oracle::FineResampler fine(s.samples, s.dt_s);

  const int n_out = 450;
  for (const double beta : {1.0, 1.0005, 0.999}) {
    for (const double tau : {0.0, 3.2 * s.dt_s, 17.75 * s.dt_s}) {
      const VectorXd lib = resample_scaled(s, beta, tau, n_out);
      const oracle::VectorXd ref = fine.scaled(beta, tau, n_out);
      // Interior agreement only: the chirp is truncated abruptly, so both
      // interpolators ring (differently) within a tap length of the support
      // edges at n ~ tau and n ~ s.size()/beta + tau.
      double worst = 0.0;
      for (int n = 40; n < 340; ++n)
        worst = std::max(worst, std::abs(lib[n] - ref[n]));
      // Bounds the library interpolator's error for content reaching 2/3 of
      // Nyquist with its default 15 half-taps.
      CHECK(worst < 5e-3);
    }
  }
}

TEST_CASE("linearized_scale error shrinks quadratically in r") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  const SampledWaveform u = companion_waveform(spec);
  const oracle::FineResampler fine(s.samples, s.dt_s);
  const int tau_samples = 10;
  const int n_out = s.size() + tau_samples;
  const double tau = tau_samples * s.dt_s;

  auto err = [&](double r) {
    // Exact s(beta(t - tau)) with log(beta) = r versus the first-order
    // expansion s(t - tau) + r * u(t - tau); the gap is second order in r.
    const double beta = std::exp(r);
    const VectorXd exact = fine.scaled(beta, tau, n_out);
    const VectorXd lin = linearized_scale(s, u, r, tau_samples);
    // Skip the support edges where the oracle's interpolation rings.
    return (exact - lin).segment(40, n_out - 80).norm();
  };

  // r small enough that r * (peak phase rate) * T stays well below a radian,
  // keeping the expansion in its quadratic regime.
  const double e1 = err(2e-4), e2 = err(1e-4);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("fractional_delay shifts by the requested amount") {
  WaveformSpec spec;
  const SampledWaveform s = generate_lfm(spec);
  const VectorXd shifted = fractional_delay(s.samples, 4.0);
  double worst = 0.0;
  for (int n = 30; n < 300; ++n)
    worst = std::max(worst, std::abs(shifted[n] - s.samples[n - 4]));
  CHECK(worst < 1e-9);
}
