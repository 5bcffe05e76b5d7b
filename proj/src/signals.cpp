#include "signals.hpp"

#include <cmath>

namespace mpt {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void WaveformSpec::validate() const {
  if (!(sample_hz > 0.0) || !(bandwidth_hz > 0.0) || !(pulse_s > 0.0))
    throw std::invalid_argument("WaveformSpec: sample_hz, bandwidth_hz, pulse_s must be > 0");
  if (carrier_hz - bandwidth_hz / 2.0 < 0.0)
    throw std::invalid_argument("WaveformSpec: sweep start carrier_hz - bandwidth_hz/2 below 0");
}

SampledWaveform generate_lfm(const WaveformSpec& spec) {
  spec.validate();
  const double dt = 1.0 / spec.sample_hz;
  const double f0 = spec.carrier_hz - spec.bandwidth_hz / 2.0;
  const double slope = spec.bandwidth_hz / (2.0 * spec.pulse_s);
  const int n = static_cast<int>(std::lround(spec.pulse_s * spec.sample_hz));

  SampledWaveform w;
  w.dt_s = dt;
  w.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    w.samples[i] = std::cos(kTwoPi * (f0 * t + slope * t * t));
  }
  return w;
}

SampledWaveform companion_waveform(const WaveformSpec& spec) {
  spec.validate();
  const double dt = 1.0 / spec.sample_hz;
  const double f0 = spec.carrier_hz - spec.bandwidth_hz / 2.0;
  const double slope = spec.bandwidth_hz / (2.0 * spec.pulse_s);
  const int n = static_cast<int>(std::lround(spec.pulse_s * spec.sample_hz));

  SampledWaveform w;
  w.dt_s = dt;
  w.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    // sdot(t) = -sin(phase) * dphase/dt, instantaneous frequency f0 + 2*slope*t
    const double phase = kTwoPi * (f0 * t + slope * t * t);
    const double sdot = -std::sin(phase) * kTwoPi * (f0 + 2.0 * slope * t);
    w.samples[i] = t * sdot;
  }
  return w;
}

VectorXd ConvolutionOperator::apply(const VectorXd& coeffs) const {
  if (static_cast<int>(coeffs.size()) != n_lags)
    throw std::invalid_argument("ConvolutionOperator::apply: coeffs length != n_lags");
  const int len = kernel.size();
  VectorXd out = VectorXd::Zero(n_rows);
  for (int l = 0; l < n_lags; ++l) {
    const double c = coeffs[l];
    if (c == 0.0) continue;
    const int hi = std::min(n_rows, l + len);
    for (int n = l; n < hi; ++n) out[n] += c * kernel.samples[n - l];
  }
  return out;
}

VectorXd ConvolutionOperator::apply_adjoint(const VectorXd& v) const {
  if (static_cast<int>(v.size()) != n_rows)
    throw std::invalid_argument("ConvolutionOperator::apply_adjoint: vector length != n_rows");
  const int len = kernel.size();
  VectorXd out = VectorXd::Zero(n_lags);
  for (int l = 0; l < n_lags; ++l) {
    const int hi = std::min(n_rows, l + len);
    double acc = 0.0;
    for (int n = l; n < hi; ++n) acc += kernel.samples[n - l] * v[n];
    out[l] = acc;
  }
  return out;
}

VectorXd toeplitz_apply(const ConvolutionOperator& op, const VectorXd& coeffs) {
  return op.apply(coeffs);
}

VectorXd linearized_scale(const SampledWaveform& s, const SampledWaveform& u,
                          double r, int tau_samples) {
  if (s.size() != u.size())
    throw std::invalid_argument("linearized_scale: s and u length mismatch");
  if (tau_samples < 0)
    throw std::invalid_argument("linearized_scale: negative delay");
  const int len = s.size();
  VectorXd out = VectorXd::Zero(len + tau_samples);
  for (int n = 0; n < len; ++n)
    out[n + tau_samples] = s.samples[n] + r * u.samples[n];
  return out;
}

}  // namespace mpt
