// Transmitted waveform generation and the convolution operators of the
// linearized wideband measurement model.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace mpt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Thrown when a linear-algebra step (Cholesky, solve) breaks down.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WaveformSpec {
  double carrier_hz = 3000.0;
  double bandwidth_hz = 4000.0;
  double pulse_s = 0.025;
  double sample_hz = 15000.0;

  void validate() const;
};

struct SampledWaveform {
  VectorXd samples;
  double dt_s = 0.0;

  int size() const { return static_cast<int>(samples.size()); }
};

// Zero-padded Toeplitz operator [X]_{n,l} = x[n-l]; only the kernel is
// stored, products are direct convolutions.
struct ConvolutionOperator {
  SampledWaveform kernel;
  int n_rows = 0;  // N
  int n_lags = 0;  // N_l

  // result[n] = sum_l kernel[n-l] * coeffs[l]
  VectorXd apply(const VectorXd& coeffs) const;
  // result[l] = sum_n kernel[n-l] * v[n]   (adjoint, length n_lags)
  VectorXd apply_adjoint(const VectorXd& v) const;
};

// Up-sweep LFM chirp from carrier - BW/2, zero initial phase.
SampledWaveform generate_lfm(const WaveformSpec& spec);

// u[n] = n*dt * sdot(n*dt) with the analytic chirp derivative.
SampledWaveform companion_waveform(const WaveformSpec& spec);

VectorXd toeplitz_apply(const ConvolutionOperator& op, const VectorXd& coeffs);

// First-order time-scaling: delayed s plus r times delayed u.
// Output length = s.size() + tau_samples.
VectorXd linearized_scale(const SampledWaveform& s, const SampledWaveform& u,
                          double r, int tau_samples);

}  // namespace mpt
